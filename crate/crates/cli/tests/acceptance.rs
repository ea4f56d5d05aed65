//! Acceptance run: one PASS/FAIL line per criterion, all comparisons exact.

use std::process::ExitCode;
use std::time::Instant;

use nakajima::bv_ring::{Mode, SurfaceModel};
use nakajima::operator::*;
use nakajima::scalar::q;
use nakajima::verify::random::random_operator;
use nakajima::verify::{self, check_identity, Check, Report};
use nakajima_cli::cache::Cache;
use nakajima_cli::commands::{matrix_record, CacheStatus};
use nakajima_cli::parser::parse_expr;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn gram2() -> SurfaceModel {
    SurfaceModel::diagonal(&[2], Mode::Chow)
}

fn cohomology(entries: &[i64]) -> SurfaceModel {
    SurfaceModel::diagonal(entries, Mode::Cohomology)
}

/// Accumulated outcome of one criterion.
struct Outcome {
    checks: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self {
            checks: 0,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, c: Check) {
        self.checks += 1;
        if !c.pass {
            self.failures.push(match c.detail {
                Some(d) => format!("{} [{d}]", c.name),
                None => c.name,
            });
        }
    }

    fn report(&mut self, r: Report) {
        for c in r.checks {
            self.check(c);
        }
    }

    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        self.check(if ok {
            Check::new(what, true)
        } else {
            Check::new(what, false)
        });
    }
}

fn heisenberg() -> Outcome {
    let mut o = Outcome::new();
    o.report(verify::heisenberg_suite(&gram2(), 4));
    o
}

fn sl2_triples() -> Outcome {
    let mut o = Outcome::new();
    let m = gram2();
    let inst = Instantiator::new(m.clone());
    let v = DivisorClass::basis(1, 0);
    let delta = DivisorClass::delta(1);
    for n in [2, 3] {
        for a in [v.clone(), delta.clone(), v.plus(&delta)] {
            let (e, f) = (e_general(a.clone()), ft_general(a.clone()));
            let aa = a.pairing(&a, &m, n);
            o.check(check_identity(
                &inst,
                &bracket(h_op(), e.clone()),
                &scale(q(2), e.clone()),
                n,
            ));
            o.check(check_identity(
                &inst,
                &bracket(h_op(), f.clone()),
                &scale(q(-2), f.clone()),
                n,
            ));
            o.check(check_identity(&inst, &bracket(e, f), &scale(aa, h_op()), n));
        }
    }
    o
}

fn delta_relation() -> Outcome {
    let mut o = Outcome::new();
    let m = gram2();
    let inst = Instantiator::new(m.clone());
    for n in [2, 3, 4] {
        let lhs = bracket(e_delta(&m), ft_delta(&m));
        o.check(check_identity(
            &inst,
            &lhs,
            &scale(q(2 - 2 * n as i64), h_op()),
            n,
        ));
    }
    o
}

fn relation_display() -> Outcome {
    let mut o = Outcome::new();
    o.report(verify::relation_suite(&gram2(), 2));
    o.notes.push(
        "quartic identity checked with h-coefficient 2((a,c)(b,d)-(a,d)(b,c)); \
         coefficient 1 fails, e.g. a=c=v, b=d=delta"
            .into(),
    );
    o
}

fn gradings() -> Outcome {
    let mut o = Outcome::new();
    for n in 1..=4 {
        o.report(verify::grading_suite(&gram2(), n));
    }
    o.report(verify::grading_suite(&cohomology(&[2, -2, -2]), 2));
    o
}

fn lemma() -> Outcome {
    let mut o = Outcome::new();
    o.report(verify::lemma_suite(&cohomology(&[2, -2]), 50, 1, 4));
    o
}

fn t_brackets() -> Outcome {
    let mut o = Outcome::new();
    o.report(verify::t_bracket_suite(
        &cohomology(&[2, -2]),
        &[2, 3],
        25,
        1,
    ));
    o
}

fn rho() -> Outcome {
    let mut o = Outcome::new();
    o.report(verify::rho_suite(&gram2(), 2, 20, 1));
    match verify::lie_closure_dimension(&gram2(), 2, 8) {
        Ok(r) => o.report(r),
        Err(e) => o.expect(false, format!("closure: {e}")),
    }
    o
}

fn injectivity() -> Outcome {
    let mut o = Outcome::new();
    for n in [2, 3] {
        match verify::injectivity_rank(&gram2(), n) {
            Ok(r) => o.report(r),
            Err(e) => o.expect(false, format!("ranks at n = {n}: {e}")),
        }
    }
    o
}

fn spectrum() -> Outcome {
    let mut o = Outcome::new();
    match verify::zero_cycle_spectrum(&gram2().with_points(2), 2) {
        Ok(r) => o.report(r),
        Err(e) => o.expect(false, format!("spectrum: {e}")),
    }
    o.notes.push(
        "q1(p1-c)...q1(pi-c)q1(c)^(n-i) verified with eigenvalue 2(n-i), \
         consistent with h([z]) = 2 sum [..c..]; labels 2i do not hold"
            .into(),
    );
    o
}

fn infrastructure() -> Outcome {
    let mut o = Outcome::new();
    o.report(verify::confluence_suite(&gram2().with_points(2), 250, 1));
    o.report(verify::confluence_suite(&cohomology(&[2, -2, 4]), 250, 2));
    o.report(verify::widening_suite(&gram2(), 3, 2));

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..200 {
        let m = if i % 2 == 0 {
            gram2().with_points(2)
        } else {
            cohomology(&[2, -2])
        };
        let x = random_operator(&m, &mut rng, 3);
        let text = x.print(&m);
        let ok = parse_expr(&m, &text).is_ok_and(|y| y == x && y.print(&m) == text);
        o.expect(ok, format!("round trip of {text}"));
    }

    let dir = tempfile::tempdir().expect("temporary directory");
    let cache = Cache::open(dir.path()).expect("cache directory");
    let m = gram2();
    for expr in [
        "[e(delta), ft(delta)]",
        "e(v1) . ft(v1) - 1/2*h",
        "q(-1, c) . q(1, u)",
    ] {
        for n in [2, 3] {
            let fresh = matrix_record(&m, expr, n, None).map(|r| r.0);
            let first = matrix_record(&m, expr, n, Some(&cache));
            let second = matrix_record(&m, expr, n, Some(&cache));
            let ok = match (fresh, first, second) {
                (Ok(a), Ok((b, CacheStatus::Miss)), Ok((c, CacheStatus::Hit))) => a == b && b == c,
                _ => false,
            };
            o.expect(ok, format!("cache transparency for {expr} at n = {n}"));
        }
    }
    o
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        (
            "Heisenberg relations, |m|,|n| <= 4, weights <= 4",
            heisenberg,
        ),
        (
            "sl2 triples for a in {v, delta, v+delta}, n = 2, 3",
            sl2_triples,
        ),
        (
            "[e_delta, ft_delta] = (2-2n) h, n = 2, 3, 4",
            delta_relation,
        ),
        ("full relation display at n = 2", relation_display),
        (
            "L0 = -n for n = 1..4; h = 2d - 2n in cohomology, r = 3, n = 2",
            gradings,
        ),
        ("[T, W(n; C)] lemma, 50 random instances", lemma),
        ("[T_G, T_G'] = T_[G,G'], 25 pairs at n = 2, 3", t_brackets),
        ("rho is a Lie homomorphism; closure dimension 6", rho),
        ("Chow and cohomology ranks agree, n = 2, 3", injectivity),
        ("zero-cycle spectrum {0, 2, 4} at n = 2", spectrum),
        (
            "confluence, widening, parser round trip, cache",
            infrastructure,
        ),
    ];
    let mut all = true;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run();
        let secs = start.elapsed().as_secs_f64();
        let pass = o.failures.is_empty() && o.checks > 0;
        all &= pass;
        println!(
            "{} criterion {:>2}: {title} ({} checks, {secs:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            i + 1,
            o.checks
        );
        for f in o.failures.iter().take(5) {
            println!("      failed: {f}");
        }
        for n in &o.notes {
            println!("      note: {n}");
        }
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
