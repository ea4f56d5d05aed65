use std::collections::{BTreeMap, HashMap};

use super::{Check, Report};
use crate::bv_ring::{Mode, MultiPointClass, SurfaceModel};
use crate::error::{Error, Result};
use crate::fock::{FockState, FockVector};
use crate::matrix::{Span, SparseMatrix};
use crate::operator::{e_general, ft_general, h_op, DivisorClass, Instantiator};
use crate::scalar::{fmt_q, q, Q};

/// Multisets of size `k` drawn from `0..m`, as non-decreasing sequences.
fn multisets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|s: Vec<usize>| {
                let start = s.last().copied().unwrap_or(0);
                (start..m).map(move |i| {
                    let mut t = s.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

/// Sparse coordinates of vectors whose states are numbered on first sight.
#[derive(Default)]
struct Coordinates {
    index: HashMap<FockState, usize>,
}

impl Coordinates {
    fn of(&mut self, v: &FockVector) -> BTreeMap<usize, Q> {
        let mut out = BTreeMap::new();
        for (s, c) in v.terms() {
            let next = self.index.len();
            let i = *self.index.entry(s.clone()).or_insert(next);
            out.insert(i, c.clone());
        }
        out
    }
}

/// Per Chow degree, the rank of `{ e_{a_1}⋯e_{a_k} 1 }` in the Chow model and of
/// its image under the cycle class map.
pub fn injectivity_rank(model: &SurfaceModel, n: u32) -> Result<Report> {
    model.divisors().inverse()?;
    let chow = model.clone().with_mode(Mode::Chow);
    let coh = model.clone().with_mode(Mode::Cohomology);
    let inst = Instantiator::new(chow.clone());
    let r = model.rank();
    let gens: Vec<_> = (0..=r)
        .map(|i| inst.instantiate(&e_general(DivisorClass::basis(r, i)), n))
        .collect::<Result<_>>()?;

    let mut checks = Vec::new();
    // level[k] maps a multiset to its vector
    let mut level: BTreeMap<Vec<usize>, FockVector> =
        BTreeMap::from([(Vec::new(), FockVector::unit_class(n as usize))]);
    for d in 0..=2 * n as usize {
        if d > 0 {
            let mut next = BTreeMap::new();
            for word in multisets(r + 1, d) {
                let (first, rest) = word.split_first().expect("nonempty");
                let v = gens[*first].apply(&level[&rest.to_vec()])?;
                next.insert(word, v);
            }
            level = next;
        }
        let (mut chow_span, mut coh_span) = (Span::default(), Span::default());
        let (mut chow_coords, mut coh_coords) = (Coordinates::default(), Coordinates::default());
        for v in level.values() {
            chow_span.insert(chow_coords.of(v));
            coh_span.insert(coh_coords.of(&v.kunneth_expand(&coh)?));
        }
        let (a, b) = (chow_span.dim(), coh_span.dim());
        checks.push(
            Check::new(format!("degree {d}: chow rank = cohomology rank"), a == b)
                .with_detail(format!("chow {a}, cohomology {b}")),
        );
    }
    Ok(Report::new("injectivity", model, n, checks))
}

fn nullity(m: &SparseMatrix, lambda: &Q) -> usize {
    let shifted = m
        .minus(&SparseMatrix::identity(m.cols()).scaled(lambda))
        .expect("square");
    m.cols() - shifted.rank()
}

/// `h` on the Chow-degree-`2n` piece: exact spectrum and the eigenvectors
/// `q_1(p_1 − c)⋯q_1(p_i − c) q_1(c)^{n−i}`.
pub fn zero_cycle_spectrum(model: &SurfaceModel, n: u32) -> Result<Report> {
    if model.points() < n as usize {
        return Err(Error::Model(format!(
            "need at least {n} point symbols, have {}",
            model.points()
        )));
    }
    let model = model.clone().with_mode(Mode::Chow);
    let inst = Instantiator::new(model.clone());
    let h = inst.instantiate(&h_op(), n)?;
    let zero_cycles: Vec<usize> = (0..h.source.len())
        .filter(|&i| h.source.states()[i].chow_degree(&model) == 2 * n as usize)
        .collect();
    let hz = h.matrix.restrict(&zero_cycles, &zero_cycles);
    let dim = zero_cycles.len();
    let mut checks = Vec::new();

    // h has integer eigenvalues in [−2n, 2n] if it is diagonalizable over Q here
    let mut mults = BTreeMap::new();
    for l in -2 * n as i64..=2 * n as i64 {
        let k = nullity(&hz, &q(l));
        if k > 0 {
            mults.insert(l, k);
        }
    }
    let total: usize = mults.values().sum();
    let spectrum: Vec<i64> = mults.keys().copied().collect();
    let expected: Vec<i64> = (0..=n as i64).map(|i| 2 * i).collect();
    let detail = mults
        .iter()
        .map(|(l, k)| format!("{l}: {k}"))
        .collect::<Vec<_>>()
        .join(", ");
    checks.push(
        Check::new(
            format!("h diagonalizable on zero cycles (dim {dim})"),
            total == dim,
        )
        .with_detail(format!("multiplicities {{{detail}}}")),
    );
    checks.push(
        Check::new(
            format!("zero-cycle spectrum = {expected:?}"),
            spectrum == expected,
        )
        .with_detail(format!("found {spectrum:?}")),
    );

    let c = model.point();
    let point_minus_c = |j: usize| {
        let mut v = MultiPointClass::decorated(1, &[(0, model.symbol(j))]);
        v.add_assign_scaled(&MultiPointClass::decorated(1, &[(0, c)]), &q(-1));
        v
    };
    for i in 0..=n as usize {
        let mut cls = MultiPointClass::one(0);
        for j in 0..n as usize {
            let factor = if j < i {
                point_minus_c(j)
            } else {
                MultiPointClass::decorated(1, &[(0, c)])
            };
            cls = cls.tensor(&factor);
        }
        let v = FockVector::from_class(&model, &vec![1; n as usize], &cls)?;
        let lambda = q(2 * (n as i64 - i as i64));
        let hv = h.apply(&v)?;
        let name = format!(
            "h(q1(p-c)^{i} q1(c)^{}) = {} * itself",
            n as usize - i,
            fmt_q(&lambda)
        );
        let mut check = Check::new(name, hv == v.scaled(&lambda));
        if !check.pass {
            check = check.with_detail(format!("h(v) = {}", hv.display(&model)));
        }
        checks.push(check);
    }

    // h(q1(p1)⋯q1(pn)) = 2 Σ_j q1(p1)⋯q1(c)⋯q1(pn), c in position j
    let points: Vec<(u32, u8)> = (0..n as usize).map(|j| (1, model.symbol(j))).collect();
    let z = FockVector::creators(&model, &points);
    let mut rhs = FockVector::zero();
    for j in 0..n as usize {
        let mut items = points.clone();
        items[j] = (1, c);
        rhs.add_assign_scaled(&FockVector::creators(&model, &items), &q(2));
    }
    let hz_v = h.apply(&z)?;
    let mut check = Check::new(
        "h(q1(p1)...q1(pn)) = 2 sum_j (p_j replaced by c)",
        hz_v == rhs,
    );
    if !check.pass {
        check = check.with_detail(format!("h(z) = {}", hz_v.display(&model)));
    }
    checks.push(check);
    Ok(Report::new("spectrum", &model, n, checks))
}

/// Dimension of the matrix Lie algebra generated by `e_a`, `f̃_a` over the
/// basis `a ∈ (v_1, …, v_r, δ)`, closed under brackets up to `max_depth` rounds.
pub fn lie_closure_dimension(model: &SurfaceModel, n: u32, max_depth: u32) -> Result<Report> {
    let inst = Instantiator::new(model.clone());
    let r = model.rank();
    let mut elems: Vec<SparseMatrix> = Vec::new();
    let mut span = Span::default();
    let mut frontier = Vec::new();
    for i in 0..=r {
        let a = DivisorClass::basis(r, i);
        for g in [e_general(a.clone()), ft_general(a)] {
            let m = inst.instantiate(&g, n)?.matrix.clone();
            if span.insert(m.flatten()) {
                frontier.push(elems.len());
                elems.push(m);
            }
        }
    }
    let mut dims = vec![span.dim()];
    let mut stable = false;
    for _ in 0..max_depth {
        let mut next = Vec::new();
        for &i in &frontier {
            for j in 0..elems.len() {
                let b = elems[i].mul(&elems[j])?.minus(&elems[j].mul(&elems[i])?)?;
                if span.insert(b.flatten()) {
                    next.push(elems.len());
                    elems.push(b);
                }
            }
        }
        dims.push(span.dim());
        if next.is_empty() {
            stable = true;
            break;
        }
        frontier = next;
    }
    let dim = span.dim();
    // δ vanishes for n ≤ 1
    let w = if n >= 2 { r + 3 } else { r + 2 };
    let expected = w * (w - 1) / 2;
    let checks = vec![
        Check::new("closure stabilized", stable)
            .with_detail(format!("dimensions by depth {dims:?}")),
        Check::new(
            format!("closure dimension = {expected}"),
            stable && dim == expected,
        )
        .with_detail(format!("found {dim}")),
    ];
    Ok(Report::new("closure", model, n, checks))
}
