use rayon::prelude::*;

use super::{check_identity, compare, Check, Report};
use crate::bv_ring::{Basis, SurfaceModel};
use crate::matrix::SparseMatrix;
use crate::operator::{
    bracket, e_general, ft_general, h_op, l0, nakajima, scale, sum, ConcreteOperator, DivisorClass,
    Instantiator, OperatorExpr,
};
use crate::scalar::{q, Q};

type Relation = (OperatorExpr, OperatorExpr);

fn relations(model: &SurfaceModel, n: u32) -> Vec<Relation> {
    let r = model.rank();
    let basis: Vec<DivisorClass> = (0..=r).map(|i| DivisorClass::basis(r, i)).collect();
    let pair = |a: &DivisorClass, b: &DivisorClass| a.pairing(b, model, n);
    let e = |a: &DivisorClass| e_general(a.clone());
    let ft = |a: &DivisorClass| ft_general(a.clone());
    let kappa = |a: &DivisorClass, b: &DivisorClass| bracket(e(a), ft(b));
    let zero = OperatorExpr::Zero;
    let lin =
        |items: Vec<(Q, OperatorExpr)>| sum(items.into_iter().map(|(c, x)| scale(c, x)).collect());

    let mut out = Vec::new();
    for a in &basis {
        out.push((bracket(h_op(), e(a)), scale(q(2), e(a))));
        out.push((bracket(h_op(), ft(a)), scale(q(-2), ft(a))));
        out.push((bracket(e(a), ft(a)), scale(pair(a, a), h_op())));
    }
    for (i, a) in basis.iter().enumerate() {
        for b in &basis[i + 1..] {
            out.push((bracket(e(a), e(b)), zero.clone()));
            out.push((bracket(ft(a), ft(b)), zero.clone()));
        }
    }
    for a in &basis {
        for b in &basis {
            out.push((bracket(h_op(), kappa(a, b)), zero.clone()));
            out.push((
                sum(vec![kappa(a, b), kappa(b, a)]),
                scale(q(2) * pair(a, b), h_op()),
            ));
        }
    }
    for a in &basis {
        for b in &basis {
            for c in &basis {
                out.push((
                    bracket(kappa(a, b), e(c)),
                    lin(vec![
                        (q(2) * pair(a, b), e(c)),
                        (q(2) * pair(b, c), e(a)),
                        (q(-2) * pair(a, c), e(b)),
                    ]),
                ));
                out.push((
                    bracket(kappa(a, b), ft(c)),
                    lin(vec![
                        (q(-2) * pair(a, b), ft(c)),
                        (q(2) * pair(b, c), ft(a)),
                        (q(-2) * pair(a, c), ft(b)),
                    ]),
                ));
            }
        }
    }
    for a in &basis {
        for b in &basis {
            for c in &basis {
                for d in &basis {
                    out.push((
                        scale(
                            Q::new(1.into(), 2.into()),
                            bracket(kappa(a, b), kappa(c, d)),
                        ),
                        lin(vec![
                            (pair(a, d), kappa(b, c)),
                            (-pair(a, c), kappa(b, d)),
                            (-pair(b, d), kappa(a, c)),
                            (pair(b, c), kappa(a, d)),
                            // coefficient 2 is forced by the a = c, b = d case
                            (
                                q(2) * (pair(a, c) * pair(b, d) - pair(a, d) * pair(b, c)),
                                h_op(),
                            ),
                        ]),
                    ));
                }
            }
        }
    }
    out
}

/// All commutation relations among `h`, `e_a`, `f̃_a` and `κ_ab = [e_a, f̃_b]`
/// for `a, b, c, d` in the basis `(v_1, …, v_r, δ)`.
pub fn relation_suite(model: &SurfaceModel, n: u32) -> Report {
    let inst = Instantiator::new(model.clone());
    let checks: Vec<Check> = relations(model, n)
        .par_iter()
        .map(|(lhs, rhs)| check_identity(&inst, lhs, rhs, n))
        .collect();
    Report::new("relations", model, n, checks)
}

fn diagonal(entries: &[Q]) -> SparseMatrix {
    let mut m = SparseMatrix::zero(entries.len(), entries.len());
    for (i, x) in entries.iter().enumerate() {
        m.add_entry(i, i, x.clone());
    }
    m
}

/// `L0 = −n`, `[h, q_m(γ)] = (2 deg γ − 2) q_m(γ)` for `γ ∈ {u, v_a, c}`, and in
/// cohomology mode `h = 2d − 2n` on degree-`d` classes.
pub fn grading_suite(model: &SurfaceModel, n: u32) -> Report {
    let inst = Instantiator::new(model.clone());
    let mut checks = Vec::new();

    let l0_op = inst.instantiate(&l0(), n).expect("L0 instantiates");
    let want = diagonal(&vec![q(-(n as i64)); l0_op.source.len()]);
    checks.push(matrix_check(model, "L0 = -n", &l0_op, want));

    let h = inst.instantiate(&h_op(), n).expect("h instantiates");
    if model.mode() == crate::bv_ring::Mode::Cohomology {
        let entries: Vec<Q> = h
            .source
            .states()
            .iter()
            .map(|s| q(2 * s.chow_degree(model) as i64 - 2 * n as i64))
            .collect();
        let mut spectrum: Vec<i64> = h
            .source
            .states()
            .iter()
            .map(|s| 2 * s.chow_degree(model) as i64 - 2 * n as i64)
            .collect();
        spectrum.sort_unstable();
        spectrum.dedup();
        let check = matrix_check(model, "h = 2d - 2n on degree d", &h, diagonal(&entries));
        checks.push(check.with_detail(format!("diagonal entries {spectrum:?}")));
    }

    let mut classes: Vec<Basis> = vec![SurfaceModel::UNIT];
    classes.extend((0..model.rank()).map(|a| model.div(a)));
    classes.push(model.point());
    let ms: Vec<i32> = (1..=n.max(1) as i32).flat_map(|m| [m, -m]).collect();
    for &g in &classes {
        let cls = crate::bv_ring::MultiPointClass::decorated(1, &[(0, g)]);
        let k = 2 * model.deg(g) as i64 - 2;
        for &m in &ms {
            // creation operators are checked on weight n - m so they land in weight n
            let source = n as i64 - (m.max(0) as i64);
            if source < 0 || source + (m as i64) < 0 {
                continue;
            }
            let qm = nakajima(m, cls.clone());
            let lhs = bracket(h_op(), qm.clone());
            checks.push(check_identity(&inst, &lhs, &scale(q(k), qm), source as u32));
        }
    }
    Report::new("grading", model, n, checks)
}

fn matrix_check(
    model: &SurfaceModel,
    name: &str,
    op: &ConcreteOperator,
    want: SparseMatrix,
) -> Check {
    let expected = ConcreteOperator {
        matrix: want,
        ..op.clone()
    };
    compare(model, name, op, &expected)
}
