use super::*;
use crate::bv_ring::{Mode, MultiPointClass, SurfaceModel};
use crate::fock::FockVector;
use crate::matrix::SparseMatrix;
use crate::scalar::{frac, q};

fn model() -> SurfaceModel {
    SurfaceModel::diagonal(&[2], Mode::Chow)
}

fn v(m: &SurfaceModel) -> Vec<crate::scalar::Q> {
    (0..m.rank()).map(|i| q((i == 0) as i64)).collect()
}

#[test]
fn l0_is_minus_weight() {
    let inst = Instantiator::new(model());
    for n in 1..=4 {
        let op = inst.instantiate(&l0(), n).unwrap();
        let id = SparseMatrix::identity(op.source.len()).scaled(&q(-(n as i64)));
        assert_eq!(op.matrix, id, "n = {n}");
    }
}

#[test]
fn h_on_fundamental_class() {
    let inst = Instantiator::new(model());
    for n in 1..=4 {
        let op = inst.instantiate(&h_op(), n).unwrap();
        let x = FockVector::unit_class(n as usize);
        assert_eq!(op.apply(&x).unwrap(), x.scaled(&q(-2 * n as i64)));
    }
}

#[test]
fn e_div_on_the_surface() {
    let m = model();
    let inst = Instantiator::new(m.clone());
    let e = inst.instantiate(&e_div(v(&m)), 1).unwrap();
    let one = |b| FockVector::creators(&m, &[(1, b)]);
    assert_eq!(e.apply(&one(SurfaceModel::UNIT)).unwrap(), one(m.div(0)));
    assert_eq!(
        e.apply(&one(m.div(0))).unwrap(),
        one(m.point()).scaled(&q(2))
    );
    assert!(e.apply(&one(m.point())).unwrap().is_zero());
    assert_eq!(e.degree_shift, Some(1));
}

#[test]
fn e_delta_on_fundamental_class() {
    let m = model();
    let inst = Instantiator::new(m.clone());
    let e = inst.instantiate(&e_delta(&m), 2).unwrap();
    let got = e.apply(&FockVector::unit_class(2)).unwrap();
    let want = FockVector::creators(&m, &[(2, SurfaceModel::UNIT)]).scaled(&frac(-1, 2));
    assert_eq!(got, want);
}

#[test]
fn e_div_squared_on_fundamental_class() {
    let m = model();
    let inst = Instantiator::new(m.clone());
    let ev = e_div(v(&m));
    let e2 = inst.instantiate(&compose(ev.clone(), ev), 2).unwrap();
    let got = e2.apply(&FockVector::unit_class(2)).unwrap();
    let (u, vv, c) = (SurfaceModel::UNIT, m.div(0), m.point());
    let want = FockVector::creators(&m, &[(1, c), (1, u)])
        .scaled(&q(2))
        .plus(&FockVector::creators(&m, &[(1, vv), (1, vv)]));
    assert_eq!(got, want);
}

#[test]
fn e_div_of_fundamental_class() {
    let m = model();
    let inst = Instantiator::new(m.clone());
    for n in 1..=4u32 {
        let e = inst.instantiate(&e_div(v(&m)), n).unwrap();
        let got = e.apply(&FockVector::unit_class(n as usize)).unwrap();
        let mut items = vec![(1, m.div(0))];
        items.extend(std::iter::repeat_n((1, SurfaceModel::UNIT), n as usize - 1));
        let fact: crate::scalar::Q = (1..n as i64).map(q).product();
        assert_eq!(got, FockVector::creators(&m, &items).scaled(&fact.recip()));
    }
}

#[test]
fn h_grades_e_and_ft() {
    let m = model();
    let inst = Instantiator::new(m.clone());
    let ev = e_div(v(&m));
    let fv = ft_div(v(&m));
    for n in 1..=3 {
        let he = inst.instantiate(&bracket(h_op(), ev.clone()), n).unwrap();
        let e = inst.instantiate(&ev, n).unwrap();
        assert_eq!(he.matrix, e.matrix.scaled(&q(2)));
        let hf = inst.instantiate(&bracket(h_op(), fv.clone()), n).unwrap();
        let f = inst.instantiate(&fv, n).unwrap();
        assert_eq!(hf.matrix, f.matrix.scaled(&q(-2)));
        let hd = inst.instantiate(&bracket(h_op(), e_delta(&m)), n).unwrap();
        let d = inst.instantiate(&e_delta(&m), n).unwrap();
        assert_eq!(hd.matrix, d.matrix.scaled(&q(2)));
    }
}

#[test]
fn standard_operators_are_correspondence_operators() {
    let m = model();
    let inst = Instantiator::new(m.clone());
    let alpha = v(&m);
    let e_gamma = diagonal_pushforward(&m, &alpha);
    let a1 = MultiPointClass::decorated(2, &[(0, m.div(0))]);
    let a2 = MultiPointClass::decorated(2, &[(1, m.div(0))]);
    let ft_gamma = a1.plus(&a2).scaled(&q(2));
    let c1 = MultiPointClass::decorated(2, &[(0, m.point())]);
    let c2 = MultiPointClass::decorated(2, &[(1, m.point())]);
    let h_gamma = c2.minus(&c1).scaled(&q(2));
    for n in 1..=3 {
        for (t, op) in [
            (e_gamma.clone(), e_div(alpha.clone())),
            (ft_gamma.clone(), ft_div(alpha.clone())),
            (h_gamma.clone(), h_op()),
        ] {
            let lhs = inst.instantiate(&OperatorExpr::T(t.clone()), n).unwrap();
            assert_eq!(t_gamma(&m, t).unwrap(), op);
            let rhs = inst.instantiate(&op, n).unwrap();
            assert_eq!(lhs.matrix, rhs.matrix);
        }
    }
}

#[test]
fn zero_index_gives_zero() {
    let m = model();
    assert_eq!(
        nakajima(0, MultiPointClass::decorated(1, &[(0, 0)])),
        OperatorExpr::Zero
    );
    let inst = Instantiator::new(m);
    assert!(inst.instantiate(&OperatorExpr::Zero, 2).unwrap().is_zero());
}

#[test]
fn widening_does_not_change_matrices() {
    let m = model();
    let base = Instantiator::new(m.clone());
    let wide = Instantiator::with_widening(m.clone(), 2);
    let ops = [e_delta(&m), ft_delta(&m), h_op(), ft_div(v(&m)), l0()];
    for op in &ops {
        for n in 1..=3 {
            let a = base.instantiate(op, n).unwrap();
            let b = wide.instantiate(op, n).unwrap();
            assert_eq!(a.matrix, b.matrix, "{} at n = {n}", op.print(&m));
        }
    }
}

#[test]
fn inhomogeneous_and_isotropic_rejected() {
    let m = model();
    let bad = MultiPointClass::one(2).plus(&MultiPointClass::decorated(2, &[(0, m.point())]));
    assert!(matches!(
        t_gamma(&m, bad),
        Err(crate::Error::Inhomogeneous(_))
    ));
    // (δ,δ) = 2 − 2n vanishes at n = 1
    let d = DivisorClass::delta(m.rank());
    assert_eq!(f_general(&m, d.clone(), 1), Err(crate::Error::Isotropic(1)));
    assert!(f_general(&m, d, 2).is_ok());
}

#[test]
fn printing() {
    let m = model();
    let e = scale(
        frac(1, 2),
        compose(h_op(), sum(vec![e_delta(&m), ft_div(v(&m))])),
    );
    assert_eq!(e.print(&m), "1/2*(h . (e(delta) + ft(v1)))");
    let qv = nakajima(
        -2,
        MultiPointClass::decorated(1, &[(0, m.div(0))]).scaled(&q(3)),
    );
    assert_eq!(bracket(qv, l0()).print(&m), "[q(-2, 3*v1), L0]");
}
