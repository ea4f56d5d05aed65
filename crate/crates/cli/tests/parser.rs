use nakajima::bv_ring::{Mode, SurfaceModel};
use nakajima::operator::*;
use nakajima::scalar::{frac, q};
use nakajima::verify::random::{random_class, random_operator};
use nakajima::Error;
use nakajima_cli::parser::{parse_class, parse_expr};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn chow() -> SurfaceModel {
    SurfaceModel::diagonal(&[2], Mode::Chow).with_points(2)
}

fn cohomology() -> SurfaceModel {
    SurfaceModel::diagonal(&[2, -2], Mode::Cohomology)
}

fn pos(r: Result<OperatorExpr, Error>) -> usize {
    match r {
        Err(Error::Parse { pos, .. }) => pos,
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn standard_forms() {
    let m = chow();
    assert_eq!(
        parse_expr(&m, "[e(delta), ft(delta)]").unwrap(),
        bracket(e_delta(&m), ft_delta(&m))
    );
    assert_eq!(parse_expr(&m, "q(0, c)").unwrap(), OperatorExpr::Zero);
    assert_eq!(parse_expr(&m, "L0").unwrap(), l0());
    assert_eq!(
        parse_expr(&m, "h - 1/2*h . L0").unwrap(),
        sum(vec![
            h_op(),
            scale(q(-1), compose(scale(frac(1, 2), h_op()), l0()))
        ])
    );
    let c = cohomology();
    assert_eq!(parse_expr(&c, "T(2*(c2 - c1))").unwrap(), h_op());
    assert_eq!(
        parse_expr(&c, "T(c1*v1_2 + v1_1*c2)").unwrap(),
        e_div(vec![q(1), q(0)])
    );
}

#[test]
fn errors_are_located() {
    let m = chow();
    assert_eq!(pos(parse_expr(&m, "e(v9)")), 2);
    assert_eq!(pos(parse_expr(&m, "h +")), 3);
    assert_eq!(pos(parse_expr(&m, "[h, L0")), 6);
    assert!(parse_expr(&m, "q(1, D)").is_err());
    assert!(parse_expr(&m, "h $ h").is_err());
    let c = cohomology();
    assert!(matches!(
        parse_expr(&c, "T(c1 + v1_1)"),
        Err(Error::Parse { .. }) | Err(Error::Inhomogeneous(_))
    ));
}

fn model_for(cohom: bool) -> SurfaceModel {
    if cohom {
        cohomology()
    } else {
        chow()
    }
}

fn round_trip(cohom: bool, x: &OperatorExpr) -> Result<(), TestCaseError> {
    let m = model_for(cohom);
    let text = x.print(&m);
    let back = parse_expr(&m, &text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
    prop_assert_eq!(&back, x, "{}", text);
    prop_assert_eq!(back.print(&m), text);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn expressions_round_trip(seed in any::<u64>(), cohom in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = random_operator(&model_for(cohom), &mut rng, 3);
        round_trip(cohom, &x)?;
    }

    #[test]
    fn classes_round_trip(seed in any::<u64>(), slots in 1usize..=4, cohom in any::<bool>()) {
        let m = model_for(cohom);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_class(&m, &mut rng, slots, None, 4);
        let text = g.display(&m);
        prop_assert_eq!(parse_class(&m, &text, slots).unwrap(), g, "{}", text);
    }
}
