use nakajima::bv_ring::{Mode, SurfaceModel};
use nakajima::verify::{self, Report};

fn chow() -> SurfaceModel {
    SurfaceModel::diagonal(&[2], Mode::Chow)
}

fn cohomology() -> SurfaceModel {
    SurfaceModel::diagonal(&[2, -2], Mode::Cohomology)
}

fn assert_passes(r: Report, expected_checks: usize) {
    assert!(r.all_passed(), "{}", r.to_table());
    assert_eq!(r.checks.len(), expected_checks, "{}", r.to_table());
}

#[test]
fn heisenberg_commutators() {
    let r = verify::heisenberg_suite(&chow(), 3);
    assert!(r.all_passed(), "{}", r.to_table());
    assert!(r.checks.len() > 100);
}

#[test]
fn correspondence_lemma() {
    assert_passes(verify::lemma_suite(&cohomology(), 50, 11, 3), 50);
}

#[test]
fn correspondence_brackets() {
    assert_passes(verify::t_bracket_suite(&cohomology(), &[2, 3], 25, 5), 50);
}

#[test]
fn wedge_representation() {
    assert_passes(verify::rho_suite(&chow(), 2, 20, 3), 20);
    assert_passes(verify::rho_suite(&cohomology(), 3, 20, 4), 20);
}

#[test]
fn widening_is_invisible() {
    let r = verify::widening_suite(&chow(), 2, 2);
    assert!(r.all_passed(), "{}", r.to_table());
}

#[test]
fn grading_by_weight_and_degree() {
    for n in 0..=3 {
        let r = verify::grading_suite(&chow(), n);
        assert!(r.all_passed(), "{}", r.to_table());
    }
    let r = verify::grading_suite(&SurfaceModel::diagonal(&[2, -2, 4], Mode::Cohomology), 2);
    assert!(r.all_passed(), "{}", r.to_table());
}
