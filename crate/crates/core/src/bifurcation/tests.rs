use super::*;
use crate::jet::{ratio, Trunc};
use crate::poisson::generators;

fn t() -> Trunc {
    Trunc::new(6, 2)
}

fn quick() -> VerifySettings {
    VerifySettings {
        search: SearchSettings { seeds_per_axis: 11, ..SearchSettings::default() },
        eps_grid: vec![-0.04, 0.04],
        ..VerifySettings::default()
    }
}

#[test]
fn a_split_prediction() {
    let r = predict(&generators::a_model(t(), true), 6).unwrap();
    assert_eq!(r.scenario, Scenario::ASplit);
    assert!(r.negative.points.is_empty());
    assert_eq!(r.positive.points, vec![PointClass::So3, PointClass::Sl2]);
    let m = predict(&generators::a_model(t(), false), 6).unwrap();
    assert_eq!(m.positive.points, vec![PointClass::Sl2, PointClass::Sl2]);
}

#[test]
fn a_split_points() {
    let p = generators::a_model(t(), true);
    let pts = find_singular_points(&p, 0.04, &quick().search);
    assert_eq!(pts.len(), 2);
    for r in &pts {
        assert!(r.point[0].abs() < 1e-6 && r.point[2].abs() < 1e-6 && (r.point[1].abs() - 0.2).abs() < 1e-6);
        let want = if r.point[1] > 0.0 { PointClass::So3 } else { PointClass::Sl2 };
        assert_eq!(r.class, want);
    }
    assert!(find_singular_points(&p, -0.04, &quick().search).is_empty());
}

#[test]
fn n_predictions() {
    let cases = [
        ((1, 1), true, Scenario::NA, PointClass::VFocus),
        ((1, 9), true, Scenario::NA, PointClass::VNode),
        ((-1, 1), true, Scenario::NB, PointClass::VSaddle),
        ((1, 1), false, Scenario::NC, PointClass::VFocus),
    ];
    for ((n, d), plus, scenario, curve) in cases {
        let p = generators::n_model(t(), &ratio(1, 1), &ratio(n, d), plus);
        let r = predict(&p, 6).unwrap();
        assert_eq!(r.scenario, scenario);
        let side = if plus { &r.positive } else { &r.negative };
        assert!(side.curves.iter().all(|c| c.class == curve), "{:?}", r);
    }
    let r = predict(&generators::n_model(t(), &ratio(1, 1), &ratio(1, 1), true), 6).unwrap();
    assert_eq!(r.negative.points, vec![PointClass::So3]);
    assert_eq!(r.positive.points, vec![PointClass::Sl2]);
    assert_eq!(r.radius_sq_coeff, Some(ratio(1, 1)));
}

#[test]
fn saddle_node_prediction() {
    let r = predict(&generators::saddle_node_model(t()), 6).unwrap();
    assert_eq!(r.scenario, Scenario::SaddleNodeV);
    assert!(r.negative.curves.is_empty());
    assert_eq!(r.positive.curves.len(), 2);
}

#[test]
fn linear_models_are_irremovable() {
    let r = predict(&PoissonFamily::linear_model(t(), true), 6).unwrap();
    assert_eq!(r.scenario, Scenario::NoneIrremovable);
    let v = verify(&PoissonFamily::linear_model(t(), true), r, &quick());
    assert!(v.verdict, "{:?}", v.observations.iter().map(|o| &o.mismatches).collect::<Vec<_>>());
}

#[test]
fn a_split_verifies() {
    let p = generators::a_model(t(), false);
    let r = predict(&p, 6).unwrap();
    let v = verify(&p, r, &quick());
    assert!(v.verdict, "{:?}", v.observations.iter().map(|o| &o.mismatches).collect::<Vec<_>>());
}

#[test]
fn unresolved_near_zero_is_not_judged() {
    let p = generators::a_model(t(), true);
    let r = predict(&p, 6).unwrap();
    let s = VerifySettings { eps_grid: vec![1e-4], ..quick() };
    assert_eq!(verify(&p, r, &s).observations[0].matched, None);
}
