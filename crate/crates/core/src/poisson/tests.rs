use super::generators::{self, FgShape, FG_SHAPES};
use super::*;
use num_traits::Zero;

use crate::jet::{rat, Monomial};

fn t() -> Trunc {
    Trunc::new(6, 2)
}

fn v(var: Var) -> Series {
    Series::var(t(), var)
}

#[test]
fn so3_and_exact_quadratic_are_poisson() {
    assert!(PoissonFamily::linear_model(t(), true).jacobi_residual().is_zero());
    let x = v(Var::X);
    let y = v(Var::Y);
    let p = PoissonFamily::unchecked(v(Var::Z), y.clone(), x.clone()).unwrap();
    assert!(p.jacobi_residual().is_zero());
}

#[test]
fn non_poisson_residual() {
    let x = v(Var::X);
    let p = PoissonFamily::unchecked(v(Var::Z), v(Var::Y), &x * &x).unwrap();
    // z(2x − 1)
    let want = Series::from_ints(t(), &[(1, 0, 1, 0, 2, 1), (0, 0, 1, 0, -1, 1)]);
    assert_eq!(p.jacobi_residual(), want);
    assert!(PoissonFamily::new(v(Var::Z), v(Var::Y), &x * &x).is_err());
}

#[test]
fn residual_matches_direct_jacobiator() {
    let mut rng = generators::rng(7);
    for _ in 0..10 {
        let f = generators::random_poly_xy(&mut rng, t(), 1, 3, 4, 1);
        let a = generators::random_poly_xy(&mut rng, t(), 0, 3, 4, 1);
        let b = &generators::random_poly_xy(&mut rng, t(), 1, 2, 3, 0) + &v(Var::Z);
        let p = PoissonFamily::unchecked(b, a, f).unwrap();
        assert_eq!(jacobiator(&p).jet(4), (-p.jacobi_residual()).jet(4));
    }
}

#[test]
fn curl_of_fg_form() {
    let x = v(Var::X);
    let y = v(Var::Y);
    let g = &(&x * &x) + &(&y * &y);
    let f = &(&g * &g).scale(&rat(3)) + &(&g * &v(Var::Eps));
    let p = PoissonFamily::from_fg(&f, &g).unwrap();
    let c = p.curl();
    assert_eq!(c.comp(0), &y.scale_int(-2));
    assert_eq!(c.comp(1), &x.scale_int(2));
    assert!(c.comp(2).is_zero());
}

#[test]
fn curl_of_linear_models() {
    for plus in [true, false] {
        assert!(PoissonFamily::linear_model(t(), plus).curl().is_zero());
    }
    let c = PoissonFamily::rotational_v_model(t()).curl();
    assert_eq!(c.comp(2), &Series::constant(t(), rat(-2)));
}

#[test]
fn from_fg_examples() {
    let x = v(Var::X);
    let y = v(Var::Y);
    let z = v(Var::Z);
    let p = PoissonFamily::from_fg(&(&(&x * &x) + &(&y * &y)), &Series::zero(t())).unwrap();
    assert_eq!((p.bxy(), p.byz(), p.bzx()), (&z, &x.scale_int(2), &y.scale_int(2)));
    let p = PoissonFamily::from_fg(&Series::zero(t()), &y).unwrap();
    assert_eq!((p.bxy(), p.byz(), p.bzx()), (&z, &Series::zero(t()), &z));
    let x2 = &x * &x;
    assert!(PoissonFamily::from_fg(&x2, &(&x2 * &x2)).is_ok());
    match PoissonFamily::from_fg(&x2, &y) {
        Err(Error::Dependency { residual }) => assert_eq!(residual, "2*x"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn from_planar_convention() {
    let x = v(Var::X);
    let z = v(Var::Z);
    let p = PoissonFamily::from_planar(&z, &x).unwrap();
    assert_eq!(p.bxy(), &-&z);
    assert_eq!(p.byz(), &x);
    assert!(p.jacobi_residual().is_zero());
    // P(dy, dx) = α, P(dy, dz) = β.
    assert_eq!(p.bracket(1, 0), z);
    let zero = PoissonFamily::from_planar(&Series::zero(t()), &Series::zero(t())).unwrap();
    assert!(zero.is_zero());
    assert!(zero.lie_1jet_origin().unwrap().is_zero());
}

#[test]
fn schouten_examples() {
    let z = v(Var::Z);
    let x = v(Var::X);
    let zero = Series::zero(t());
    let p = PoissonFamily::unchecked(z.clone(), zero.clone(), zero.clone()).unwrap();
    let zdz = DiffObject::triple(DiffKind::Vector, [zero.clone(), zero.clone(), z.clone()]);
    let r = lie_symmetry_residual(&zdz, &p).unwrap();
    assert_eq!(r.comps(), &[zero.clone(), zero.clone(), z.clone()]);
    // ∂y ∧ v(x, z) is invariant under ∂y.
    let q = PoissonFamily::from_planar(&(&x * &z), &(&z + &(&x * &x))).unwrap();
    let dy = DiffObject::triple(DiffKind::Vector, [zero.clone(), Series::one(t()), zero.clone()]);
    assert!(lie_symmetry_residual(&dy, &q).unwrap().is_zero());
}

#[test]
fn curl_is_a_symmetry_on_random_fg() {
    let mut rng = generators::rng(11);
    for i in 0..20 {
        let (f, g) = generators::random_fg(&mut rng, t(), FG_SHAPES[i % 4]);
        let p = PoissonFamily::from_fg(&f, &g).unwrap();
        assert!(lie_symmetry_residual(&p.curl(), &p).unwrap().is_zero());
    }
}

#[test]
fn pushforward_identity_and_symmetry() {
    let so3 = PoissonFamily::linear_model(t(), true);
    assert_eq!(so3.pushforward(&CoordinateChange::identity(t())).unwrap(), so3);
    let ch = CoordinateChange::new([v(Var::Y), v(Var::X), -v(Var::Z)]).unwrap();
    assert_eq!(so3.pushforward(&ch).unwrap(), so3);
}

#[test]
fn pushforward_preserves_jacobi() {
    let mut rng = generators::rng(5);
    for i in 0..8 {
        let (f, g) = generators::random_fg(&mut rng, t(), FG_SHAPES[i % 4]);
        let p = PoissonFamily::from_fg(&f, &g).unwrap();
        let ch = generators::random_change(&mut rng, t());
        let q = p.pushforward(&ch).unwrap();
        assert!(q.trusted_residual().is_zero(), "case {i}");
    }
}

#[test]
fn pfaffian_bridge() {
    let so3 = PoissonFamily::linear_model(t(), true);
    let w = so3.to_pfaffian();
    assert_eq!(w.comps(), &[v(Var::X), v(Var::Y), v(Var::Z)]);
    assert_eq!(PoissonFamily::from_pfaffian(&w).unwrap(), so3);
    let dz = DiffObject::triple(DiffKind::OneForm, [Series::zero(t()), Series::zero(t()), Series::one(t())]);
    let p = PoissonFamily::from_pfaffian(&dz).unwrap();
    assert_eq!(p.bxy(), &Series::one(t()));
    let bad = DiffObject::triple(DiffKind::OneForm, [v(Var::Y), Series::zero(t()), Series::one(t())]);
    assert!(matches!(PoissonFamily::from_pfaffian(&bad), Err(Error::NotIntegrable { .. })));
}

#[test]
fn lie_1jet_shapes() {
    let so3 = PoissonFamily::linear_model(t(), true).lie_1jet_origin().unwrap();
    assert!(so3.is_unimodular());
    assert!(so3.fact_b().is_none());
    let rot = PoissonFamily::rotational_v_model(t()).lie_1jet_origin().unwrap();
    assert!(rot.is_rotational_v());
    let b = rot.fact_b().unwrap();
    assert!(!b.trace().is_zero());
    // B is scalar: the eigenvalue ratio is one.
    assert_eq!(&b.trace() * &b.trace(), b.det().clone() * rat(4));
    let p = PoissonFamily::unchecked(v(Var::Z), v(Var::X), v(Var::Y)).unwrap();
    assert!(!p.lie_1jet_origin().unwrap().is_rotational_v());
}

#[test]
fn lie_1jet_requires_singular_point() {
    let p = PoissonFamily::linear_model(t(), true);
    let one = rat(1);
    let zero = rat(0);
    assert_eq!(p.lie_1jet([&one, &zero, &zero]), Err(Error::NotSingular));
}

#[test]
fn fact_b_signs_for_a_types() {
    for (s, det_positive) in [(1, true), (-1, false)] {
        let f = Series::from_ints(t(), &[(2, 0, 0, 0, s, 2), (0, 3, 0, 0, 1, 3)]);
        let p = PoissonFamily::from_fg(&f, &Series::zero(t())).unwrap();
        let l = p.lie_1jet_origin().unwrap();
        let b = l.fact_b().unwrap();
        assert!(b.trace().is_zero());
        assert_eq!(b.det() > rat(0), det_positive);
        assert_eq!(l.killing_trace_sign(), if det_positive { -1 } else { 1 });
    }
}

#[test]
fn document_roundtrip() {
    let mut rng = generators::rng(3);
    let (f, g) = generators::random_fg(&mut rng, t(), FgShape::NType);
    let p = PoissonFamily::from_fg(&f, &g).unwrap();
    let doc = p.to_doc();
    let text = serde_json::to_string(&doc).unwrap();
    let back: FamilyDoc = serde_json::from_str(&text).unwrap();
    let q = PoissonFamily::from_doc(&back).unwrap();
    assert_eq!(q.bxy(), p.bxy());
    assert_eq!(q.byz(), p.byz());
    assert_eq!(q.bzx(), p.bzx());
    let _ = Monomial::ONE;
}
