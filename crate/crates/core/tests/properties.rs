//! Algebraic laws of the jet layer, checked on random exact inputs.

use poisson3::jet::ratio;
use poisson3::json::{series_from_records, series_to_records};
use poisson3::poisson::generators;
use poisson3::poisson::mod_weighted;
use poisson3::{CoordinateChange, DiffKind, DiffObject, Monomial, PoissonFamily, Series, Trunc, Var};
use proptest::prelude::*;

const T: Trunc = Trunc { d: 4, e: 1 };

fn term() -> impl Strategy<Value = (Monomial, i64, i64)> {
    (0u32..=4, 0u32..=4, 0u32..=4, 0u32..=1, -5i64..=5, 1i64..=4)
        .prop_filter("within the truncation", |(i, j, k, _, _, _)| i + j + k <= T.d)
        .prop_map(|(i, j, k, l, n, d)| (Monomial::new(i, j, k, l), n, d))
}

fn series_with(min_degree: u32) -> impl Strategy<Value = Series> {
    prop::collection::vec(term(), 0..6).prop_map(move |terms| {
        let mut s = Series::zero(T);
        for (m, n, d) in terms {
            if m.degree() >= min_degree {
                s.add_term(m, ratio(n, d));
            }
        }
        s
    })
}

fn series() -> impl Strategy<Value = Series> {
    series_with(0)
}

fn one_form() -> impl Strategy<Value = DiffObject> {
    [series(), series(), series()].prop_map(|c| DiffObject::triple(DiffKind::OneForm, c))
}

/// Centered change `x ↦ x + (higher terms)` with an `ε`-dependent shear.
fn change() -> impl Strategy<Value = CoordinateChange> {
    [series_with(2), series_with(2), series_with(2)].prop_map(|h| {
        let vars = [Var::X, Var::Y, Var::Z];
        CoordinateChange::new(std::array::from_fn(|i| &Series::var(T, vars[i]) + &h[i])).expect("identity linear part")
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ring_laws(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &Series::one(T), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn leibniz_rule(a in series(), b in series()) {
        for v in [Var::X, Var::Y, Var::Z, Var::Eps] {
            // Truncating the product drops the top order in v, so compare one order lower.
            let lhs = (&a * &b).partial(v);
            let rhs = &(&a.partial(v) * &b) + &(&a * &b.partial(v));
            if v == Var::Eps {
                prop_assert_eq!(lhs.at_eps0(), rhs.at_eps0());
            } else {
                prop_assert_eq!(lhs.jet(T.d - 1), rhs.jet(T.d - 1));
            }
        }
    }

    #[test]
    fn substitution_is_a_ring_morphism(a in series(), b in series(), ch in change()) {
        prop_assert_eq!(ch.substitute(&(&a * &b)), &ch.substitute(&a) * &ch.substitute(&b));
        prop_assert_eq!(ch.substitute(&(&a + &b)), &ch.substitute(&a) + &ch.substitute(&b));
    }

    #[test]
    fn inversion(ch in change()) {
        let inv = ch.inverse().unwrap();
        prop_assert_eq!(ch.then(&inv), CoordinateChange::identity(T));
        prop_assert_eq!(inv.then(&ch), CoordinateChange::identity(T));
    }

    #[test]
    fn d_squared_vanishes(f in series(), w in one_form()) {
        let df = DiffObject::function(f).d().unwrap();
        prop_assert!(df.d().unwrap().is_zero());
        let dw = w.d().unwrap();
        prop_assert!(dw.d().unwrap().is_zero());
    }

    #[test]
    fn wedge_anticommutes_on_one_forms(a in one_form(), b in one_form()) {
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        prop_assert_eq!(ab.clone(), ba.map(|s| -s.clone()));
        prop_assert!(a.wedge(&a).unwrap().is_zero());
    }

    #[test]
    fn records_round_trip(a in series()) {
        let back = series_from_records(T, &series_to_records(&a), "a").unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn fg_families_are_poisson(f in series_with(2), c in -3i64..=3) {
        // Only (x, y, ε) enter f; g = c f makes df∧dg vanish identically.
        let f = f.filter(|m| m.exp(Var::Z) == 0);
        let g = f.scale(&ratio(c, 1));
        let p = PoissonFamily::from_fg(&f, &g).unwrap();
        prop_assert!(p.trusted_residual().is_zero());
        prop_assert!(mod_weighted(&p.jacobi_residual(), T.d - 1).is_zero());
    }

    #[test]
    fn pushforward_keeps_the_jacobi_identity(seed in 0u64..1000) {
        let t = Trunc::new(5, 1);
        let mut rng = generators::rng(seed);
        let (f, g) = generators::random_fg(&mut rng, t, generators::FG_SHAPES[(seed % 4) as usize]);
        let p = PoissonFamily::from_fg(&f, &g).unwrap();
        let q = p.pushforward(&generators::random_change(&mut rng, t)).unwrap();
        prop_assert!(q.trusted_residual().is_zero());
        let w = q.to_pfaffian();
        prop_assert_eq!(PoissonFamily::from_pfaffian(&w).unwrap().to_doc(), q.to_doc());
    }
}
