use num_traits::Zero;

use crate::error::{Error, Result};
use crate::jet::{CoordinateChange, Monomial, Series, Trunc, Var};
use crate::linalg::{cross, det3, dot, solve, Mat3};
use crate::poisson::PoissonFamily;
use crate::Rational;

use super::{eps_order, eps_shift_down};

/// Family with `{x,y} = z + dev`, `{y,z} = u`, `{z,x} = v`. The z-form
/// proper has `dev = 0`; intermediate stages of the reduction carry a
/// deviation of high `(x, y)`-degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZFormFamily {
    pub u: Series,
    pub v: Series,
    pub dev: Series,
}

impl ZFormFamily {
    pub fn from_family(p: &PoissonFamily) -> ZFormFamily {
        let z = Series::var(p.trunc(), Var::Z);
        ZFormFamily { u: p.byz().clone(), v: p.bzx().clone(), dev: p.bxy() - &z }
    }

    pub fn to_family(&self) -> PoissonFamily {
        let z = Series::var(self.u.trunc(), Var::Z);
        PoissonFamily::unchecked(&z + &self.dev, self.u.clone(), self.v.clone()).expect("shared truncation")
    }

    pub fn trunc(&self) -> Trunc {
        self.u.trunc()
    }
}

fn candidate_vectors() -> Vec<[i64; 3]> {
    let mut v = Vec::new();
    for a in -2i64..=2 {
        for b in -2i64..=2 {
            for c in -2i64..=2 {
                if (a, b, c) != (0, 0, 0) {
                    v.push([a, b, c]);
                }
            }
        }
    }
    // Unit vectors first, then by size; the sort is stable and deterministic.
    v.sort_by_key(|u| {
        let l1: i64 = u.iter().map(|x| x.abs()).sum();
        let negatives = u.iter().filter(|x| **x < 0).count();
        (l1, negatives, std::cmp::Reverse(*u))
    });
    v
}

fn to_rat(u: &[i64; 3]) -> [Rational; 3] {
    u.map(|x| Rational::from_integer(x.into()))
}

/// Finds linear, possibly `ε`-dependent, coordinates `a, b` and sets
/// `c = P(da, db)`, so that `(a, b, c)` is a centered change in which
/// `{x,y} = z`.
pub fn reduce_to_zform(p: &PoissonFamily) -> Result<(ZFormFamily, CoordinateChange)> {
    let t = p.trunc();
    let jet = p.lie_1jet_origin()?;
    if jet.is_zero() {
        return Err(Error::ZeroOneJet);
    }
    if jet.is_rotational_v() {
        return Err(Error::OneOneJet);
    }
    let omega = p.omega_components();
    let w: [Series; 3] = std::array::from_fn(|i| omega[i].at_origin());
    let k = w.iter().filter_map(eps_order).min();
    let wk: Option<[Rational; 3]> = k.map(|k| std::array::from_fn(|i| w[i].coeff(Monomial::new(0, 0, 0, k))));
    // Jacobian of ω's coefficients at the origin for ε = 0.
    let vars = [Var::X, Var::Y, Var::Z];
    let jac: Mat3 = std::array::from_fn(|i| {
        std::array::from_fn(|j| omega[i].at_eps0().partial(vars[j]).coeff(Monomial::ONE))
    });
    let jt: Mat3 = std::array::from_fn(|i| std::array::from_fn(|j| jac[j][i].clone()));
    let cands = candidate_vectors();
    for (ia, a0) in cands.iter().enumerate() {
        for b0 in &cands[ia + 1..] {
            let (a0r, b0r) = (to_rat(a0), to_rat(b0));
            let n = cross(&a0r, &b0r);
            if n.iter().all(Zero::is_zero) {
                continue;
            }
            if let Some(wk) = &wk {
                if !dot(wk, &n).is_zero() {
                    continue;
                }
            }
            let grad = crate::linalg::mat_vec3(&jt, &n);
            if det3(&[a0r.clone(), b0r.clone(), grad]).is_zero() {
                continue;
            }
            if let Some(found) = build(p, t, &w, k, &a0r, &b0r)? {
                return Ok(found);
            }
        }
    }
    Err(Error::NoZFormPair)
}

fn build(
    p: &PoissonFamily,
    t: Trunc,
    w: &[Series; 3],
    k: Option<u32>,
    a0: &[Rational; 3],
    b0: &[Rational; 3],
) -> Result<Option<(ZFormFamily, CoordinateChange)>> {
    let lin = |c: &[Series; 3]| {
        let mut s = Series::zero(t);
        for (j, v) in [Var::X, Var::Y, Var::Z].iter().enumerate() {
            s = &s + &(&c[j] * &Series::var(t, *v));
        }
        s
    };
    let konst = |v: &[Rational; 3]| -> [Series; 3] { std::array::from_fn(|i| Series::constant(t, v[i].clone())) };
    let mut a = konst(a0);
    let mut b = konst(b0);
    if let Some(k) = k {
        let e3 = (0..3)
            .map(|i| {
                let mut e: [Rational; 3] = Default::default();
                e[i] = Rational::from_integer(1.into());
                e
            })
            .find(|e| !det3(&[a0.clone(), b0.clone(), e.clone()]).is_zero())
            .expect("a basis completion exists");
        // Decompose w(ε) = α a0 + β b0 + γ e3 coefficientwise in ε.
        let basis: Vec<Vec<Rational>> =
            (0..3).map(|i| vec![a0[i].clone(), b0[i].clone(), e3[i].clone()]).collect();
        let mut coef = [Series::zero(t), Series::zero(t), Series::zero(t)];
        for l in 0..=t.e {
            let rhs: Vec<Rational> = (0..3).map(|i| w[i].coeff(Monomial::new(0, 0, 0, l))).collect();
            let sol = solve(&basis, &rhs).expect("basis is invertible");
            for (c, s) in coef.iter_mut().zip(sol) {
                c.add_term(Monomial::new(0, 0, 0, l), s);
            }
        }
        let [alpha, beta, gamma] = coef;
        let g = eps_shift_down(&gamma, k);
        let (target, pivot) = if eps_order(&alpha) == Some(k) { (&mut a, alpha) } else { (&mut b, beta) };
        if eps_order(&pivot) != Some(k) {
            return Ok(None);
        }
        let ratio = g.try_div(&eps_shift_down(&pivot, k))?;
        for i in 0..3 {
            target[i] = &target[i] + &ratio.scale(&e3[i]);
        }
    }
    let a = lin(&a);
    let b = lin(&b);
    let c = p.poisson_bracket(&a, &b);
    if !c.at_origin().is_zero() {
        return Ok(None);
    }
    let ch = match CoordinateChange::new([a, b, c]) {
        Ok(ch) => ch,
        Err(_) => return Ok(None),
    };
    let q = p.pushforward(&ch)?;
    let z = ZFormFamily::from_family(&q);
    if !z.dev.is_zero() {
        return Err(Error::Internal(format!("z-form deviation {}", z.dev)));
    }
    Ok(Some((z, ch)))
}
