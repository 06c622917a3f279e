//! Test and demonstration families: random exact Poisson families, random
//! coordinate changes and closed-form bifurcation models.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::PoissonFamily;
use crate::jet::{ratio, CoordinateChange, Monomial, Series, Trunc, Var};
use crate::linalg::{det3, Mat3};
use crate::Rational;

pub type GenRng = ChaCha8Rng;

pub fn rng(seed: u64) -> GenRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Nonzero rational `p/q` with `|p| <= 3`, `1 <= q <= 3`.
pub fn small_rational(rng: &mut GenRng) -> Rational {
    loop {
        let p: i64 = rng.gen_range(-3..=3);
        if p != 0 {
            return ratio(p, rng.gen_range(1..=3));
        }
    }
}

/// Sparse random polynomial in `x, y` (and `ε` when `eps_order > 0`) with
/// space degrees in `lo..=hi`.
pub fn random_poly_xy(rng: &mut GenRng, t: Trunc, lo: u32, hi: u32, nterms: usize, eps_order: u32) -> Series {
    let mut s = Series::zero(t);
    for _ in 0..nterms {
        let d = rng.gen_range(lo..=hi);
        let i = rng.gen_range(0..=d);
        let l = if eps_order > 0 && rng.gen_bool(0.3) { rng.gen_range(1..=eps_order) } else { 0 };
        s.add_term(Monomial::new(i, d - i, 0, l), small_rational(rng));
    }
    s
}

/// Like [`random_poly_xy`] in the variables `x, z`.
pub fn random_poly_xz(rng: &mut GenRng, t: Trunc, lo: u32, hi: u32, nterms: usize, eps_order: u32) -> Series {
    random_poly_xy(rng, t, lo, hi, nterms, eps_order).map_monomials(|m| Some(Monomial::new(m.0[0], 0, m.0[1], m.0[3])))
}

/// Shapes of `(f, g)` pairs with `df∧dg = 0` exactly.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FgShape {
    /// `g = 0`.
    Hamiltonian,
    /// `g = c f`.
    Proportional,
    /// `f = k u²`, `g = u`: a V singularity when `u` has a linear part.
    Square,
    /// `g = q` quadratic, `f = k q² + ε q`: an N singularity.
    NType,
}

pub const FG_SHAPES: [FgShape; 4] = [FgShape::Hamiltonian, FgShape::Proportional, FgShape::Square, FgShape::NType];

/// Random exact pair; `f` and `g` vanish at the origin and `f` has no
/// `ε`-free linear part, so the family is singular at the origin for `ε = 0`.
pub fn random_fg(rng: &mut GenRng, t: Trunc, shape: FgShape) -> (Series, Series) {
    let eps = Series::var(t, Var::Eps);
    let top = t.d.min(4);
    match shape {
        FgShape::Hamiltonian => {
            let mut f = random_poly_xy(rng, t, 2, top, 4, t.e);
            f = &f + &(&eps * &random_poly_xy(rng, t, 1, 1, 1, 0));
            (f, Series::zero(t))
        }
        FgShape::Proportional => {
            let f = random_poly_xy(rng, t, 2, top, 4, t.e);
            let c = small_rational(rng);
            let g = f.scale(&c);
            (f, g)
        }
        FgShape::Square => {
            let mut u = random_poly_xy(rng, t, 1, 2, 3, 0);
            if u.homogeneous(1).is_zero() {
                u.add_term(Monomial::new(0, 1, 0, 0), small_rational(rng));
            }
            let k = small_rational(rng);
            ((&u * &u).scale(&k), u)
        }
        FgShape::NType => {
            let mut q = random_poly_xy(rng, t, 2, 2, 3, 0);
            if q.is_zero() {
                q = Series::from_ints(t, &[(2, 0, 0, 0, 1, 1), (0, 2, 0, 0, 1, 1)]);
            }
            let k = small_rational(rng);
            let f = &(&q * &q).scale(&k) + &(&eps * &q);
            (f, q)
        }
    }
}

/// Random planar field `(α, β)` in `x, z` vanishing at the origin for
/// `ε = 0`, with nonzero trace of the linear part.
pub fn random_planar(rng: &mut GenRng, t: Trunc) -> (Series, Series) {
    loop {
        let alpha = random_poly_xz(rng, t, 1, 3, 4, t.e);
        let beta = random_poly_xz(rng, t, 1, 3, 4, t.e);
        let a = alpha.at_eps0().homogeneous(1);
        let b = beta.at_eps0().homogeneous(1);
        let tr = a.coeff(Monomial::new(1, 0, 0, 0)) + b.coeff(Monomial::new(0, 0, 1, 0));
        if !tr.is_zero() {
            return (alpha, beta);
        }
    }
}

/// Random centered change: invertible small-integer linear part plus a few
/// nonlinear and `ε`-dependent terms.
pub fn random_change(rng: &mut GenRng, t: Trunc) -> CoordinateChange {
    let m: Mat3 = loop {
        let m: Mat3 = std::array::from_fn(|i| {
            std::array::from_fn(|j| {
                let base = if i == j { 1 } else { 0 };
                let off: i64 = if rng.gen_bool(0.3) { rng.gen_range(-1..=1) } else { 0 };
                ratio(base + off, 1)
            })
        });
        if !det3(&m).is_zero() {
            break m;
        }
    };
    let vars = [Var::X, Var::Y, Var::Z];
    let images: [Series; 3] = std::array::from_fn(|i| {
        let mut s = Series::zero(t);
        for (j, v) in vars.iter().enumerate() {
            s = &s + &Series::var(t, *v).scale(&m[i][j]);
        }
        for _ in 0..2 {
            let d = rng.gen_range(2..=3u32);
            let mut e = [0u32; 3];
            for _ in 0..d {
                e[*[0usize, 1, 2].choose(rng).expect("nonempty")] += 1;
            }
            s.add_term(Monomial::new(e[0], e[1], e[2], 0), small_rational(rng));
        }
        if t.e > 0 && rng.gen_bool(0.5) {
            let j = rng.gen_range(0..3);
            s = &s + &Series::var(t, vars[j]).shift(Monomial::new(0, 0, 0, 1)).scale(&small_rational(rng));
        }
        s
    });
    CoordinateChange::new(images).expect("invertible linear part by construction")
}

/// `f = ±x²/2 + y³/3 − εy`, `g = 0`: the generic A unfolding.
pub fn a_model(t: Trunc, plus: bool) -> PoissonFamily {
    let s = if plus { 1 } else { -1 };
    let f = Series::from_ints(t, &[(2, 0, 0, 0, s, 2), (0, 3, 0, 0, 1, 3), (0, 1, 0, 1, -1, 1)]);
    PoissonFamily::from_fg(&f, &Series::zero(t)).expect("exact model")
}

/// N model with prescribed `λ₀`, `μ₁`: with `r = x² ± y²`,
/// `g = λ₀ r / 2` and `f = λ₀ (μ₀ r / 2 + μ₁ r² / 4)` where
/// `μ₀ = −ε sign(μ₁)`, so that the circle `C = 0` appears for `ε > 0`.
pub fn n_model(t: Trunc, lambda0: &Rational, mu1: &Rational, plus: bool) -> PoissonFamily {
    let (f, g) = n_model_fg(t, lambda0, mu1, plus);
    PoissonFamily::from_fg(&f, &g).expect("exact model")
}

pub fn n_model_fg(t: Trunc, lambda0: &Rational, mu1: &Rational, plus: bool) -> (Series, Series) {
    let sy = if plus { 1 } else { -1 };
    let r = Series::from_ints(t, &[(2, 0, 0, 0, 1, 1), (0, 2, 0, 0, sy, 1)]);
    let mu_sign = if mu1 > &Rational::zero() { 1 } else { -1 };
    let mu0 = Series::monomial(t, Monomial::new(0, 0, 0, 1), ratio(-mu_sign, 1));
    let half = ratio(1, 2);
    let quarter = ratio(1, 4);
    let g = r.scale(&(lambda0 * &half));
    let f = &(&mu0 * &r).scale(&half) + &(&r * &r).scale(&(mu1 * &quarter));
    (f.scale(lambda0), g)
}

/// `∂y ∧ ((x² − ε) ∂x + z ∂z)`.
pub fn saddle_node_model(t: Trunc) -> PoissonFamily {
    let alpha = Series::from_ints(t, &[(2, 0, 0, 0, 1, 1), (0, 0, 0, 1, -1, 1)]);
    let beta = Series::var(t, Var::Z);
    PoissonFamily::from_planar(&alpha, &beta).expect("planar")
}

/// Random algebraically isolated A germ with `f̂ ~ ±x²/2 + δ y^{m+1}/(m+1)`,
/// `2 ≤ m ≤ 4`, higher terms that leave `m` unchanged, an `ε`-unfolding and
/// `ĝ` a polynomial in `f̂`. Returns the family with its `(sign, m)`.
pub fn random_a_germ(rng: &mut GenRng, t: Trunc) -> (PoissonFamily, i8, u32) {
    let sign: i8 = if rng.gen_bool(0.5) { 1 } else { -1 };
    let m: u32 = rng.gen_range(2..=4.min(t.d.saturating_sub(2)).max(2));
    let delta: i64 = if rng.gen_bool(0.5) { 1 } else { -1 };
    let mut f = Series::zero(t);
    f.add_term(Monomial::new(2, 0, 0, 0), ratio(sign.into(), 2));
    f.add_term(Monomial::new(0, m + 1, 0, 0), ratio(delta, (m + 1).into()));
    for _ in 0..3 {
        // x²·(…) and pure powers of y beyond m + 1 do not change m.
        let (i, j) = if rng.gen_bool(0.5) {
            (2, rng.gen_range(1..=2))
        } else {
            (0, rng.gen_range(m + 2..=t.d.max(m + 2)))
        };
        if i + j <= t.d {
            f.add_term(Monomial::new(i, j, 0, 0), small_rational(rng));
        }
    }
    if t.e > 0 {
        f.add_term(Monomial::new(0, 1, 0, 1), small_rational(rng));
        f.add_term(Monomial::new(1, 1, 0, 1), small_rational(rng));
    }
    let g = &f.scale(&small_rational(rng)) + &(&f * &f).scale(&small_rational(rng));
    let p = PoissonFamily::from_fg(&f, &g).expect("df∧dg = 0 by construction");
    (p, sign, m)
}
