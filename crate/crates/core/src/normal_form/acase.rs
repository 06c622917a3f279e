use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::classifier::{quad_coeffs, quadform_class, QuadClass};
use crate::error::{Error, Result};
use crate::jet::{ratio, Monomial, Series, Trunc, Var};
use crate::linalg::solve;
use crate::poisson::{mod_weighted, PoissonFamily};
use crate::Rational;

use super::{reduce_to_fg, NormalFormData};

/// A Casimir family `C = G(z, f̂)` of the reduced family.
#[derive(Clone, Debug, Serialize)]
pub struct CasimirFamily {
    #[serde(serialize_with = "crate::json::series_records")]
    pub c_series: Series,
    /// `G(z, w)` with `w` stored in the `x` slot.
    #[serde(serialize_with = "crate::json::series_records")]
    pub ansatz_g: Series,
    /// `λ̂(w)` with `ĝ = λ̂ ∘ f̂`, `w` in the `x` slot.
    #[serde(serialize_with = "crate::json::series_records")]
    pub lambda: Series,
    #[serde(skip)]
    pub normal_form: NormalFormData,
}

impl CasimirFamily {
    /// `P(dC, dh)` for `h = x, y, z`, reduced modulo `D − 1`.
    pub fn residuals(&self) -> [Series; 3] {
        casimir_residuals(&self.normal_form.family(), &self.c_series)
    }
}

/// `P(dC, dh)` for `h = x, y, z` on the weighted filtration below `D − 1`.
pub fn casimir_residuals(p: &PoissonFamily, c: &Series) -> [Series; 3] {
    let t = p.trunc();
    let keep = t.d.saturating_sub(1);
    std::array::from_fn(|i| mod_weighted(&p.poisson_bracket(c, &Series::var(t, Var::SPACE[i])), keep))
}

/// Highest trusted weight (space degree plus `ε`-order) of `f̂`.
fn f_weight(t: Trunc) -> u32 {
    t.d.saturating_sub(1)
}

/// Highest trusted weight of `ĝ`.
fn g_weight(t: Trunc) -> u32 {
    t.d.saturating_sub(2)
}

fn up_to(s: &Series, w: u32) -> Series {
    mod_weighted(s, w + 1)
}

/// Solves `ĝ = Σ_k λ_k(ε) f̂^k` on the trusted weights.
fn solve_lambda(f: &Series, g: &Series) -> Result<Series> {
    let t = f.trunc();
    let wg = g_weight(t);
    let mut cols: Vec<(u32, u32, Series)> = Vec::new();
    let eps = Series::var(t, Var::Eps);
    let mut fk = Series::one(t);
    for k in 1..=wg / 2 {
        fk = &fk * f;
        let mut col = fk.clone();
        for l in 0..=t.e {
            cols.push((k, l, up_to(&col, wg)));
            col = &col * &eps;
        }
    }
    let target = up_to(g, wg);
    let mut rows: Vec<Monomial> = target.terms().map(|(m, _)| *m).collect();
    for (_, _, c) in &cols {
        rows.extend(c.terms().map(|(m, _)| *m));
    }
    rows.sort();
    rows.dedup();
    let a: Vec<Vec<Rational>> = rows.iter().map(|m| cols.iter().map(|(_, _, c)| c.coeff(*m)).collect()).collect();
    let b: Vec<Rational> = rows.iter().map(|m| target.coeff(*m)).collect();
    let sol = solve(&a, &b).ok_or(Error::NotIsolated { degree: t.d })?;
    let mut lambda = Series::zero(t);
    for ((k, l, _), v) in cols.iter().zip(sol) {
        lambda.add_term(Monomial::new(*k, 0, 0, *l), v);
    }
    Ok(lambda)
}

/// `G = Σ Gₙ(w) zⁿ` solving `(1 + z λ'(w)) G_z − z G_w = 0` with
/// `G₀ = w` and `G₁ = 0`.
fn casimir_ansatz(lambda: &Series) -> Series {
    let t = lambda.trunc();
    let dl = lambda.partial(Var::X);
    let mut gs = vec![Series::var(t, Var::X), Series::zero(t)];
    for n in 1..t.d {
        let prev = gs[(n - 1) as usize].partial(Var::X);
        let cur = (&dl * &gs[n as usize]).scale_int(n as i64);
        gs.push((&prev - &cur).scale(&ratio(1, (n + 1) as i64)));
    }
    let z = Series::var(t, Var::Z);
    let mut out = Series::zero(t);
    let mut zn = Series::one(t);
    for g in &gs {
        out = &out + &(g * &zn);
        zn = &zn * &z;
    }
    out
}

fn require_a(nf: &NormalFormData) -> Result<QuadClass> {
    let q = quadform_class(&nf.f0().homogeneous(2))?;
    if !matches!(q, QuadClass::Rank1Plus | QuadClass::Rank1Minus) || !nf.g0().jet(1).is_zero() {
        return Err(Error::NotA(format!("2-jet of f̂₀ is {q:?}")));
    }
    Ok(q)
}

/// Casimir family of an A germ, computed in the normal-form coordinates.
pub fn a_casimir(p: &PoissonFamily, d: u32) -> Result<CasimirFamily> {
    let nf = reduce_to_fg(p, d)?;
    require_a(&nf)?;
    let lambda = solve_lambda(&nf.f, &nf.g)?;
    let g = casimir_ansatz(&lambda);
    let t = nf.trunc();
    let c = up_to(&g.compose([&nf.f, &Series::var(t, Var::Y), &Series::var(t, Var::Z)]), f_weight(t));
    Ok(CasimirFamily { c_series: c, ansatz_g: g, lambda, normal_form: nf })
}

/// Result of splitting off the nondegenerate quadratic directions.
struct Split {
    /// Coefficient `k` of the surviving square `k X²`.
    k: Rational,
    /// Residual function of the degenerate direction, in the `y` slot.
    phi: Series,
}

/// Iterates `s ← s − ∂F/∂v (…, s, …) / (2k)` to the critical section.
fn critical_section(fv: &Series, images: impl Fn(&Series) -> [Series; 3], two_k: &Rational) -> Series {
    let t = fv.trunc();
    let mut s = Series::zero(t);
    for _ in 0..(2 * (t.d + t.e) + 2) {
        let [a, b, c] = images(&s);
        let next = &s - &fv.compose([&a, &b, &c]).scale(&two_k.recip());
        if next == s {
            break;
        }
        s = next;
    }
    s
}

/// Splits `F(x, y)` whose `ε = 0` quadratic part has rank one.
fn split_plane(f: &Series) -> Result<Split> {
    let t = f.trunc();
    let (a, b, c) = quad_coeffs(&f.at_eps0().homogeneous(2));
    let x = Series::var(t, Var::X);
    let y = Series::var(t, Var::Y);
    let zero = Series::zero(t);
    let (ft, k) = if !a.is_zero() {
        let shift = &b / (&a + &a);
        (f.compose([&(&x - &y.scale(&shift)), &y, &zero]), a)
    } else {
        (f.compose([&y, &x, &zero]), c)
    };
    if k.is_zero() {
        return Err(Error::NotA("quadratic part vanishes".into()));
    }
    let two_k = &k + &k;
    let fx = ft.partial(Var::X);
    let xi = critical_section(&fx, |s| [s.clone(), y.clone(), zero.clone()], &two_k);
    let phi = ft.compose([&xi, &y, &zero]);
    Ok(Split { k, phi })
}

/// Lowest power `m + 1` of `y` in `φ₀` within weight `w`, with its
/// coefficient.
fn lowest_power(phi: &Series, w: u32) -> Option<(u32, Rational)> {
    (2..=w).find_map(|i| {
        let c = phi.coeff(Monomial::new(0, i, 0, 0));
        (!c.is_zero()).then_some((i, c))
    })
}

fn sign_delta(m: u32, c: &Rational) -> i8 {
    if m % 2 == 1 && c.is_negative() {
        -1
    } else {
        1
    }
}

/// `(sign, m, δ)` of an A germ from `f̂₀`; `sign` is `+1` for A⁺.
pub fn a_invariants(nf: &NormalFormData) -> Result<(i8, u32, i8)> {
    require_a(nf)?;
    let t = nf.trunc();
    let f0 = nf.f0();
    let split = split_plane(&f0)?;
    let (p, c) = lowest_power(&split.phi, f_weight(t)).ok_or(Error::NotIsolated { degree: t.d })?;
    let m = p - 1;
    let sign = if split.k.is_positive() { 1 } else { -1 };
    Ok((sign, m, if sign < 0 { 1 } else { sign_delta(m, &c) }))
}

/// Normal form of an A family: the Casimir becomes
/// `z²/2 ± x²/2 + K (δ y^{m+1}/(m+1) + Σ ĥᵢ(ε) yⁱ)` up to a constant,
/// and `hᵢ₋₁ = i ĥᵢ` are the unfolding functions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ANormalForm {
    /// `+1` for A⁺, `−1` for A⁻.
    pub sign: i8,
    pub m: u32,
    pub delta: i8,
    /// `h₀(ε), …, h_{m−2}(ε)` as series in `ε`.
    #[serde(serialize_with = "crate::json::series_list")]
    pub h: Vec<Series>,
    /// Positive rational multiplier `K` carried instead of roots.
    #[serde(with = "crate::json::rational_str")]
    pub multiplier: Rational,
}

impl ANormalForm {
    pub fn is_generic(&self) -> bool {
        self.m == 2
    }

    /// `h₀'(0)`, the transversality coefficient of the unfolding.
    pub fn h0_prime(&self) -> Rational {
        self.h.first().map(|h| h.coeff(Monomial::new(0, 0, 0, 1))).unwrap_or_else(Rational::zero)
    }
}

/// Reparametrizes `φ(y)` to `K(δ y^{m+1}/(m+1) + Σ_{i<m} ĥᵢ yⁱ)` plus a
/// constant and returns `ĥ₁, …, ĥ_{m−1}`.
fn versal(phi: &Series, m: u32, c: &Rational, w: u32) -> Result<(Vec<Series>, Rational)> {
    let t = phi.trunc();
    let delta = sign_delta(m, c);
    let k = Rational::from_integer((m + 1).into()) * c.abs();
    let kd = if delta > 0 { k.clone() } else { -k.clone() };
    let y = Series::var(t, Var::Y);
    let zero = Series::zero(t);
    let mut ycur = if m % 2 == 0 && c.is_negative() { -&y } else { y.clone() };
    let mut psi = phi.compose([&zero, &ycur, &zero]);
    for _ in 0..(4 * (t.d + t.e) + 4) {
        let bad = up_to(&psi, w).filter(|mo| {
            let i = mo.exp(Var::Y);
            i == m || i >= m + 2 || (i == m + 1 && mo.eps() > 0)
        });
        if bad.is_zero() {
            let mut h = Vec::new();
            for i in 1..m {
                let hi = psi.map_monomials(|mo| (mo.exp(Var::Y) == i).then(|| Monomial::new(0, 0, 0, mo.eps())));
                h.push(up_to(&hi, w.saturating_sub(i)).scale(&k.recip()));
            }
            return Ok((h, k));
        }
        let u = bad
            .map_monomials(|mo| Some(Monomial::new(0, mo.exp(Var::Y) - m, 0, mo.eps())))
            .scale(&-kd.recip());
        ycur = ycur.compose([&zero, &(&y + &u), &zero]);
        psi = phi.compose([&zero, &ycur, &zero]);
    }
    Err(Error::Internal("versal normalization did not converge".into()))
}

pub fn a_normal_form(p: &PoissonFamily, d: u32) -> Result<ANormalForm> {
    let cas = a_casimir(p, d)?;
    let t = cas.c_series.trunc();
    let w = f_weight(t);
    let c = &cas.c_series;
    let x = Series::var(t, Var::X);
    let y = Series::var(t, Var::Y);
    let cz = c.partial(Var::Z);
    let zeta = critical_section(&cz, |s| [x.clone(), y.clone(), s.clone()], &ratio(1, 1));
    let f = up_to(&c.compose([&x, &y, &zeta]), w);
    let split = split_plane(&f)?;
    let phi = up_to(&split.phi, w);
    let (pw, lead) = lowest_power(&phi.at_eps0(), w).ok_or(Error::NotIsolated { degree: t.d })?;
    let m = pw - 1;
    let (hhat, k) = versal(&phi, m, &lead, w)?;
    let sign: i8 = if split.k.is_positive() { 1 } else { -1 };
    let mut delta = sign_delta(m, &lead);
    // With an indefinite quadratic block, (X, Y, Z) = (z, y, x) keeps
    // {X,Y} = Z and negates the y-polynomial: for A⁻ only δ = 1 is needed.
    let flip = if sign < 0 && delta < 0 { -1 } else { 1 };
    delta *= flip;
    let h = hhat.iter().enumerate().map(|(i, s)| s.scale_int(i64::from(flip) * (i + 1) as i64)).collect();
    Ok(ANormalForm { sign, m, delta, h, multiplier: k })
}
