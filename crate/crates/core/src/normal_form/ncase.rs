use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::classifier::{quad_coeffs, quadform_class};
use crate::error::{Error, Result};
use crate::jet::{ratio, Monomial, Series, Trunc, Var};
use crate::linalg::solve;
use crate::poisson::mod_weighted;
use crate::Rational;

use super::{reduce_to_fg, NormalFormData};

/// Rotational normal form of an N family.
///
/// With `r = x² + w y²` the reduced pair is `ĝ = Σ Λₖ(ε) rᵏ`, `f̂ = Σ Mₖ(ε) rᵏ`,
/// so that `{y,z} = A (z + C)`, `{z,x} = B (z + C)` with
/// `A = x Σ λᵢ rⁱ`, `B = w y Σ λᵢ rⁱ` and `C = Σ μᵢ rⁱ`.
/// `w` is rational; a further rescaling to `w = ±1` multiplies `λᵢ` and `μᵢ`
/// (`i ≥ 1` for `μ`) by powers of `√|w|`.
#[derive(Clone, Debug, Serialize)]
pub struct NFamilyNormalForm {
    /// `+1` for N⁺ (`w > 0`), `−1` for N⁻.
    pub sign: i8,
    #[serde(with = "crate::json::rational_str")]
    pub w: Rational,
    /// `λ₀(ε), λ₁(ε), …`, each masked to its trusted `ε`-orders.
    #[serde(serialize_with = "crate::json::series_list")]
    pub lambda: Vec<Series>,
    #[serde(serialize_with = "crate::json::series_list")]
    pub mu: Vec<Series>,
    /// Remainders of the reduced brackets after subtracting `A (z + C)` and
    /// `B (z + C)`; zero on the trusted weights.
    #[serde(serialize_with = "crate::json::series_records")]
    pub q1: Series,
    #[serde(serialize_with = "crate::json::series_records")]
    pub q2: Series,
    #[serde(serialize_with = "crate::json::series_records")]
    pub f: Series,
    #[serde(serialize_with = "crate::json::series_records")]
    pub g: Series,
    #[serde(skip)]
    pub normal_form: NormalFormData,
}

impl NFamilyNormalForm {
    pub fn trunc(&self) -> Trunc {
        self.f.trunc()
    }

    /// Coefficient of `εˡ` in `λᵢ`, if it was determined.
    pub fn lambda_coeff(&self, i: usize, l: u32) -> Option<Rational> {
        self.lambda.get(i).filter(|_| known(self.trunc(), i, l)).map(|s| eps_coeff(s, l))
    }

    pub fn mu_coeff(&self, i: usize, l: u32) -> Option<Rational> {
        self.mu.get(i).filter(|_| known(self.trunc(), i, l)).map(|s| eps_coeff(s, l))
    }

    /// `λ₀(0)` normalized to `w = ±1`, up to the factor `√|w|`.
    pub fn lambda0(&self) -> Rational {
        eps_coeff(&self.lambda[0], 0)
    }

    pub fn mu1(&self) -> Option<Rational> {
        self.mu_coeff(1, 0)
    }

    pub fn mu0_prime(&self) -> Option<Rational> {
        self.mu_coeff(0, 1)
    }

    /// `A(z + C)` and `B(z + C)` rebuilt from the extracted coefficients.
    pub fn reconstruct(&self) -> [Series; 2] {
        let t = self.trunc();
        let (x, y, z) = (Series::var(t, Var::X), Series::var(t, Var::Y), Series::var(t, Var::Z));
        let r = radial(t, &self.w);
        let sum = |cs: &[Series]| {
            let mut acc = Series::zero(t);
            let mut rk = Series::one(t);
            for c in cs {
                acc = &acc + &(c * &rk);
                rk = &rk * &r;
            }
            acc
        };
        let lam = sum(&self.lambda);
        let zc = &z + &sum(&self.mu);
        let a = &x * &lam;
        let b = (&y * &lam).scale(&self.w);
        [&a * &zc, &b * &zc]
    }
}

/// Whether the `εˡ` coefficient of the `i`-th coefficient function is fixed
/// by a degree-`D` jet.
fn known(t: Trunc, i: usize, l: u32) -> bool {
    l <= t.e && 2 * (i as u32 + 1) + l <= t.d.saturating_sub(2)
}

fn eps_coeff(s: &Series, l: u32) -> Rational {
    s.coeff(Monomial::new(0, 0, 0, l))
}

fn radial(t: Trunc, w: &Rational) -> Series {
    let x = Series::var(t, Var::X);
    let y = Series::var(t, Var::Y);
    &(&x * &x) + &(&y * &y).scale(w)
}

fn linear_map(s: &Series, m: [[Rational; 2]; 2]) -> Series {
    let t = s.trunc();
    let x = Series::var(t, Var::X);
    let y = Series::var(t, Var::Y);
    let z = Series::var(t, Var::Z);
    let u = &x.scale(&m[0][0]) + &y.scale(&m[0][1]);
    let v = &x.scale(&m[1][0]) + &y.scale(&m[1][1]);
    s.compose([&u, &v, &z])
}

fn drop_constant(s: &Series) -> Series {
    s.filter(|m| m.degree() > 0)
}

/// Moves the critical point of `ĝ_ε` to the origin by an `ε`-dependent
/// translation; the volume form is preserved.
fn recenter(f: &Series, g: &Series) -> Result<(Series, Series)> {
    let t = g.trunc();
    let (a, b, c) = quad_coeffs(&g.at_eps0().homogeneous(2));
    let two = ratio(2, 1);
    let det = &(&two * &a) * &(&two * &c) - &b * &b;
    if det.is_zero() {
        return Err(Error::NotN("quadratic part of ĝ₀ is degenerate".into()));
    }
    // Inverse Hessian at ε = 0.
    let inv = [[&(&two * &c) / &det, -&b / &det], [-&b / &det, &(&two * &a) / &det]];
    let (x, y, z) = (Series::var(t, Var::X), Series::var(t, Var::Y), Series::var(t, Var::Z));
    let (gx, gy) = (g.partial(Var::X), g.partial(Var::Y));
    let mut p = [Series::zero(t), Series::zero(t)];
    for _ in 0..=(t.e + 1) {
        let (u, v) = (&x + &p[0], &y + &p[1]);
        let grad = [gx.compose([&u, &v, &z]).at_origin(), gy.compose([&u, &v, &z]).at_origin()];
        if grad.iter().all(Series::is_zero) {
            break;
        }
        for (i, row) in inv.iter().enumerate() {
            p[i] = &p[i] - &(&grad[0].scale(&row[0]) + &grad[1].scale(&row[1]));
        }
    }
    let (u, v) = (&x + &p[0], &y + &p[1]);
    Ok((drop_constant(&f.compose([&u, &v, &z])), drop_constant(&g.compose([&u, &v, &z]))))
}

/// Determinant-one linear map bringing `j²ĝ₀` to `a (x² + w y²)`.
fn diagonalize(q: &Series) -> [[Rational; 2]; 2] {
    let (a, _, c) = quad_coeffs(q);
    let (one, zero) = (Rational::one(), Rational::zero());
    let pre = if !a.is_zero() {
        [[one.clone(), zero.clone()], [zero.clone(), one.clone()]]
    } else if !c.is_zero() {
        [[zero.clone(), -one.clone()], [one.clone(), zero.clone()]]
    } else {
        [[one.clone(), zero.clone()], [one.clone(), one.clone()]]
    };
    let (a2, b2, _) = quad_coeffs(&linear_map(q, pre.clone()));
    let shift = -(&b2 / (&a2 + &a2));
    let shear = [[one.clone(), shift], [zero, one]];
    // Composite substitution: first `pre`, then `shear`.
    let mut m: [[Rational; 2]; 2] = Default::default();
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = &pre[i][0] * &shear[0][j] + &pre[i][1] * &shear[1][j];
        }
    }
    m
}

/// `f ∘ exp(X_h)` for the Hamiltonian field `X_h = h_y ∂x − h_x ∂y`.
fn hamiltonian_flow(s: &Series, h: &Series) -> Series {
    let t = s.trunc();
    let (hx, hy) = (h.partial(Var::X), h.partial(Var::Y));
    let mut acc = s.clone();
    let mut term = s.clone();
    for n in 1..=(t.d + t.e + 2) {
        term = (&(&hy * &term.partial(Var::X)) - &(&hx * &term.partial(Var::Y))).scale(&ratio(1, n as i64));
        if term.is_zero() {
            break;
        }
        acc = &acc + &term;
    }
    acc
}

/// Solves `a·L h + ρ rᵏᐟ² = piece` on homogeneous polynomials of degree
/// `k`, with `L = 2x ∂y − 2w y ∂x`.
fn homological(piece: &Series, k: u32, l: u32, a: &Rational, w: &Rational) -> Result<Series> {
    let t = piece.trunc();
    let mono = |i: u32| Monomial::new(i, k - i, 0, l);
    let rows: Vec<Monomial> = (0..=k).map(mono).collect();
    let row_of = |m: Monomial| rows.iter().position(|r| *r == m).expect("degree k monomial");
    let n = (k + 1) as usize;
    let radial_col = k % 2 == 0;
    let cols = n + usize::from(radial_col);
    let mut mat = vec![vec![Rational::zero(); cols]; n];
    for i in 0..=k {
        let j = k - i;
        if j > 0 {
            mat[row_of(Monomial::new(i + 1, j - 1, 0, l))][i as usize] += a * ratio(2 * j as i64, 1);
        }
        if i > 0 {
            mat[row_of(Monomial::new(i - 1, j + 1, 0, l))][i as usize] -= a * w * ratio(2 * i as i64, 1);
        }
    }
    if radial_col {
        let rk = radial(t, w).pow(k / 2);
        for (m, c) in rk.terms() {
            mat[row_of(Monomial::new(m.0[0], m.0[1], 0, l))][n] = c.clone();
        }
    }
    let rhs: Vec<Rational> = rows.iter().map(|m| piece.coeff(*m)).collect();
    let sol = solve(&mat, &rhs).ok_or_else(|| Error::Internal(format!("non-radial part at degree {k} is not removable")))?;
    let mut h = Series::zero(t);
    for (i, v) in sol.into_iter().take(n).enumerate() {
        h.add_term(mono(i as u32), v);
    }
    Ok(h)
}

/// Reads `Σ cₖ(ε) rᵏ` off a radial series (`r` in the `x` slot of the
/// result) and checks that nothing else remains on weights `≤ top`.
fn radial_profile(s: &Series, w: &Rational, top: u32) -> Result<Series> {
    let t = s.trunc();
    let mut prof = Series::zero(t);
    for (m, c) in s.terms() {
        if m.exp(Var::Y) == 0 && m.exp(Var::Z) == 0 && m.exp(Var::X) % 2 == 0 && m.degree() + m.eps() <= top {
            prof.add_term(Monomial::new(m.exp(Var::X) / 2, 0, 0, m.eps()), c.clone());
        }
    }
    let rebuilt = prof.compose([&radial(t, w), &Series::zero(t), &Series::zero(t)]);
    let rest = mod_weighted(&(s - &rebuilt), top + 1);
    if !rest.is_zero() {
        return Err(Error::Internal(format!("series is not radial: remainder {rest}")));
    }
    Ok(prof)
}

/// `c_i(ε)` for `i = 0, …` from a one-variable profile.
fn coeff_list(prof: &Series, count: usize, scale: impl Fn(usize) -> Rational) -> Vec<Series> {
    let t = prof.trunc();
    (0..count)
        .map(|i| {
            let mut s = Series::zero(t);
            for l in 0..=t.e {
                if known(t, i, l) {
                    let c = prof.coeff(Monomial::new(i as u32, 0, 0, l));
                    s.add_term(Monomial::new(0, 0, 0, l), c * scale(i));
                }
            }
            s
        })
        .collect()
}

/// Rotational normal form of an N family: recentering at the critical point
/// of `ĝ_ε`, a determinant-one linear map and Hamiltonian changes removing
/// the non-radial terms degree by degree.
pub fn n_reduce(p: &crate::poisson::PoissonFamily, d: u32) -> Result<NFamilyNormalForm> {
    n_normal_form(reduce_to_fg(p, d)?)
}

/// [`n_reduce`] starting from an already computed `(f̂, ĝ)` normal form.
pub fn n_normal_form(nf: NormalFormData) -> Result<NFamilyNormalForm> {
    let t = nf.trunc();
    let q0 = nf.g0().homogeneous(2);
    let class = quadform_class(&q0)?;
    if !nf.g0().jet(1).is_zero() || !nf.f0().jet(1).is_zero() {
        return Err(Error::NotN("the origin is not an N point of P₀".into()));
    }
    if !class.is_nondegenerate() {
        return Err(Error::NotN(format!("2-jet of ĝ₀ is {class:?}")));
    }
    let wg = t.d.saturating_sub(2);
    let (f, g) = recenter(&mod_weighted(&nf.f, t.d), &mod_weighted(&nf.g, wg + 1))?;
    let m = diagonalize(&q0);
    let (mut f, mut g) = (linear_map(&f, m.clone()), linear_map(&g, m));
    let (a, _, c) = quad_coeffs(&g.at_eps0().homogeneous(2));
    let w = &c / &a;

    for weight in 3..=wg {
        for l in 0..=weight.min(t.e) {
            let k = weight - l;
            if k < 1 {
                continue;
            }
            let piece = g.filter(|m| m.degree() == k && m.exp(Var::Z) == 0 && m.eps() == l);
            if piece.is_zero() {
                continue;
            }
            if k == 1 {
                return Err(Error::Internal("critical point was not centered".into()));
            }
            let h = -homological(&piece, k, l, &a, &w)?;
            f = hamiltonian_flow(&f, &h);
            g = hamiltonian_flow(&g, &h);
        }
    }
    let g = mod_weighted(&g, wg + 1);
    let f = mod_weighted(&f, t.d);

    let big_lambda = radial_profile(&g, &w, wg)?;
    let big_m = radial_profile(&f, &w, wg)?;
    let dl = big_lambda.partial(Var::X);
    let cprof = big_m.partial(Var::X).try_div(&dl)?;
    let count = (wg / 2) as usize;
    // λᵢ = 2(i+1) Λᵢ₊₁.
    let shifted = big_lambda.map_monomials(|m| (m.exp(Var::X) >= 1).then(|| m.with(Var::X, m.exp(Var::X) - 1)));
    let lambda = coeff_list(&shifted, count, |i| ratio(2 * (i as i64 + 1), 1));
    let mu = coeff_list(&cprof, count, |_| Rational::one());

    if lambda.is_empty() || eps_coeff(&lambda[0], 0).is_zero() {
        return Err(Error::NotN("λ₀(0) vanishes".into()));
    }
    if mu.first().is_some_and(|m0| !eps_coeff(m0, 0).is_zero()) {
        return Err(Error::NotN("μ₀(0) ≠ 0: the origin is not singular".into()));
    }
    if !known(t, 1, 0) {
        return Err(Error::InsufficientDegree(format!("μ₁(0) needs degree ≥ 6, got {}", t.d)));
    }

    let mut out = NFamilyNormalForm {
        sign: if w.is_positive() { 1 } else { -1 },
        w,
        lambda,
        mu,
        q1: Series::zero(t),
        q2: Series::zero(t),
        f,
        g,
        normal_form: nf,
    };
    let fam = NormalFormData { f: out.f.clone(), g: out.g.clone(), change_log: Vec::new() }.family();
    let [ra, rb] = out.reconstruct();
    let keep = t.d.saturating_sub(2);
    out.q1 = mod_weighted(&(fam.byz() - &ra), keep);
    out.q2 = mod_weighted(&(fam.bzx() - &rb), keep);
    Ok(out)
}
