//! Normal-form data of planar fields `v = α ∂x + β ∂z` at a V singularity:
//! resonant coefficients after Poincaré–Dulac normalization and the
//! center-manifold restriction of saddle-nodes.

use num_traits::{Signed, Zero};

use crate::classifier::{VKind, VNormalForm, VSubtype};
use crate::error::{Error, Result};
use crate::jet::{ratio, CoordinateChange, Monomial, Series, Trunc, Var};
use crate::linalg::Mat3;
use crate::Rational;

use super::vcase::{planar_linear_part, PlanarFamily};

/// Field `[α, β]` in the variables `x, z`.
pub type Field = [Series; 2];

const VARS: [Var; 2] = [Var::X, Var::Z];

/// The field in the coordinates given by `ch` (which must fix `y`).
pub fn push_planar(v: &Field, ch: &CoordinateChange) -> Result<Field> {
    let inv = ch.inverse()?;
    let new = |img: &Series| {
        let mut acc = Series::zero(img.trunc());
        for (vj, var) in v.iter().zip(VARS) {
            acc = &acc + &(&img.partial(var) * vj);
        }
        inv.substitute(&acc)
    };
    Ok([new(ch.image(0)), new(ch.image(2))])
}

fn planar_change(t: Trunc, hx: Series, hz: Series) -> Result<CoordinateChange> {
    Ok(CoordinateChange::new([&Series::var(t, Var::X) + &hx, Series::var(t, Var::Y), &Series::var(t, Var::Z) + &hz])?)
}

fn linear_planar(t: Trunc, m: [[Rational; 2]; 2]) -> Result<CoordinateChange> {
    let mut l: Mat3 = Default::default();
    l[0][0] = m[0][0].clone();
    l[0][2] = m[0][1].clone();
    l[1][1] = ratio(1, 1);
    l[2][0] = m[1][0].clone();
    l[2][2] = m[1][1].clone();
    Ok(CoordinateChange::linear(t, &l)?)
}

fn eigenvector(m: &[[Rational; 2]; 2], l: &Rational) -> [Rational; 2] {
    if !m[0][1].is_zero() {
        [m[0][1].clone(), l - &m[0][0]]
    } else if !m[1][0].is_zero() {
        [l - &m[1][1], m[1][0].clone()]
    } else if &m[0][0] == l {
        [ratio(1, 1), ratio(0, 1)]
    } else {
        [ratio(0, 1), ratio(1, 1)]
    }
}

/// Linear coordinates in which the linear part is `diag(lx, lz)`; the two
/// eigenvalues must be distinct rationals.
pub fn diagonalize(v: &Field, lx: &Rational, lz: &Rational) -> Result<Field> {
    let t = v[0].trunc();
    let m = planar_linear_part(&v[0], &v[1]);
    let ex = eigenvector(&m, lx);
    let ez = eigenvector(&m, lz);
    // Columns of P are the eigenvectors; the new coordinates are P⁻¹ u.
    let det = &ex[0] * &ez[1] - &ez[0] * &ex[1];
    if det.is_zero() {
        return Err(Error::Internal("eigenvectors are dependent".into()));
    }
    let inv = [[&ez[1] / &det, -(&ez[0] / &det)], [-(&ex[1] / &det), &ex[0] / &det]];
    push_planar(v, &linear_planar(t, inv)?)
}

/// Removes the non-resonant terms of degrees `2..=top` from a field whose
/// linear part is `diag(lx, lz)`.
pub fn poincare_dulac(v: &Field, lx: &Rational, lz: &Rational, top: u32) -> Result<Field> {
    let t = v[0].trunc();
    let lam = [lx, lz];
    let mut v = v.clone();
    for k in 2..=top.min(t.d) {
        let mut h = [Series::zero(t), Series::zero(t)];
        for i in 0..2 {
            for (m, c) in v[i].homogeneous(k).terms() {
                let (a, b) = (m.exp(Var::X), m.exp(Var::Z));
                let den = Rational::from_integer(a.into()) * lx + Rational::from_integer(b.into()) * lz - lam[i];
                if !den.is_zero() {
                    h[i].add_term(*m, -(c / &den));
                }
            }
        }
        if h.iter().all(Series::is_zero) {
            continue;
        }
        let [hx, hz] = h;
        v = push_planar(&v, &planar_change(t, hx, hz)?)?;
    }
    Ok(v)
}

/// Degree through which the planar field of a reduction is trusted.
fn trusted(t: Trunc) -> u32 {
    t.d.saturating_sub(2)
}

fn delta_flag(c: &Rational) -> u8 {
    u8::from(!c.is_zero())
}

/// Whether the resonant term of an `n : 1` node survives normalization.
pub fn resonant_node_delta(pl: &PlanarFamily, n: u32) -> Result<Option<u8>> {
    let p0 = pl.at_eps0();
    let m = p0.linear_part();
    if n == 1 {
        let scalar = m[0][1].is_zero() && m[1][0].is_zero() && m[0][0] == m[1][1];
        return Ok(Some(u8::from(!scalar)));
    }
    if n > trusted(pl.trunc()) {
        return Ok(None);
    }
    let Some((l1, l2)) = pl.eigen.rational_eigenvalues() else {
        return Err(Error::Internal("resonant node with irrational eigenvalues".into()));
    };
    let (fast, slow) = if l1.abs() >= l2.abs() { (l1, l2) } else { (l2, l1) };
    let v = diagonalize(&[p0.alpha.clone(), p0.beta.clone()], &fast, &slow)?;
    let v = poincare_dulac(&v, &fast, &slow, n)?;
    Ok(Some(delta_flag(&v[0].coeff(Monomial::new(0, 0, n, 0)))))
}

/// Whether the first resonant invariant of a `−p/q` saddle is nonzero.
pub fn resonant_saddle_delta(pl: &PlanarFamily, p: u32, q: u32) -> Result<Option<u8>> {
    let top = p + q + 1;
    if top > trusted(pl.trunc()) {
        return Ok(None);
    }
    let p0 = pl.at_eps0();
    let Some((l1, l2)) = pl.eigen.rational_eigenvalues() else {
        return Err(Error::Internal("resonant saddle with irrational eigenvalues".into()));
    };
    let (lz, lx) = if l1.abs() >= l2.abs() { (l1, l2) } else { (l2, l1) };
    let v = diagonalize(&[p0.alpha.clone(), p0.beta.clone()], &lx, &lz)?;
    let v = poincare_dulac(&v, &lx, &lz, top)?;
    // ẋ/x = lx + a₁u + …, ż/z = lz + b₁u + …, u = x^q z^p; the orbital
    // invariant is a₁ lz − b₁ lx.
    let a1 = v[0].coeff(Monomial::new(q + 1, 0, p, 0));
    let b1 = v[1].coeff(Monomial::new(q, 0, p + 1, 0));
    Ok(Some(delta_flag(&(&a1 * &lz - &b1 * &lx))))
}

/// Center-manifold data of a saddle-node field, as series in `(x, ε)`:
/// the restricted field `c` and the transverse eigenvalue `μ` along the
/// manifold, in coordinates where the linear part at `ε = 0` is
/// `diag(0, λ)`.
#[derive(Clone, Debug)]
pub struct CenterData {
    pub lambda: Rational,
    pub c: Series,
    pub mu: Series,
}

pub fn center_manifold(pl: &PlanarFamily) -> Result<CenterData> {
    let t = pl.trunc();
    if !pl.eigen.det.is_zero() {
        return Err(Error::NotV("not a saddle-node".into()));
    }
    let lambda = pl.eigen.trace.clone();
    let v = diagonalize(&[pl.alpha.clone(), pl.beta.clone()], &ratio(0, 1), &lambda)?;
    let x = Series::var(t, Var::X);
    let zero = Series::zero(t);
    let z = Series::var(t, Var::Z);
    let g_nl = &v[1] - &z.scale(&lambda);
    // z = h(x, ε): λh = h'·F(x, h) − G_nl(x, h).
    let mut h = Series::zero(t);
    for _ in 0..(2 * (t.d + t.e) + 2) {
        let f_on = v[0].compose([&x, &zero, &h]);
        let g_on = g_nl.compose([&x, &zero, &h]);
        let next = (&(&h.partial(Var::X) * &f_on) - &g_on).scale(&lambda.recip());
        if next == h {
            break;
        }
        h = next;
    }
    let c = v[0].compose([&x, &zero, &h]);
    let mu = v[1].partial(Var::Z).compose([&x, &zero, &h]);
    Ok(CenterData { lambda, c: c.filter(|m| m.degree() < trusted(t)), mu: mu.filter(|m| m.degree() < trusted(t)) })
}

/// `(p, δ, a)` of a saddle-node at `ε = 0`; `None` entries are not
/// determined at the available degree.
pub fn saddle_node_data(pl: &PlanarFamily) -> Result<(Option<u32>, Option<i8>, Option<Rational>)> {
    let cd = center_manifold(&pl.at_eps0())?;
    let order = (2..trusted(pl.trunc())).find(|&k| !cd.c.coeff(Monomial::new(k, 0, 0, 0)).is_zero());
    let Some(k) = order else { return Ok((None, None, None)) };
    let p = k - 1;
    let lead = cd.c.coeff(Monomial::new(k, 0, 0, 0)) / &cd.lambda;
    let delta: i8 = if k % 2 == 1 && lead.is_negative() { -1 } else { 1 };
    // a = −Res(μ/c): the coefficient of x^p in μ / (c / x^{p+1}).
    let a = if 2 * p + 1 < trusted(pl.trunc()) {
        let reduced = cd.c.map_monomials(|m| (m.exp(Var::X) >= k).then(|| Monomial::new(m.exp(Var::X) - k, 0, 0, 0)));
        let q = cd.mu.try_div(&reduced)?;
        Some(-q.coeff(Monomial::new(p, 0, 0, 0)))
    } else {
        None
    };
    Ok((Some(p), Some(delta), a))
}

/// Coefficient of `ε` in the restricted field at `x = 0` together with
/// the coefficient of `x²` at `ε = 0`, both relative to `λ`: the
/// saddle-node unfolding is `ẋ ≈ c₂ x² + β ε`.
pub fn saddle_node_unfolding(pl: &PlanarFamily) -> Result<(Rational, Rational)> {
    let cd = center_manifold(pl)?;
    let beta = cd.c.coeff(Monomial::new(0, 0, 0, 1)) / &cd.lambda;
    let c2 = cd.c.coeff(Monomial::new(2, 0, 0, 0)) / &cd.lambda;
    Ok((c2, beta))
}

/// Fills in the nonlinear normal-form data of a V sub-type.
pub fn refine_subtype(pl: &PlanarFamily, base: VSubtype) -> Result<VSubtype> {
    let mut s = base;
    s.normal_form = match s.normal_form {
        VNormalForm::ResonantNode { n, .. } => VNormalForm::ResonantNode { n, delta: resonant_node_delta(pl, n)? },
        VNormalForm::ResonantSaddle { p, q, .. } => {
            VNormalForm::ResonantSaddle { p, q, delta: resonant_saddle_delta(pl, p, q)?, a: None }
        }
        VNormalForm::SaddleNode { .. } => {
            let (p, delta, a) = saddle_node_data(pl)?;
            if p.is_none() {
                s.kind = VKind::SaddleNodeExclusiveOrUndetermined;
            }
            VNormalForm::SaddleNode { p, delta, a }
        }
        other => other,
    };
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Trunc {
        Trunc::new(6, 2)
    }

    fn planar(a: &[(u32, u32, u32, i64)], b: &[(u32, u32, u32, i64)]) -> PlanarFamily {
        let s = |v: &[(u32, u32, u32, i64)]| {
            let rows: Vec<_> = v.iter().map(|&(i, k, l, c)| (i, 0, k, l, c, 1)).collect();
            Series::from_ints(t(), &rows)
        };
        PlanarFamily::new(s(a), s(b)).unwrap()
    }

    #[test]
    fn saddle_node_model_data() {
        let pl = planar(&[(2, 0, 0, 1), (0, 0, 1, -1)], &[(0, 1, 0, 1)]);
        assert_eq!(saddle_node_data(&pl).unwrap(), (Some(1), Some(1), Some(ratio(0, 1))));
        assert_eq!(saddle_node_unfolding(&pl).unwrap(), (ratio(1, 1), ratio(-1, 1)));
    }

    #[test]
    fn saddle_node_with_transverse_dependence() {
        // ẋ = x², ż = z(1 + x): a = −Res((1 + x)/x²) = −1.
        let pl = planar(&[(2, 0, 0, 1)], &[(0, 1, 0, 1), (1, 1, 0, 1)]);
        assert_eq!(saddle_node_data(&pl).unwrap(), (Some(1), Some(1), Some(ratio(-1, 1))));
    }

    #[test]
    fn cubic_saddle_node_sign() {
        let pl = planar(&[(3, 0, 0, -1)], &[(0, 1, 0, 2)]);
        assert_eq!(saddle_node_data(&pl).unwrap().0, Some(2));
        assert_eq!(saddle_node_data(&pl).unwrap().1, Some(-1));
    }

    #[test]
    fn node_resonance() {
        let with = planar(&[(1, 0, 0, 2), (0, 2, 0, 1), (1, 1, 0, 3)], &[(0, 1, 0, 1)]);
        assert_eq!(resonant_node_delta(&with, 2).unwrap(), Some(1));
        let without = planar(&[(1, 0, 0, 2), (1, 1, 0, 3)], &[(0, 1, 0, 1), (2, 0, 0, 1)]);
        assert_eq!(resonant_node_delta(&without, 2).unwrap(), Some(0));
    }

    #[test]
    fn saddle_resonance_is_orbital() {
        let with = planar(&[(1, 0, 0, -1), (3, 1, 0, 1)], &[(0, 1, 0, 2)]);
        assert_eq!(resonant_saddle_delta(&with, 1, 2).unwrap(), Some(1));
        // The linear saddle multiplied by 1 + x²z.
        let scaled = planar(&[(1, 0, 0, -1), (3, 1, 0, -1)], &[(0, 1, 0, 2), (2, 2, 0, 2)]);
        assert_eq!(resonant_saddle_delta(&scaled, 1, 2).unwrap(), Some(0));
    }
}
