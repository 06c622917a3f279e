use num_traits::Zero;
use serde::Serialize;

use crate::classifier::EigenPair;
use crate::error::{Error, Result};
use crate::jet::{ratio, CoordinateChange, DiffObject, Monomial, Series, Trunc, Var};
use crate::linalg::Mat3;
use crate::poisson::{mod_weighted, PoissonFamily};
use crate::Rational;

/// `P = ∂y ∧ (α ∂x + β ∂z)` with `α, β` functions of `(x, z, ε)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanarFamily {
    #[serde(serialize_with = "crate::json::series_records")]
    pub alpha: Series,
    #[serde(serialize_with = "crate::json::series_records")]
    pub beta: Series,
    /// Eigenvalues of the linear part of the field at the origin, `ε = 0`.
    pub eigen: EigenPair,
}

impl PlanarFamily {
    pub fn new(alpha: Series, beta: Series) -> Result<Self> {
        let eigen = EigenPair::from_matrix(&planar_linear_part(&alpha, &beta));
        if eigen.trace.is_zero() {
            return Err(Error::NotV("eigenvalue sum of the planar field is zero".into()));
        }
        Ok(PlanarFamily { alpha, beta, eigen })
    }

    pub fn trunc(&self) -> Trunc {
        self.alpha.trunc()
    }

    pub fn to_family(&self) -> PoissonFamily {
        PoissonFamily::from_planar(&self.alpha, &self.beta).expect("planar components do not depend on y")
    }

    pub fn linear_part(&self) -> [[Rational; 2]; 2] {
        planar_linear_part(&self.alpha, &self.beta)
    }

    pub fn at_eps0(&self) -> PlanarFamily {
        PlanarFamily { alpha: self.alpha.at_eps0(), beta: self.beta.at_eps0(), eigen: self.eigen.clone() }
    }
}

/// `[[∂α/∂x, ∂α/∂z], [∂β/∂x, ∂β/∂z]]` at the origin, `ε = 0`.
pub(crate) fn planar_linear_part(alpha: &Series, beta: &Series) -> [[Rational; 2]; 2] {
    let c = |s: &Series, m: Monomial| s.coeff(m);
    let x = Monomial::new(1, 0, 0, 0);
    let z = Monomial::new(0, 0, 1, 0);
    [[c(alpha, x), c(alpha, z)], [c(beta, x), c(beta, z)]]
}

/// Applies the vector field `v` as a derivation.
pub(crate) fn derive(v: &DiffObject, s: &Series) -> Series {
    let mut acc = Series::zero(s.trunc());
    for (i, var) in Var::SPACE.iter().enumerate() {
        if !v.comp(i).is_zero() {
            acc = &acc + &(v.comp(i) * &s.partial(*var));
        }
    }
    acc
}

fn swap_change(t: Trunc, k: usize) -> Result<CoordinateChange> {
    let mut m: Mat3 = Default::default();
    for (i, row) in m.iter_mut().enumerate() {
        let j = if i == k { 1 } else if i == 1 { k } else { i };
        row[j] = ratio(1, 1);
    }
    Ok(CoordinateChange::linear(t, &m)?)
}

/// Rectifies the curl to `∂/∂y` by a change with constant Jacobian and
/// reads off the planar field `v` with `P = ∂y ∧ v`.
///
/// The new coordinates are the flow-box coordinates of the curl `X` based
/// on the surface `σ(x, z) = (a(x, z), 0, z)`, where `a` solves
/// `a_x · X_y(σ) = X_y(0)` so that the Jacobian stays constant.
pub fn v_reduce(p: &PoissonFamily) -> Result<(PlanarFamily, CoordinateChange)> {
    let t = p.trunc();
    let curl0 = p.curl();
    let at0: Vec<Rational> = (0..3).map(|i| curl0.comp(i).constant_term()).collect();
    let Some(k) = [1usize, 0, 2].into_iter().find(|&i| !at0[i].is_zero()) else {
        return Err(Error::NotV("the curl vanishes at the origin".into()));
    };
    let mut total = CoordinateChange::identity(t);
    let mut p1 = p.clone();
    if k != 1 {
        let sw = swap_change(t, k)?;
        p1 = p1.pushforward(&sw)?;
        total = total.then(&sw);
    }
    let x_field = p1.curl();
    let xs = Series::var(t, Var::X);
    let zs = Series::var(t, Var::Z);
    let zero = Series::zero(t);

    // Jacobian normalization: a_x = c / X_y(a, 0, z), a(0, z) = 0.
    let xy = x_field.comp(1);
    let c = xy.at_origin();
    let mut a = xs.clone();
    for _ in 0..(t.d + t.e + 3) {
        let den = xy.compose([&a, &zero, &zs]);
        let next = c.try_div(&den)?.integrate(Var::X);
        if next == a {
            break;
        }
        a = next;
    }

    // Flow of X from the surface for time y: Σ yⁿ/n! (Xⁿ u)(σ).
    let ys = Series::var(t, Var::Y);
    let mut images: [Series; 3] = [zero.clone(), zero.clone(), zero.clone()];
    for (i, var) in Var::SPACE.iter().enumerate() {
        let mut term = Series::var(t, *var);
        let mut ypow = Series::one(t);
        let mut fact = Rational::from_integer(1.into());
        for n in 0..=t.d {
            if n > 0 {
                term = derive(&x_field, &term);
                ypow = &ypow * &ys;
                fact *= Rational::from_integer(n.into());
            }
            if term.is_zero() || ypow.is_zero() {
                break;
            }
            let on_surface = term.compose([&a, &zero, &zs]);
            images[i] = &images[i] + &(&on_surface * &ypow).scale(&fact.recip());
        }
    }
    let flow = CoordinateChange::new(images)?;
    let ch = flow.inverse()?;
    let p2 = p1.pushforward(&ch)?;
    total = total.then(&ch);

    let keep = t.d.saturating_sub(1);
    let alpha = mod_weighted(&-p2.bxy(), keep);
    let beta = mod_weighted(p2.byz(), keep);
    let stray = mod_weighted(p2.bzx(), keep);
    if !stray.is_zero() || alpha.depends_on(Var::Y) || beta.depends_on(Var::Y) {
        return Err(Error::Internal(format!(
            "rectified family is not of the form ∂y∧v: {{z,x}} = {stray}, α = {alpha}, β = {beta}"
        )));
    }
    Ok((PlanarFamily::new(alpha, beta)?, total))
}
