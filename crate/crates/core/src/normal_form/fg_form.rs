use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{ratio, CoordinateChange, DiffKind, DiffObject, Series, Trunc, Var};
use crate::poisson::{fg_residual, mod_degree, mod_weighted, PoissonFamily};

use super::{poincare_xy, xy_part, z_coeff, z_quotient, reduce_to_zform, ZFormFamily};

/// The pair `(f̂, ĝ)` with the changes that produced it.
#[derive(Clone, Debug, Serialize)]
pub struct NormalFormData {
    #[serde(serialize_with = "crate::json::series_records")]
    pub f: Series,
    #[serde(serialize_with = "crate::json::series_records")]
    pub g: Series,
    /// Changes in the order they were applied.
    #[serde(serialize_with = "crate::json::change_list")]
    pub change_log: Vec<CoordinateChange>,
}

impl NormalFormData {
    pub fn trunc(&self) -> Trunc {
        self.f.trunc()
    }

    /// All logged changes composed into one.
    pub fn total_change(&self) -> CoordinateChange {
        self.change_log
            .iter()
            .fold(CoordinateChange::identity(self.trunc()), |acc, c| acc.then(c))
    }

    /// The family `{x,y} = z, {y,z} = f_x + z g_x, {z,x} = f_y + z g_y`.
    pub fn family(&self) -> PoissonFamily {
        let t = self.trunc();
        let z = Series::var(t, Var::Z);
        PoissonFamily::unchecked(
            z.clone(),
            &self.f.partial(Var::X) + &(&z * &self.g.partial(Var::X)),
            &self.f.partial(Var::Y) + &(&z * &self.g.partial(Var::Y)),
        )
        .expect("shared truncation")
    }

    /// Values at `ε = 0`.
    pub fn f0(&self) -> Series {
        self.f.at_eps0()
    }

    pub fn g0(&self) -> Series {
        self.g.at_eps0()
    }
}

/// Degree through which the reduction is certified: the Jacobi identity of
/// a degree-`D` jet is trusted modulo degree `D − 1`.
fn trusted(t: Trunc) -> u32 {
    t.d.saturating_sub(1)
}

fn check_shape(z: &ZFormFamily, q: u32) -> Result<()> {
    let t = z.trunc();
    let keep = trusted(t);
    for i in 0..q {
        for (name, s) in [("{y,z}", &z.u), ("{z,x}", &z.v)] {
            let high = mod_degree(&z_quotient(&xy_part(s, i), 2), keep.saturating_sub(2));
            if !high.is_zero() {
                return Err(Error::Internal(format!("{name} not affine in z at (x,y)-degree {i}: {high}")));
            }
        }
    }
    let low = mod_degree(&z.dev.filter(|m| m.xy_degree() < q + 2), keep);
    if !low.is_zero() {
        return Err(Error::Internal(format!("{{x,y}} deviation below (x,y)-degree {}: {low}", q + 2)));
    }
    Ok(())
}

/// One step of the degree-by-degree reduction: makes the `(x, y)`-degree
/// `q` parts of `{y,z}` and `{z,x}` affine in `z` and pushes the deviation
/// of `{x,y}` from `z` to `(x, y)`-degree `q + 3`.
pub fn fg_step(zf: &ZFormFamily, q: u32) -> Result<(ZFormFamily, CoordinateChange)> {
    check_shape(zf, q)?;
    let t = zf.trunc();
    let x = Series::var(t, Var::X);
    let y = Series::var(t, Var::Y);
    let z = Series::var(t, Var::Z);
    let id = CoordinateChange::identity(t);
    let p0 = zf.to_family();

    // z̃ = z (1 + e) with ∂e/∂x = α₂, ∂e/∂y = β₂ (e by Euler's formula).
    let alpha2 = z_quotient(&xy_part(&zf.u, q), 2);
    let beta2 = z_quotient(&xy_part(&zf.v, q), 2);
    let e = (&(&x * &alpha2) + &(&y * &beta2)).scale(&ratio(1, (q + 1) as i64));
    let ch1 = CoordinateChange::new([x.clone(), y.clone(), &z + &(&z * &e)])?;
    let p1 = if e.is_zero() { p0 } else { p0.pushforward(&ch1)? };

    // x̂ = x̃ + r with ∂r/∂x = −c̃, where z c̃ is the (x, y)-degree q + 1
    // deviation of {x̃, ỹ}.
    let dev1 = p1.bxy() - &z;
    let c_tilde = z_quotient(&xy_part(&dev1, q + 1), 1);
    let r = -c_tilde.integrate(Var::X);
    let ch2 = CoordinateChange::new([&x + &r, y.clone(), z.clone()])?;
    let p2 = if r.is_zero() { p1 } else { p1.pushforward(&ch2)? };

    // Z = ẑ + ĉ with ĉ the (x, y)-degree q + 2 deviation.
    let dev2 = p2.bxy() - &z;
    let c_hat = xy_part(&dev2, q + 2);
    let ch3 = CoordinateChange::new([x, y, &z + &c_hat])?;
    let p3 = if c_hat.is_zero() { p2 } else { p2.pushforward(&ch3)? };

    let mut total = id;
    for (c, used) in [(&ch1, !e.is_zero()), (&ch2, !r.is_zero()), (&ch3, !c_hat.is_zero())] {
        if used {
            total = total.then(c);
        }
    }
    Ok((ZFormFamily::from_family(&p3), total))
}

/// Full reduction to `(f̂, ĝ)` at degree `d` (at most the family's own).
pub fn reduce_to_fg(p: &PoissonFamily, d: u32) -> Result<NormalFormData> {
    let t0 = p.trunc();
    if d > t0.d {
        return Err(Error::InsufficientDegree(format!("requested degree {d} exceeds the input truncation {}", t0.d)));
    }
    let t = Trunc::new(d, t0.e);
    let p = p.map(|s| s.with_trunc(t));
    let (mut zf, ch0) = reduce_to_zform(&p)?;
    let mut log = vec![ch0];
    for q in 0..t.d.saturating_sub(1) {
        let (next, ch) = fg_step(&zf, q)?;
        zf = next;
        if ch != CoordinateChange::identity(t) {
            log.push(ch);
        }
    }
    check_shape(&zf, t.d.saturating_sub(1))?;
    let keep = trusted(t);
    let a0 = mod_weighted(&z_coeff(&zf.u, 0), keep);
    let a1 = mod_weighted(&z_coeff(&zf.u, 1), keep.saturating_sub(1));
    let b0 = mod_weighted(&z_coeff(&zf.v, 0), keep);
    let b1 = mod_weighted(&z_coeff(&zf.v, 1), keep.saturating_sub(1));
    let f = poincare_xy(&a0, &b0);
    let g = poincare_xy(&a1, &b1);
    Ok(NormalFormData { f, g, change_log: log })
}

/// Residual 2-form `df̂∧dĝ`, reduced modulo degree `D − 1` in the weighted
/// filtration where `ε` counts as one degree.
pub fn verify_fg(nf: &NormalFormData) -> DiffObject {
    let t = nf.trunc();
    let w = mod_weighted(&fg_residual(&nf.f, &nf.g), trusted(t));
    let zero = Series::zero(t);
    DiffObject::triple(DiffKind::TwoForm, [zero.clone(), zero, w])
}
