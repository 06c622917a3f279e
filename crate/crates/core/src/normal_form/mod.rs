//! Formal reductions of Poisson families, computed modulo the truncation
//! degree.
//!
//! - [`reduce_to_zform`]: coordinates with `{x,y} = z`;
//! - [`fg_step`] / [`reduce_to_fg`]: the normal form
//!   `{x,y} = z, {y,z} = f_x + z g_x, {z,x} = f_y + z g_y` with `df∧dg = 0`;
//! - [`v_reduce`]: V singularities as `∂y ∧ v` for a planar field `v`;
//! - [`a_casimir`], [`a_normal_form`]: Casimir and normal form of A families;
//! - [`n_reduce`]: the rotational normal form of N families.

mod acase;
mod fg_form;
mod ncase;
pub mod planar;
mod vcase;
mod zform;

pub use acase::{a_casimir, a_invariants, a_normal_form, casimir_residuals, ANormalForm, CasimirFamily};
pub use fg_form::{fg_step, reduce_to_fg, verify_fg, NormalFormData};
pub use ncase::{n_normal_form, n_reduce, NFamilyNormalForm};
pub use vcase::{v_reduce, PlanarFamily};
pub use zform::{reduce_to_zform, ZFormFamily};

use crate::jet::{Monomial, Series, Var};

/// Terms whose degree in `(x, y)` equals `k`.
pub(crate) fn xy_part(s: &Series, k: u32) -> Series {
    s.filter(|m| m.xy_degree() == k)
}

/// Terms with `z`-degree at least `k`, divided by `z^k`.
pub(crate) fn z_quotient(s: &Series, k: u32) -> Series {
    s.map_monomials(|m| (m.exp(Var::Z) >= k).then(|| m.with(Var::Z, m.exp(Var::Z) - k)))
}

/// Terms with `z`-degree exactly `k`, divided by `z^k`.
pub(crate) fn z_coeff(s: &Series, k: u32) -> Series {
    s.map_monomials(|m| (m.exp(Var::Z) == k).then(|| m.with(Var::Z, 0)))
}

/// Homogeneous Poincaré integration in the plane: the unique `F` without
/// constant term and with `dF = a dx + b dy` when the form is closed.
pub(crate) fn poincare_xy(a: &Series, b: &Series) -> Series {
    let t = a.trunc();
    let x = Series::var(t, Var::X);
    let y = Series::var(t, Var::Y);
    let mut out = Series::zero(t);
    let top = t.d;
    for k in 0..top {
        let ak = a.homogeneous(k);
        let bk = b.homogeneous(k);
        if ak.is_zero() && bk.is_zero() {
            continue;
        }
        let part = &(&x * &ak) + &(&y * &bk);
        out = &out + &part.scale(&crate::jet::ratio(1, (k + 1) as i64));
    }
    out
}

/// Divides a polynomial in `ε` alone by `ε^k`.
pub(crate) fn eps_shift_down(s: &Series, k: u32) -> Series {
    s.map_monomials(|m| (m.eps() >= k).then(|| Monomial::new(m.0[0], m.0[1], m.0[2], m.eps() - k)))
}

/// Lowest `ε`-order among the terms.
pub(crate) fn eps_order(s: &Series) -> Option<u32> {
    s.terms().map(|(m, _)| m.eps()).min()
}
