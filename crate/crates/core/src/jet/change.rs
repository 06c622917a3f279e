use num_traits::Zero;

use super::series::{Monomial, Series, Trunc, Var};
use crate::error::JetError;
use crate::linalg::{inverse3, Mat3};

/// A family of coordinate changes: `images[i]` is the i-th new coordinate
/// written as a series in the old coordinates `(x, y, z)` and `ε`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateChange {
    images: [Series; 3],
}

impl CoordinateChange {
    pub fn identity(trunc: Trunc) -> Self {
        CoordinateChange {
            images: [
                Series::var(trunc, Var::X),
                Series::var(trunc, Var::Y),
                Series::var(trunc, Var::Z),
            ],
        }
    }

    /// Validates that the linear part at `ε = 0` is invertible.
    pub fn new(images: [Series; 3]) -> Result<Self, JetError> {
        let t = images[0].trunc();
        for s in &images[1..] {
            if s.trunc() != t {
                return Err(JetError::TruncMismatch { left: t, right: s.trunc() });
            }
        }
        let ch = CoordinateChange { images };
        inverse3(&ch.linear_part()).ok_or(JetError::SingularChange)?;
        Ok(ch)
    }

    /// Linear change `new_i = Σ_j m[i][j] old_j`.
    pub fn linear(trunc: Trunc, m: &Mat3) -> Result<Self, JetError> {
        let images = std::array::from_fn(|i| {
            Series::from_terms(
                trunc,
                (0..3).map(|j| (unit(j), m[i][j].clone())),
            )
        });
        CoordinateChange::new(images)
    }

    pub fn trunc(&self) -> Trunc {
        self.images[0].trunc()
    }

    pub fn images(&self) -> &[Series; 3] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Series {
        &self.images[i]
    }

    /// Jacobian at the origin for `ε = 0`.
    pub fn linear_part(&self) -> Mat3 {
        std::array::from_fn(|i| std::array::from_fn(|j| self.images[i].coeff(unit(j))))
    }

    /// Constant terms of the images; nonzero only through `ε`.
    pub fn origin_offset(&self) -> [Series; 3] {
        std::array::from_fn(|i| self.images[i].at_origin())
    }

    pub fn is_centered(&self) -> bool {
        self.images.iter().all(|s| s.at_origin().is_zero())
    }

    /// `s ∘ self`, i.e. `s` with every old coordinate replaced by its image.
    pub fn substitute(&self, s: &Series) -> Series {
        s.compose([&self.images[0], &self.images[1], &self.images[2]])
    }

    /// Apply `self` first and then `next`.
    pub fn then(&self, next: &CoordinateChange) -> CoordinateChange {
        CoordinateChange {
            images: std::array::from_fn(|i| self.substitute(&next.images[i])),
        }
    }

    /// Truncated inverse, obtained from the fixed point
    /// `ψ = L⁻¹ (u − N(ψ))` where `L` is the linear part at `ε = 0`.
    pub fn inverse(&self) -> Result<CoordinateChange, JetError> {
        let t = self.trunc();
        let l = self.linear_part();
        let linv = inverse3(&l).ok_or(JetError::SingularChange)?;
        let lin: [Series; 3] = std::array::from_fn(|i| {
            Series::from_terms(t, (0..3).map(|j| (unit(j), l[i][j].clone())))
        });
        let nonlinear: [Series; 3] = std::array::from_fn(|i| &self.images[i] - &lin[i]);
        let apply_linv = |v: [Series; 3]| -> [Series; 3] {
            std::array::from_fn(|i| {
                let mut acc = Series::zero(t);
                for (j, vj) in v.iter().enumerate() {
                    if !linv[i][j].is_zero() {
                        acc = &acc + &vj.scale(&linv[i][j]);
                    }
                }
                acc
            })
        };
        let ids = CoordinateChange::identity(t).images;
        let mut psi = apply_linv(ids.clone());
        for _ in 0..(t.d + t.e + 2) {
            let n_at: [Series; 3] = std::array::from_fn(|i| {
                nonlinear[i].compose([&psi[0], &psi[1], &psi[2]])
            });
            let next = apply_linv(std::array::from_fn(|i| &ids[i] - &n_at[i]));
            if next == psi {
                break;
            }
            psi = next;
        }
        Ok(CoordinateChange { images: psi })
    }

    /// Whether `self` and `other` agree on all terms of degree `< d` in the
    /// space variables.
    pub fn agrees_below(&self, other: &CoordinateChange, d: u32) -> bool {
        (0..3).all(|i| (&self.images[i] - &other.images[i]).jet(d.saturating_sub(1)).is_zero())
    }
}

fn unit(j: usize) -> Monomial {
    let mut m = Monomial::ONE;
    m.0[j] = 1;
    m
}
