//! Poisson structures on R³ as bivector jets.
//!
//! A family is stored through its three brackets `{x,y}`, `{y,z}`, `{z,x}`.
//! With the volume form `dx∧dy∧dz` it corresponds to the 1-form
//! `ω = {y,z} dx + {z,x} dy + {x,y} dz`, and the Jacobi identity is the
//! integrability condition `ω∧dω = 0`.

pub mod generators;
mod lie;

pub use lie::{FactB, LieAlgebra1Jet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{CoordinateChange, DiffKind, DiffObject, Series, Trunc, Var};
use crate::json::{series_from_records, series_to_records, TermRecord};
use crate::Rational;

/// Keeps the terms of space degree `< k`, i.e. reduces modulo the ideal of
/// monomials of degree `k`.
pub fn mod_degree(s: &Series, k: u32) -> Series {
    if k == 0 {
        return Series::zero(s.trunc());
    }
    s.jet(k - 1)
}

/// Keeps the terms with space degree plus `ε`-order `< k`.
///
/// When a family has `ε`-dependent constant terms, a coefficient of degree
/// `j` at order `ε^l` depends on input terms up to degree `j + l`, so
/// certificates on such families use this weighted filtration.
pub fn mod_weighted(s: &Series, k: u32) -> Series {
    s.filter(|m| m.degree() + m.eps() < k)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonFamily {
    bxy: Series,
    byz: Series,
    bzx: Series,
    checked: bool,
}

impl PoissonFamily {
    /// Raw constructor; the result is flagged as unchecked.
    pub fn unchecked(bxy: Series, byz: Series, bzx: Series) -> Result<Self> {
        let t = bxy.trunc();
        for s in [&byz, &bzx] {
            if s.trunc() != t {
                return Err(crate::JetError::TruncMismatch { left: t, right: s.trunc() }.into());
            }
        }
        Ok(PoissonFamily { bxy, byz, bzx, checked: false })
    }

    /// Validating constructor: the Jacobi residual must vanish modulo
    /// degree `D − 1`.
    pub fn new(bxy: Series, byz: Series, bzx: Series) -> Result<Self> {
        let mut p = PoissonFamily::unchecked(bxy, byz, bzx)?;
        p.validate()?;
        Ok(p)
    }

    /// Marks the family as checked after verifying the Jacobi identity.
    pub fn validate(&mut self) -> Result<()> {
        let r = self.trusted_residual();
        if !r.is_zero() {
            return Err(Error::NotPoisson { residual: r.to_string() });
        }
        self.checked = true;
        Ok(())
    }

    pub fn is_checked(&self) -> bool {
        self.checked
    }

    pub fn trunc(&self) -> Trunc {
        self.bxy.trunc()
    }

    pub fn bxy(&self) -> &Series {
        &self.bxy
    }
    pub fn byz(&self) -> &Series {
        &self.byz
    }
    pub fn bzx(&self) -> &Series {
        &self.bzx
    }

    /// `(byz, bzx, bxy)`, the components of `ω` along `dx, dy, dz`.
    pub fn omega_components(&self) -> [&Series; 3] {
        [&self.byz, &self.bzx, &self.bxy]
    }

    /// `{x_i, x_j}` for coordinate indices `0..3`.
    pub fn bracket(&self, i: usize, j: usize) -> Series {
        match (i, j) {
            (0, 1) => self.bxy.clone(),
            (1, 0) => -&self.bxy,
            (1, 2) => self.byz.clone(),
            (2, 1) => -&self.byz,
            (2, 0) => self.bzx.clone(),
            (0, 2) => -&self.bzx,
            _ => Series::zero(self.trunc()),
        }
    }

    /// `{f, g} = Σ_{i<j} P^{ij} (∂_i f ∂_j g − ∂_j f ∂_i g)`.
    pub fn poisson_bracket(&self, f: &Series, g: &Series) -> Series {
        let df = [f.partial(Var::X), f.partial(Var::Y), f.partial(Var::Z)];
        let dg = [g.partial(Var::X), g.partial(Var::Y), g.partial(Var::Z)];
        let minor = |i: usize, j: usize| &(&df[i] * &dg[j]) - &(&df[j] * &dg[i]);
        &(&(&self.bxy * &minor(0, 1)) + &(&self.byz * &minor(1, 2))) + &(&self.bzx * &minor(2, 0))
    }

    pub fn at_eps0(&self) -> PoissonFamily {
        PoissonFamily {
            bxy: self.bxy.at_eps0(),
            byz: self.byz.at_eps0(),
            bzx: self.bzx.at_eps0(),
            checked: self.checked,
        }
    }

    pub fn map(&self, f: impl Fn(&Series) -> Series) -> PoissonFamily {
        PoissonFamily { bxy: f(&self.bxy), byz: f(&self.byz), bzx: f(&self.bzx), checked: self.checked }
    }

    pub fn is_zero(&self) -> bool {
        self.bxy.is_zero() && self.byz.is_zero() && self.bzx.is_zero()
    }

    /// Coefficient of `ω∧dω` on `dx∧dy∧dz`; equals `v · curl v` for
    /// `v = (byz, bzx, bxy)`.
    pub fn jacobi_residual(&self) -> Series {
        let w = self.to_pfaffian();
        let dw = w.d().expect("1-form");
        w.wedge(&dw).expect("1-form wedge 2-form").comp(0).clone()
    }

    /// The part of the residual that the truncation certifies.
    pub fn trusted_residual(&self) -> Series {
        mod_degree(&self.jacobi_residual(), self.trunc().d.saturating_sub(1))
    }

    /// Modular vector field for the volume form `dx∧dy∧dz`: the curl of
    /// `(byz, bzx, bxy)`.
    pub fn curl(&self) -> DiffObject {
        let dw = self.to_pfaffian().d().expect("1-form");
        DiffObject::triple(DiffKind::Vector, [dw.comp(0).clone(), dw.comp(1).clone(), dw.comp(2).clone()])
    }

    /// Bivector `φ_* P` where the new coordinates are the images of `ch`.
    pub fn pushforward(&self, ch: &CoordinateChange) -> Result<PoissonFamily> {
        if ch.trunc() != self.trunc() {
            return Err(crate::JetError::TruncMismatch { left: self.trunc(), right: ch.trunc() }.into());
        }
        let inv = ch.inverse()?;
        let im = ch.images();
        let new = |a: usize, b: usize| inv.substitute(&self.poisson_bracket(&im[a], &im[b]));
        Ok(PoissonFamily { bxy: new(0, 1), byz: new(1, 2), bzx: new(2, 0), checked: self.checked })
    }

    pub fn to_pfaffian(&self) -> DiffObject {
        DiffObject::triple(DiffKind::OneForm, [self.byz.clone(), self.bzx.clone(), self.bxy.clone()])
    }

    /// Inverse of [`PoissonFamily::to_pfaffian`]; rejects non-integrable forms.
    pub fn from_pfaffian(w: &DiffObject) -> Result<PoissonFamily> {
        if w.kind() != DiffKind::OneForm {
            return Err(crate::JetError::WrongKind { expected: "1-form", got: w.kind().name() }.into());
        }
        let mut p = PoissonFamily::unchecked(w.comp(2).clone(), w.comp(0).clone(), w.comp(1).clone())?;
        p.validate().map_err(|e| match e {
            Error::NotPoisson { residual } => Error::NotIntegrable { residual },
            other => other,
        })?;
        Ok(p)
    }

    /// Structure `{x,y} = z`, `{y,z} = ∂f/∂x + z ∂g/∂x`,
    /// `{z,x} = ∂f/∂y + z ∂g/∂y` for series `f, g` in `(x, y, ε)`.
    pub fn from_fg(f: &Series, g: &Series) -> Result<PoissonFamily> {
        let t = f.trunc();
        for s in [f, g] {
            if s.depends_on(Var::Z) {
                return Err(Error::Input("f and g must not depend on z".into()));
            }
        }
        if !f.at_origin().is_zero() || !g.at_origin().is_zero() {
            return Err(Error::Input("f and g must vanish at the origin".into()));
        }
        let w = fg_residual(f, g);
        if !w.is_zero() {
            return Err(Error::Dependency { residual: w.to_string() });
        }
        let z = Series::var(t, Var::Z);
        let p = PoissonFamily {
            bxy: z.clone(),
            byz: &f.partial(Var::X) + &(&z * &g.partial(Var::X)),
            bzx: &f.partial(Var::Y) + &(&z * &g.partial(Var::Y)),
            checked: true,
        };
        Ok(p)
    }

    /// `P = ∂y ∧ (α ∂x + β ∂z)` for `α, β` in `(x, z, ε)`, giving
    /// `{x,y} = −α`, `{y,z} = β`, `{z,x} = 0`.
    pub fn from_planar(alpha: &Series, beta: &Series) -> Result<PoissonFamily> {
        for s in [alpha, beta] {
            if s.depends_on(Var::Y) {
                return Err(Error::Input("planar field must not depend on y".into()));
            }
        }
        let t = alpha.trunc();
        Ok(PoissonFamily { bxy: -alpha, byz: beta.clone(), bzx: Series::zero(t), checked: true })
    }

    /// `{x,y} = z`, `{y,z} = x`, `{z,x} = ±y`.
    pub fn linear_model(trunc: Trunc, plus: bool) -> PoissonFamily {
        let y = Series::var(trunc, Var::Y);
        PoissonFamily {
            bxy: Series::var(trunc, Var::Z),
            byz: Series::var(trunc, Var::X),
            bzx: if plus { y } else { -y },
            checked: true,
        }
    }

    /// `{x,y} = 0`, `{y,z} = y`, `{z,x} = −x`.
    pub fn rotational_v_model(trunc: Trunc) -> PoissonFamily {
        PoissonFamily {
            bxy: Series::zero(trunc),
            byz: Series::var(trunc, Var::Y),
            bzx: -Series::var(trunc, Var::X),
            checked: true,
        }
    }

    /// Linear part at `p`, `ε = 0`.
    pub fn lie_1jet(&self, p: [&Rational; 3]) -> Result<LieAlgebra1Jet> {
        LieAlgebra1Jet::of_family(self, p)
    }

    /// Lie 1-jet at the origin.
    pub fn lie_1jet_origin(&self) -> Result<LieAlgebra1Jet> {
        let z = Rational::from_integer(0.into());
        self.lie_1jet([&z, &z, &z])
    }

    pub fn to_doc(&self) -> FamilyDoc {
        FamilyDoc {
            trunc: self.trunc(),
            brackets: BracketsDoc {
                xy: series_to_records(&self.bxy),
                yz: series_to_records(&self.byz),
                zx: series_to_records(&self.bzx),
            },
        }
    }

    /// Parses without the Jacobi check; call [`PoissonFamily::validate`]
    /// when needed.
    pub fn from_doc(doc: &FamilyDoc) -> Result<PoissonFamily> {
        let t = doc.trunc;
        PoissonFamily::unchecked(
            series_from_records(t, &doc.brackets.xy, "brackets.xy")?,
            series_from_records(t, &doc.brackets.yz, "brackets.yz")?,
            series_from_records(t, &doc.brackets.zx, "brackets.zx")?,
        )
    }
}

/// `df∧dg` coefficient on `dx∧dy`, reduced modulo degree `D`.
pub fn fg_residual(f: &Series, g: &Series) -> Series {
    let w = &(&f.partial(Var::X) * &g.partial(Var::Y)) - &(&f.partial(Var::Y) * &g.partial(Var::X));
    mod_degree(&w, f.trunc().d)
}

/// Schouten bracket `[X, P]` (the Lie derivative of `P` along `X`) in the
/// basis `∂y∧∂z, ∂z∧∂x, ∂x∧∂y`, reduced modulo degree `D − 1`.
pub fn lie_symmetry_residual(x: &DiffObject, p: &PoissonFamily) -> Result<DiffObject> {
    if x.kind() != DiffKind::Vector {
        return Err(crate::JetError::WrongKind { expected: "vector", got: x.kind().name() }.into());
    }
    let vars = [Var::X, Var::Y, Var::Z];
    let dx: Vec<[Series; 3]> = (0..3)
        .map(|i| std::array::from_fn(|k| x.comp(i).partial(vars[k])))
        .collect();
    let comp = |i: usize, j: usize| {
        let pij = p.bracket(i, j);
        let mut acc = Series::zero(p.trunc());
        for k in 0..3 {
            acc = &acc + &(x.comp(k) * &pij.partial(vars[k]));
            acc = &acc - &(&p.bracket(k, j) * &dx[i][k]);
            acc = &acc - &(&p.bracket(i, k) * &dx[j][k]);
        }
        mod_degree(&acc, p.trunc().d.saturating_sub(1))
    };
    Ok(DiffObject::triple(DiffKind::Bivector, [comp(1, 2), comp(2, 0), comp(0, 1)]))
}

/// Direct Jacobiator `{x,{y,z}} + {y,{z,x}} + {z,{x,y}}`.
pub fn jacobiator(p: &PoissonFamily) -> Series {
    let x = Series::var(p.trunc(), Var::X);
    let y = Series::var(p.trunc(), Var::Y);
    let z = Series::var(p.trunc(), Var::Z);
    &(&p.poisson_bracket(&x, p.byz()) + &p.poisson_bracket(&y, p.bzx())) + &p.poisson_bracket(&z, p.bxy())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketsDoc {
    pub xy: Vec<TermRecord>,
    pub yz: Vec<TermRecord>,
    pub zx: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub trunc: Trunc,
    pub brackets: BracketsDoc,
}

#[cfg(test)]
mod tests;
