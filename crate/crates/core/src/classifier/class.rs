use num_traits::{Signed, Zero};
use serde::Serialize;

use super::{quadform_class, v_subtype, QuadClass, VSubtype};
use crate::error::{Error, Result};
use crate::jet::Trunc;
use crate::json::rational_str;
use crate::linalg::det3;
use crate::normal_form::planar::refine_subtype;
use crate::normal_form::{a_invariants, n_normal_form, reduce_to_fg, v_reduce, NFamilyNormalForm};
use crate::poisson::{LieAlgebra1Jet, PoissonFamily};
use crate::Rational;

/// Class decided by the 1-jet alone.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum CoarseClass {
    V,
    #[serde(rename = "so3")]
    So3,
    #[serde(rename = "sl2")]
    Sl2,
    Aplus,
    Aminus,
    N,
    OutsideTaxonomy,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KappaInvariants {
    #[serde(with = "rational_str")]
    pub kappa1: Rational,
    #[serde(with = "rational_str")]
    pub kappa2: Rational,
}

impl KappaInvariants {
    pub fn new(lambda0: &Rational, mu1: &Rational) -> Self {
        let kappa1 = lambda0 * mu1;
        let kappa2 = lambda0 * lambda0 - Rational::from_integer(8.into()) * &kappa1;
        KappaInvariants { kappa1, kappa2 }
    }
}

/// `κ₁ = λ₀(0) μ₁(0)` and `κ₂ = λ₀(0)² − 8κ₁`, rescaled to `r = x² ± y²`.
///
/// Panics if `μ₁(0)` is undetermined, which [`n_normal_form`] rules out.
pub fn kappas(nf: &NFamilyNormalForm) -> KappaInvariants {
    let mu1 = nf.mu1().expect("μ₁(0) is determined for a reduced N family");
    let k = KappaInvariants::new(&nf.lambda0(), &mu1);
    let s = nf.w.abs();
    KappaInvariants { kappa1: &k.kappa1 * &s, kappa2: &k.kappa2 * &s }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class")]
pub enum SingularityClass {
    V {
        #[serde(flatten)]
        subtype: VSubtype,
    },
    #[serde(rename = "so3")]
    So3,
    #[serde(rename = "sl2")]
    Sl2,
    /// `m` and `δ` are `None` when no finite `m` shows up below degree `D`.
    Aplus { m: Option<u32>, delta: Option<i8> },
    Aminus { m: Option<u32>, delta: Option<i8> },
    Nplus {
        #[serde(flatten)]
        kappa: Option<KappaInvariants>,
    },
    Nminus {
        #[serde(flatten)]
        kappa: Option<KappaInvariants>,
    },
    #[serde(rename = "N_undetermined")]
    NUndetermined,
    OutsideTaxonomy,
}

impl SingularityClass {
    pub fn coarse(&self) -> CoarseClass {
        match self {
            SingularityClass::V { .. } => CoarseClass::V,
            SingularityClass::So3 => CoarseClass::So3,
            SingularityClass::Sl2 => CoarseClass::Sl2,
            SingularityClass::Aplus { .. } => CoarseClass::Aplus,
            SingularityClass::Aminus { .. } => CoarseClass::Aminus,
            SingularityClass::Nplus { .. } | SingularityClass::Nminus { .. } | SingularityClass::NUndetermined => {
                CoarseClass::N
            }
            SingularityClass::OutsideTaxonomy => CoarseClass::OutsideTaxonomy,
        }
    }

    /// Tag plus discrete detail; continuous moduli only as "present".
    pub fn discrete_key(&self) -> String {
        let sign = |q: &Rational| if q.is_positive() { "+" } else if q.is_negative() { "-" } else { "0" };
        match self {
            SingularityClass::V { subtype } => format!("V/{}", subtype.discrete_key()),
            SingularityClass::Aplus { m, delta } => format!("Aplus/{m:?}/{delta:?}"),
            SingularityClass::Aminus { m, delta } => format!("Aminus/{m:?}/{delta:?}"),
            SingularityClass::Nplus { kappa } | SingularityClass::Nminus { kappa } => {
                let tag = if matches!(self, SingularityClass::Nplus { .. }) { "Nplus" } else { "Nminus" };
                match kappa {
                    Some(k) => format!("{tag}/{}{}", sign(&k.kappa1), sign(&k.kappa2)),
                    None => format!("{tag}/-"),
                }
            }
            other => format!("{:?}", other.coarse()),
        }
    }
}

/// Coarse class from the linearization at a singular point.
pub fn classify_1jet(l: &LieAlgebra1Jet) -> CoarseClass {
    if l.is_zero() {
        return CoarseClass::OutsideTaxonomy;
    }
    if l.trace_form().iter().any(|v| !v.is_zero()) {
        return CoarseClass::V;
    }
    match l.fact_b() {
        Some(b) => {
            let det = b.det();
            if det.is_positive() {
                CoarseClass::Aplus
            } else if det.is_negative() {
                CoarseClass::Aminus
            } else {
                CoarseClass::N
            }
        }
        None => {
            // Semisimple: so(3) iff the Killing form is definite.
            let k = l.killing();
            let m1 = k[0][0].clone();
            let m2 = &k[0][0] * &k[1][1] - &k[0][1] * &k[1][0];
            let m3 = det3(&k);
            let negative_definite = m1.is_negative() && m2.is_positive() && m3.is_negative();
            let positive_definite = m1.is_positive() && m2.is_positive() && m3.is_positive();
            if negative_definite || positive_definite {
                CoarseClass::So3
            } else {
                CoarseClass::Sl2
            }
        }
    }
}

/// Singularity class of `P₀` at the origin from its jet of degree `D`.
pub fn classify(p: &PoissonFamily, d: u32) -> Result<SingularityClass> {
    let t = Trunc::new(d.min(p.trunc().d), 0);
    let p0 = p.at_eps0().map(|s| s.with_trunc(t));
    let at0 = |i: usize, j: usize| p0.bracket(i, j).constant_term();
    if [(0, 1), (1, 2), (2, 0)].iter().any(|&(i, j)| !at0(i, j).is_zero()) {
        return Err(Error::NotSingular);
    }
    let jet = p0.lie_1jet_origin()?;
    Ok(match classify_1jet(&jet) {
        CoarseClass::OutsideTaxonomy => SingularityClass::OutsideTaxonomy,
        CoarseClass::So3 => SingularityClass::So3,
        CoarseClass::Sl2 => SingularityClass::Sl2,
        CoarseClass::V => {
            let (pl, _) = v_reduce(&p0)?;
            let base = v_subtype(&pl.eigen)?;
            SingularityClass::V { subtype: refine_subtype(&pl, base)? }
        }
        coarse @ (CoarseClass::Aplus | CoarseClass::Aminus) => {
            let nf = reduce_to_fg(&p0, t.d)?;
            let (m, delta) = match a_invariants(&nf) {
                Ok((_, m, delta)) => (Some(m), Some(delta)),
                Err(Error::NotIsolated { .. }) => (None, None),
                Err(e) => return Err(e),
            };
            if coarse == CoarseClass::Aplus {
                SingularityClass::Aplus { m, delta }
            } else {
                SingularityClass::Aminus { m, delta }
            }
        }
        CoarseClass::N => {
            let nf = reduce_to_fg(&p0, t.d)?;
            let q = quadform_class(&nf.g0().homogeneous(2))?;
            let plus = match q {
                QuadClass::PosDef | QuadClass::NegDef => true,
                QuadClass::Indefinite => false,
                _ => return Ok(SingularityClass::NUndetermined),
            };
            let kappa = match n_normal_form(nf) {
                Ok(n) => Some(kappas(&n)),
                Err(Error::InsufficientDegree(_)) => None,
                Err(e) => return Err(e),
            };
            if plus {
                SingularityClass::Nplus { kappa }
            } else {
                SingularityClass::Nminus { kappa }
            }
        }
    })
}
