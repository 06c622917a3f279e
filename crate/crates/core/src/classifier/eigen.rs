use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::json::{opt_rational_str, rational_str};
use crate::Rational;

/// Eigenvalues of a planar linear field, kept exactly as the
/// characteristic polynomial `t² − trace·t + det`. Only the class under
/// `(trace, det) ~ (c·trace, c²·det)` is meaningful.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenPair {
    #[serde(with = "rational_str")]
    pub trace: Rational,
    #[serde(with = "rational_str")]
    pub det: Rational,
}

/// Exact square root of a nonnegative rational, if it is rational.
pub(crate) fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

impl EigenPair {
    pub fn from_char_poly(trace: Rational, det: Rational) -> Self {
        EigenPair { trace, det }
    }

    pub fn from_reals(l1: &Rational, l2: &Rational) -> Self {
        EigenPair { trace: l1 + l2, det: l1 * l2 }
    }

    /// The pair `a ± ib`.
    pub fn from_complex(a: &Rational, b: &Rational) -> Self {
        EigenPair { trace: a + a, det: a * a + b * b }
    }

    /// Eigenvalues of `[[m00, m01], [m10, m11]]`.
    pub fn from_matrix(m: &[[Rational; 2]; 2]) -> Self {
        EigenPair { trace: &m[0][0] + &m[1][1], det: &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0] }
    }

    pub fn scaled(&self, c: &Rational) -> Self {
        EigenPair { trace: &self.trace * c, det: &self.det * c * c }
    }

    pub fn discriminant(&self) -> Rational {
        &self.trace * &self.trace - Rational::from_integer(4.into()) * &self.det
    }

    /// Scale-free invariant `det / trace²`; `None` when the trace vanishes.
    pub fn sigma(&self) -> Option<Rational> {
        (!self.trace.is_zero()).then(|| &self.det / (&self.trace * &self.trace))
    }

    /// Both eigenvalues when they are rational, larger one first.
    pub fn rational_eigenvalues(&self) -> Option<(Rational, Rational)> {
        let s = rational_sqrt(&self.discriminant())?;
        let half = Rational::new(1.into(), 2.into());
        Some(((&self.trace + &s) * &half, (&self.trace - &s) * &half))
    }

    pub fn is_same_class(&self, other: &EigenPair) -> bool {
        self.sigma() == other.sigma() && (self.sigma().is_some() || self.det.signum() == other.det.signum())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VKind {
    Node,
    Saddle,
    Focus,
    SaddleNode,
    /// A saddle-node whose restriction to the center manifold vanishes to
    /// the available degree.
    SaddleNodeExclusiveOrUndetermined,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Resonance {
    None,
    /// Node with eigenvalue ratio `n : 1`.
    Node { n: u32 },
    /// Saddle with eigenvalue ratio `−p/q`, `p ≤ q` coprime.
    Saddle { p: u32, q: u32 },
}

/// Normal form selected by the kind and resonance of a V singularity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum VNormalForm {
    /// `{x,z} = 0, {x,y} = z, {z,y} = θx + z`: foci and non-resonant
    /// nodes and saddles.
    Linear {
        #[serde(with = "rational_str")]
        theta: Rational,
    },
    /// `{x,y} = n x + δ z^n, {z,y} = z`.
    ResonantNode { n: u32, delta: Option<u8> },
    /// `{x,y} = −(p/q) x + δ x^{q+1} z^p + δ a x^{2q+1} z^{2p}, {z,y} = z`.
    ResonantSaddle {
        p: u32,
        q: u32,
        delta: Option<u8>,
        #[serde(with = "opt_rational_str", skip_serializing_if = "Option::is_none")]
        a: Option<Rational>,
    },
    /// `{x,y} = δ^{p+1} x^{p+1} + a x^{2p+1}, {z,y} = z`.
    SaddleNode {
        p: Option<u32>,
        delta: Option<i8>,
        #[serde(with = "opt_rational_str", skip_serializing_if = "Option::is_none")]
        a: Option<Rational>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VSubtype {
    pub kind: VKind,
    pub resonance: Resonance,
    pub normal_form: VNormalForm,
}

impl VSubtype {
    /// Discrete data: kind, resonance and the δ / p fields of the normal form.
    pub fn discrete_key(&self) -> String {
        let nf = match &self.normal_form {
            VNormalForm::Linear { .. } => "linear".to_string(),
            VNormalForm::ResonantNode { n, delta } => format!("node{n}:{delta:?}"),
            VNormalForm::ResonantSaddle { p, q, delta, .. } => format!("saddle{p}/{q}:{delta:?}"),
            VNormalForm::SaddleNode { p, delta, .. } => format!("sn{p:?}:{delta:?}"),
        };
        format!("{:?}/{:?}/{nf}", self.kind, self.resonance)
    }
}

fn small_u32(q: &Rational) -> Option<u32> {
    q.is_integer().then(|| q.to_integer().to_u32()).flatten()
}

/// Kind, resonance and normal-form shape of a V singularity from its
/// eigenvalues alone; nonlinear normal-form data is left unset.
pub fn v_subtype(e: &EigenPair) -> Result<VSubtype> {
    if e.trace.is_zero() {
        return Err(Error::NotV("eigenvalue sum is zero".into()));
    }
    let theta = -(&e.det / (&e.trace * &e.trace));
    let linear = VNormalForm::Linear { theta };
    if e.det.is_zero() {
        return Ok(VSubtype {
            kind: VKind::SaddleNode,
            resonance: Resonance::None,
            normal_form: VNormalForm::SaddleNode { p: None, delta: None, a: None },
        });
    }
    if e.discriminant().is_negative() {
        return Ok(VSubtype { kind: VKind::Focus, resonance: Resonance::None, normal_form: linear });
    }
    let kind = if e.det.is_positive() { VKind::Node } else { VKind::Saddle };
    let Some((l1, l2)) = e.rational_eigenvalues() else {
        return Ok(VSubtype { kind, resonance: Resonance::None, normal_form: linear });
    };
    let (big, small) = if l1.abs() >= l2.abs() { (l1, l2) } else { (l2, l1) };
    let ratio = (&small / &big).abs();
    match kind {
        VKind::Node => match small_u32(&ratio.recip()) {
            Some(n) => Ok(VSubtype {
                kind,
                resonance: Resonance::Node { n },
                normal_form: VNormalForm::ResonantNode { n, delta: None },
            }),
            None => Ok(VSubtype { kind, resonance: Resonance::None, normal_form: linear }),
        },
        _ => match (ratio.numer().to_u32(), ratio.denom().to_u32()) {
            (Some(p), Some(q)) => Ok(VSubtype {
                kind,
                resonance: Resonance::Saddle { p, q },
                normal_form: VNormalForm::ResonantSaddle { p, q, delta: None, a: None },
            }),
            _ => Ok(VSubtype { kind, resonance: Resonance::None, normal_form: linear }),
        },
    }
}
