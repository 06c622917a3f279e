//! Bifurcation scenarios of 1-parameter families: symbolic prediction from
//! the class of `P₀` and numerical verification over an `ε`-grid.

mod numeric;
mod points;
mod verify;

pub use numeric::{classify_linearization, NumericFamily, PointClass};
pub use points::{cluster_curves, find_singular_points, SearchSettings, SingularPointRecord};
pub use verify::{eps_grid, observe, verify, CurveObservation, EpsObservation, VerificationReport, VerifySettings};

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::classifier::{classify, kappas, KappaInvariants, SingularityClass, VKind};
use crate::json::opt_rational_str;
use crate::normal_form::planar::saddle_node_unfolding;
use crate::normal_form::{a_normal_form, n_reduce, v_reduce};
use crate::poisson::PoissonFamily;
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Scenario {
    #[serde(rename = "saddle_node_V")]
    SaddleNodeV,
    #[serde(rename = "A_split")]
    ASplit,
    #[serde(rename = "N_a")]
    NA,
    #[serde(rename = "N_b")]
    NB,
    #[serde(rename = "N_c")]
    NC,
    #[serde(rename = "none_irremovable")]
    NoneIrremovable,
    #[serde(rename = "unknown")]
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveShape {
    /// A curve through the germ persisting for all small `ε`.
    Persistent,
    /// One of the two curves born in a saddle-node.
    Branch,
    Circle,
    /// One branch of the hyperbola pair `C = 0` of an N⁻ family.
    HyperbolaBranch,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurvePrediction {
    pub shape: CurveShape,
    pub class: PointClass,
}

/// Predicted singular set on one side of `ε = 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SidePrediction {
    /// Classes of the isolated points, sorted.
    pub points: Vec<PointClass>,
    pub curves: Vec<CurvePrediction>,
}

impl SidePrediction {
    fn normalized(mut self) -> Self {
        self.points.sort();
        self.curves.sort_by_key(|c| c.class);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GenericityCondition {
    pub name: String,
    #[serde(with = "opt_rational_str")]
    pub value: Option<Rational>,
    pub holds: bool,
}

impl GenericityCondition {
    fn nonzero(name: &str, value: Option<Rational>) -> Self {
        let holds = value.as_ref().is_some_and(|v| !v.is_zero());
        GenericityCondition { name: name.into(), value, holds }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BifurcationReport {
    pub scenario: Scenario,
    pub class: SingularityClass,
    /// Singular set for `ε < 0` and `ε > 0`.
    pub negative: SidePrediction,
    pub positive: SidePrediction,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<KappaInvariants>,
    pub genericity: Vec<GenericityCondition>,
    /// `−μ₀′(0)/μ₁(0)`: the circle or hyperbola is `r = −(μ₀′/μ₁) ε` to
    /// first order, with `r = x² + w y²` in the normal-form coordinates.
    #[serde(with = "opt_rational_str", skip_serializing_if = "Option::is_none")]
    pub radius_sq_coeff: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BifurcationReport {
    pub fn side(&self, eps: f64) -> &SidePrediction {
        if eps < 0.0 {
            &self.negative
        } else {
            &self.positive
        }
    }

    fn unknown(class: SingularityClass, genericity: Vec<GenericityCondition>, note: String) -> Self {
        BifurcationReport {
            scenario: Scenario::Unknown,
            class,
            negative: SidePrediction::default(),
            positive: SidePrediction::default(),
            kappa: None,
            genericity,
            radius_sq_coeff: None,
            note: Some(note),
        }
    }
}

fn sgn(q: &Rational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

fn v_point_class(kind: VKind) -> PointClass {
    match kind {
        VKind::Node => PointClass::VNode,
        VKind::Saddle => PointClass::VSaddle,
        VKind::Focus => PointClass::VFocus,
        VKind::SaddleNode | VKind::SaddleNodeExclusiveOrUndetermined => PointClass::VSaddleNode,
    }
}

/// `(ε < 0 side, ε > 0 side)`, with `sign` the side where `on` applies.
fn split_sides(sign: i32, on: SidePrediction, off: SidePrediction) -> (SidePrediction, SidePrediction) {
    if sign > 0 {
        (off, on)
    } else {
        (on, off)
    }
}

/// Scenario predicted from the class of `P₀` and the unfolding data.
pub fn predict(p: &PoissonFamily, d: u32) -> crate::Result<BifurcationReport> {
    let class = classify(p, d)?;
    let persistent = |c: PointClass| SidePrediction { points: vec![c], curves: vec![] };
    let report = |scenario, class, (negative, positive): (SidePrediction, SidePrediction)| BifurcationReport {
        scenario,
        class,
        negative: SidePrediction::normalized(negative),
        positive: SidePrediction::normalized(positive),
        kappa: None,
        genericity: vec![],
        radius_sq_coeff: None,
        note: None,
    };
    match &class {
        SingularityClass::So3 => {
            Ok(report(Scenario::NoneIrremovable, class.clone(), (persistent(PointClass::So3), persistent(PointClass::So3))))
        }
        SingularityClass::Sl2 => {
            Ok(report(Scenario::NoneIrremovable, class.clone(), (persistent(PointClass::Sl2), persistent(PointClass::Sl2))))
        }
        SingularityClass::V { subtype } if subtype.kind == VKind::SaddleNode => predict_saddle_node(p, class.clone()),
        SingularityClass::V { subtype } if subtype.kind != VKind::SaddleNodeExclusiveOrUndetermined => {
            let side = SidePrediction {
                points: vec![],
                curves: vec![CurvePrediction { shape: CurveShape::Persistent, class: v_point_class(subtype.kind) }],
            };
            Ok(report(Scenario::NoneIrremovable, class.clone(), (side.clone(), side)))
        }
        SingularityClass::Aplus { m: Some(_), .. } | SingularityClass::Aminus { m: Some(_), .. } => {
            predict_a(p, d, class.clone())
        }
        SingularityClass::Nplus { kappa: Some(_) } | SingularityClass::Nminus { kappa: Some(_) } => {
            predict_n(p, d, class.clone())
        }
        other => Ok(BifurcationReport::unknown(
            other.clone(),
            vec![],
            format!("no scenario for class {}", other.discrete_key()),
        )),
    }
}

fn predict_saddle_node(p: &PoissonFamily, class: SingularityClass) -> crate::Result<BifurcationReport> {
    let (pl, _) = v_reduce(p)?;
    let (c2, beta) = saddle_node_unfolding(&pl)?;
    let genericity = vec![
        GenericityCondition::nonzero("quadratic coefficient of the center-manifold field", Some(c2.clone())),
        GenericityCondition::nonzero("transversality in ε", Some(beta.clone())),
    ];
    if genericity.iter().any(|g| !g.holds) {
        let failing = genericity.iter().find(|g| !g.holds).map(|g| g.name.clone()).unwrap_or_default();
        return Ok(BifurcationReport::unknown(class, genericity, format!("not generic: {failing} vanishes")));
    }
    // Zeros of c₂x² + βε exist where εβc₂ < 0.
    let on = SidePrediction {
        points: vec![],
        curves: vec![
            CurvePrediction { shape: CurveShape::Branch, class: PointClass::VNode },
            CurvePrediction { shape: CurveShape::Branch, class: PointClass::VSaddle },
        ],
    };
    let (negative, positive) = split_sides(-sgn(&beta) * sgn(&c2), on, SidePrediction::default());
    Ok(BifurcationReport {
        scenario: Scenario::SaddleNodeV,
        class,
        negative: negative.normalized(),
        positive: positive.normalized(),
        kappa: None,
        genericity,
        radius_sq_coeff: None,
        note: None,
    })
}

fn predict_a(p: &PoissonFamily, d: u32, class: SingularityClass) -> crate::Result<BifurcationReport> {
    let nf = a_normal_form(p, d)?;
    let h0p = nf.h0_prime();
    let genericity = vec![
        GenericityCondition { name: "m = 2".into(), value: Some(Rational::from_integer(nf.m.into())), holds: nf.is_generic() },
        GenericityCondition::nonzero("h0'(0)", Some(h0p.clone())),
    ];
    if genericity.iter().any(|g| !g.holds) {
        return Ok(BifurcationReport::unknown(class, genericity, "A unfolding is not generic".into()));
    }
    // Points at y² = −h₀ ~ −h₀′ε.
    let on = SidePrediction {
        points: if nf.sign > 0 { vec![PointClass::So3, PointClass::Sl2] } else { vec![PointClass::Sl2, PointClass::Sl2] },
        curves: vec![],
    };
    let (negative, positive) = split_sides(-sgn(&h0p), on, SidePrediction::default());
    Ok(BifurcationReport {
        scenario: Scenario::ASplit,
        class,
        negative: negative.normalized(),
        positive: positive.normalized(),
        kappa: None,
        genericity,
        radius_sq_coeff: None,
        note: None,
    })
}

fn predict_n(p: &PoissonFamily, d: u32, class: SingularityClass) -> crate::Result<BifurcationReport> {
    let nf = n_reduce(p, d)?;
    let kappa = kappas(&nf);
    let mu1 = nf.mu1();
    let mu0p = nf.mu0_prime();
    let lambda0 = nf.lambda0();
    let product = match (&mu0p, &mu1) {
        (Some(a), Some(b)) => Some(a * b),
        _ => None,
    };
    let genericity = vec![
        GenericityCondition::nonzero("mu1(0)", mu1.clone()),
        GenericityCondition::nonzero("mu0'(0) mu1(0)", product.clone()),
    ];
    if genericity.iter().any(|g| !g.holds) {
        let mut r = BifurcationReport::unknown(class, genericity, "N unfolding is not generic".into());
        r.kappa = Some(kappa);
        return Ok(r);
    }
    let (mu0p, mu1) = (mu0p.expect("checked"), mu1.expect("checked"));
    let curve_class = if kappa.kappa1.is_negative() {
        PointClass::VSaddle
    } else if kappa.kappa2.is_negative() {
        PointClass::VFocus
    } else {
        PointClass::VNode
    };
    // μ₀(ε)λ₀ > 0 gives so(3) at the origin (for r positive definite).
    let origin = |side: i32| {
        if nf.sign > 0 && side * sgn(&mu0p) * sgn(&lambda0) > 0 {
            PointClass::So3
        } else {
            PointClass::Sl2
        }
    };
    let circle_side = -sgn(&product.expect("checked"));
    let side = |s: i32| {
        let mut curves = Vec::new();
        if nf.sign < 0 {
            curves = vec![CurvePrediction { shape: CurveShape::HyperbolaBranch, class: curve_class }; 2];
        } else if s == circle_side {
            curves.push(CurvePrediction { shape: CurveShape::Circle, class: curve_class });
        }
        SidePrediction { points: vec![origin(s)], curves }.normalized()
    };
    let scenario = if nf.sign < 0 {
        Scenario::NC
    } else if kappa.kappa1.is_positive() {
        Scenario::NA
    } else {
        Scenario::NB
    };
    Ok(BifurcationReport {
        scenario,
        class,
        negative: side(-1),
        positive: side(1),
        kappa: Some(kappa),
        genericity,
        radius_sq_coeff: Some(-(&mu0p / &mu1)),
        note: None,
    })
}

#[cfg(test)]
mod tests;
