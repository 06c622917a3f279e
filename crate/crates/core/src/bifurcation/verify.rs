use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use super::points::{cluster_curves, find_singular_points, SearchSettings, SingularPointRecord};
use super::{BifurcationReport, PointClass, SidePrediction};
use crate::poisson::PoissonFamily;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifySettings {
    pub search: SearchSettings,
    pub eps_grid: Vec<f64>,
    /// Grid values with `|ε|` below the floor are observed but not judged:
    /// the born points and curves are closer than the seed grid resolves.
    pub resolution_floor: f64,
    /// Curve samples closer than `link_factor · seed spacing` are joined.
    pub link_factor: f64,
}

impl Default for VerifySettings {
    fn default() -> Self {
        VerifySettings {
            search: SearchSettings::default(),
            eps_grid: eps_grid(-0.1, 0.1, 21),
            resolution_floor: 5e-3,
            link_factor: 1.5,
        }
    }
}

/// `n` evenly spaced values from `a` to `b`.
pub fn eps_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CurveObservation {
    pub samples: usize,
    pub classes: BTreeMap<PointClass, usize>,
    pub centroid: [f64; 3],
    /// Mean and spread of the distance to the `z`-axis.
    pub mean_radius: f64,
    pub radius_spread: f64,
}

impl CurveObservation {
    fn from_samples(points: &[&SingularPointRecord]) -> Self {
        let n = points.len() as f64;
        let mut classes = BTreeMap::new();
        let mut centroid = [0.0; 3];
        for p in points {
            *classes.entry(p.class).or_insert(0) += 1;
            for (c, v) in centroid.iter_mut().zip(p.point) {
                *c += v / n;
            }
        }
        let radii: Vec<f64> = points.iter().map(|p| p.point[0].hypot(p.point[1])).collect();
        let mean_radius = radii.iter().sum::<f64>() / n;
        let lo = radii.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = radii.iter().copied().fold(0.0, f64::max);
        CurveObservation { samples: points.len(), classes, centroid, mean_radius, radius_spread: hi - lo }
    }

    /// The class shared by every sample, if there is one.
    pub fn uniform_class(&self) -> Option<PointClass> {
        (self.classes.len() == 1).then(|| *self.classes.keys().next().expect("one entry"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EpsObservation {
    pub eps: f64,
    pub points: Vec<SingularPointRecord>,
    pub isolated: Vec<PointClass>,
    pub curves: Vec<CurveObservation>,
    /// `None` below the resolution floor.
    pub matched: Option<bool>,
    pub mismatches: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub prediction: BifurcationReport,
    pub settings: VerifySettings,
    pub observations: Vec<EpsObservation>,
    pub verdict: bool,
}

fn compare(pred: &SidePrediction, isolated: &[PointClass], curves: &[CurveObservation], other: usize) -> Vec<String> {
    let mut out = Vec::new();
    if isolated != pred.points.as_slice() {
        out.push(format!("isolated points {isolated:?}, predicted {:?}", pred.points));
    }
    let mut seen: Vec<Option<PointClass>> = curves.iter().map(CurveObservation::uniform_class).collect();
    seen.sort();
    let mut want: Vec<Option<PointClass>> = pred.curves.iter().map(|c| Some(c.class)).collect();
    want.sort();
    if seen != want {
        out.push(format!("curves {seen:?}, predicted {want:?}"));
    }
    if other > 0 {
        out.push(format!("{other} samples of higher-dimensional singular sets"));
    }
    out
}

/// Observes one `ε` value and judges it against the prediction.
pub fn observe(p: &PoissonFamily, eps: f64, pred: &BifurcationReport, s: &VerifySettings) -> EpsObservation {
    let points = find_singular_points(p, eps, &s.search);
    let mut isolated: Vec<PointClass> = points.iter().filter(|r| r.is_isolated()).map(|r| r.class).collect();
    isolated.sort();
    let link = s.link_factor * s.search.seed_spacing();
    let curves: Vec<CurveObservation> = cluster_curves(&points, link)
        .iter()
        .map(|g| CurveObservation::from_samples(&g.iter().map(|&i| &points[i]).collect::<Vec<_>>()))
        .collect();
    let other = points.iter().filter(|r| r.dimension >= 2).count();
    let (matched, mismatches) = if eps.abs() < s.resolution_floor {
        (None, vec![])
    } else {
        let m = compare(pred.side(eps), &isolated, &curves, other);
        (Some(m.is_empty()), m)
    };
    EpsObservation { eps, points, isolated, curves, matched, mismatches }
}

/// Runs the search over the grid (in parallel, merged in grid order) and
/// compares with `prediction`.
pub fn verify(p: &PoissonFamily, prediction: BifurcationReport, s: &VerifySettings) -> VerificationReport {
    let observations: Vec<EpsObservation> = s.eps_grid.par_iter().map(|&e| observe(p, e, &prediction, s)).collect();
    let verdict = observations.iter().all(|o| o.matched != Some(false));
    VerificationReport { prediction, settings: s.clone(), observations, verdict }
}
