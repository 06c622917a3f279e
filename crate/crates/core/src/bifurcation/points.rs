use nalgebra::Vector3;
use rayon::prelude::*;
use serde::Serialize;

use super::numeric::{classify_linearization, local_dimension, newton, singular_values, NumericFamily, PointClass};
use crate::poisson::PoissonFamily;

/// Numerical search settings.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchSettings {
    /// Half-width of the cube `[−b, b]³`.
    pub half_width: f64,
    pub tol: f64,
    pub seeds_per_axis: usize,
    /// Relative sign margin of the linearization tests.
    pub margin: f64,
    /// Relative singular-value threshold separating rank 3 from rank 2.
    pub rank_tol: f64,
}

impl Default for SearchSettings {
    fn default() -> Self {
        SearchSettings { half_width: 1.0, tol: 1e-10, seeds_per_axis: 21, margin: 1e-6, rank_tol: 1e-6 }
    }
}

impl SearchSettings {
    pub fn seed_spacing(&self) -> f64 {
        2.0 * self.half_width / (self.seeds_per_axis.max(2) - 1) as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularPointRecord {
    pub eps: f64,
    pub point: [f64; 3],
    pub residual: f64,
    /// Singular values of the bracket Jacobian, decreasing.
    pub singular_values: [f64; 3],
    /// Estimated dimension of the singular set through the point.
    pub dimension: u8,
    pub class: PointClass,
}

impl SingularPointRecord {
    pub fn is_isolated(&self) -> bool {
        self.dimension == 0
    }

    fn vec(&self) -> Vector3<f64> {
        Vector3::from(self.point)
    }
}

fn seeds(s: &SearchSettings) -> Vec<Vector3<f64>> {
    let n = s.seeds_per_axis.max(1);
    let coord = |i: usize| if n == 1 { 0.0 } else { -s.half_width + i as f64 * s.seed_spacing() };
    let mut out = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                out.push(Vector3::new(coord(i), coord(j), coord(k)));
            }
        }
    }
    out
}

/// Zeros of the brackets in the box at a fixed `ε`, deduplicated within
/// `10·tol` and sorted lexicographically.
pub fn find_singular_points(p: &PoissonFamily, eps: f64, s: &SearchSettings) -> Vec<SingularPointRecord> {
    let fam = NumericFamily::new(p, eps);
    let limits: Vec<Vector3<f64>> =
        seeds(s).par_iter().filter_map(|seed| newton(&fam, *seed, s.half_width, s.tol)).collect();
    let mut found: Vec<Vector3<f64>> = Vec::new();
    for q in limits {
        if q.amax() > s.half_width || found.iter().any(|f| (f - q).amax() <= 10.0 * s.tol) {
            continue;
        }
        found.push(q);
    }
    trace_curves(&fam, &mut found, s);
    found.sort_by(|a, b| a.iter().zip(b.iter()).map(|(u, v)| u.total_cmp(v)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal));
    found
        .into_iter()
        .map(|q| {
            let j = fam.jacobian(&q);
            let sv = singular_values(&j);
            SingularPointRecord {
                eps,
                point: [q.x, q.y, q.z],
                residual: fam.residual(&q).amax(),
                singular_values: sv,
                dimension: local_dimension(&sv, s.rank_tol),
                class: classify_linearization(&j, s.margin),
            }
        })
        .collect()
}

/// Unit tangent of the singular curve: the kernel direction of the Jacobian.
fn tangent(fam: &NumericFamily, q: &Vector3<f64>) -> Vector3<f64> {
    let svd = fam.jacobian(q).svd(false, true);
    let v_t = svd.v_t.expect("requested");
    let k = svd.singular_values.imin();
    v_t.row(k).transpose()
}

fn on_curve(fam: &NumericFamily, q: &Vector3<f64>, s: &SearchSettings) -> bool {
    local_dimension(&singular_values(&fam.jacobian(q)), s.rank_tol) == 1
}

/// Marches from every curve sample in both tangent directions with step
/// half the seed spacing, correcting with Newton, until it leaves the box
/// or reaches a known sample. Seeds alone leave gaps wherever a curve runs
/// obliquely to the grid.
fn trace_curves(fam: &NumericFamily, found: &mut Vec<Vector3<f64>>, s: &SearchSettings) {
    let h = 0.5 * s.seed_spacing();
    let max_steps = (4.0 * s.half_width / h).ceil() as usize + 1;
    let starts: Vec<Vector3<f64>> = found.iter().copied().filter(|q| on_curve(fam, q, s)).collect();
    for start in starts {
        for sign in [1.0, -1.0] {
            let mut q = start;
            let mut dir = tangent(fam, &q) * sign;
            for _ in 0..max_steps {
                let Some(next) = newton(fam, q + dir * h, s.half_width, s.tol) else { break };
                let step = (next - q).norm();
                if next.amax() > s.half_width || !(0.25 * h..=2.0 * h).contains(&step) || !on_curve(fam, &next, s) {
                    break;
                }
                if found.iter().any(|f| (f - next).norm() < 0.5 * h) {
                    break;
                }
                found.push(next);
                let t = tangent(fam, &next);
                dir = if t.dot(&dir) >= 0.0 { t } else { -t };
                q = next;
            }
        }
    }
}

/// Connected pieces of the curve samples: single linkage with threshold
/// `link`.
pub fn cluster_curves(points: &[SingularPointRecord], link: f64) -> Vec<Vec<usize>> {
    let idx: Vec<usize> = (0..points.len()).filter(|&i| points[i].dimension == 1).collect();
    let mut parent: Vec<usize> = (0..idx.len()).collect();
    fn root(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for a in 0..idx.len() {
        for b in (a + 1)..idx.len() {
            if (points[idx[a]].vec() - points[idx[b]].vec()).norm() <= link {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                parent[ra.max(rb)] = ra.min(rb);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for a in 0..idx.len() {
        let r = root(&mut parent, a);
        groups.entry(r).or_default().push(idx[a]);
    }
    groups.into_values().collect()
}
