use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use serde::Serialize;

use crate::jet::Var;
use crate::poisson::PoissonFamily;

/// Linearization class of a numerically located singular point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PointClass {
    #[serde(rename = "so3")]
    So3,
    #[serde(rename = "sl2")]
    Sl2,
    #[serde(rename = "V_node")]
    VNode,
    #[serde(rename = "V_saddle")]
    VSaddle,
    #[serde(rename = "V_focus")]
    VFocus,
    #[serde(rename = "V_saddle_node")]
    VSaddleNode,
    #[serde(rename = "unresolved")]
    Unresolved,
}

type Poly = Vec<([u32; 3], f64)>;

/// Floating-point evaluation of `({x,y}, {y,z}, {z,x})` at a fixed `ε`,
/// with exact symbolic derivatives.
#[derive(Clone, Debug)]
pub struct NumericFamily {
    comps: [Poly; 3],
    grads: [[Poly; 3]; 3],
    degree: usize,
}

fn eval(p: &Poly, pw: &[[f64; 3]]) -> f64 {
    p.iter().map(|(e, c)| c * pw[e[0] as usize][0] * pw[e[1] as usize][1] * pw[e[2] as usize][2]).sum()
}

impl NumericFamily {
    pub fn new(p: &PoissonFamily, eps: f64) -> Self {
        let br = [p.bxy(), p.byz(), p.bzx()];
        let comps = br.map(|s| s.to_f64_terms(eps));
        let grads = br.map(|s| Var::SPACE.map(|v| s.partial(v).to_f64_terms(eps)));
        NumericFamily { comps, grads, degree: p.trunc().d as usize }
    }

    fn powers(&self, q: &Vector3<f64>) -> Vec<[f64; 3]> {
        let mut pw = vec![[1.0; 3]; self.degree + 1];
        for k in 1..=self.degree {
            for i in 0..3 {
                pw[k][i] = pw[k - 1][i] * q[i];
            }
        }
        pw
    }

    pub fn residual(&self, q: &Vector3<f64>) -> Vector3<f64> {
        let pw = self.powers(q);
        Vector3::from_fn(|i, _| eval(&self.comps[i], &pw))
    }

    /// Rows: brackets `xy, yz, zx`; columns: `∂x, ∂y, ∂z`.
    pub fn jacobian(&self, q: &Vector3<f64>) -> Matrix3<f64> {
        let pw = self.powers(q);
        Matrix3::from_fn(|i, k| eval(&self.grads[i][k], &pw))
    }
}

/// Gauss–Newton with the pseudo-inverse; returns the limit when it is a
/// zero within `tol` inside `2·box`.
pub fn newton(fam: &NumericFamily, seed: Vector3<f64>, half_width: f64, tol: f64) -> Option<Vector3<f64>> {
    let mut q = seed;
    for _ in 0..80 {
        let f = fam.residual(&q);
        let j = fam.jacobian(&q);
        let svd = j.svd(true, true);
        let s1 = svd.singular_values.max();
        if s1 == 0.0 {
            return (f.amax() <= tol).then_some(q);
        }
        let step = svd.pseudo_inverse(1e-12 * s1).ok()? * f;
        q -= step;
        if !q.iter().all(|v| v.is_finite()) || q.amax() > 2.0 * half_width {
            return None;
        }
        if step.amax() <= tol * 1e-2 {
            break;
        }
    }
    (fam.residual(&q).amax() <= tol).then_some(q)
}

/// Singular values of the bracket Jacobian in decreasing order.
pub fn singular_values(j: &Matrix3<f64>) -> [f64; 3] {
    let mut s: Vec<f64> = j.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    [s[0], s[1], s[2]]
}

/// Dimension of the singular set near the point from the Jacobian rank.
pub fn local_dimension(s: &[f64; 3], rank_tol: f64) -> u8 {
    if s[0] <= f64::MIN_POSITIVE {
        return 3;
    }
    s.iter().filter(|v| **v < rank_tol * s[0]).count() as u8
}

fn structure_constants(j: &Matrix3<f64>) -> [[Vector3<f64>; 3]; 3] {
    // c[i][j] = Σ_k ∂_k π_ij e_k.
    let row = |r: usize| Vector3::new(j[(r, 0)], j[(r, 1)], j[(r, 2)]);
    let z = Vector3::zeros();
    let (xy, yz, zx) = (row(0), row(1), row(2));
    [[z, xy, -zx], [-xy, z, yz], [zx, -yz, z]]
}

fn bracket(c: &[[Vector3<f64>; 3]; 3], u: &Vector3<f64>, v: &Vector3<f64>) -> Vector3<f64> {
    let mut out = Vector3::zeros();
    for i in 0..3 {
        for k in 0..3 {
            out += c[i][k] * (u[i] * v[k]);
        }
    }
    out
}

fn ad(c: &[[Vector3<f64>; 3]; 3], i: usize) -> Matrix3<f64> {
    Matrix3::from_columns(&[c[i][0], c[i][1], c[i][2]])
}

/// Class of the linearization at a singular point with relative sign
/// margin `margin`; decisions inside the margin give `Unresolved`.
pub fn classify_linearization(j: &Matrix3<f64>, margin: f64) -> PointClass {
    let scale = j.amax();
    if scale <= f64::MIN_POSITIVE {
        return PointClass::Unresolved;
    }
    let c = structure_constants(j);
    let ads = [ad(&c, 0), ad(&c, 1), ad(&c, 2)];
    let phi = Vector3::from_fn(|i, _| ads[i].trace());
    if phi.amax() > margin * scale {
        // Unimodular kernel ker φ is an abelian ideal; B = ad(e₃) on it.
        let e3 = phi.normalize();
        let helper = if e3.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let u1 = e3.cross(&helper).normalize();
        let u2 = e3.cross(&u1);
        let b11 = u1.dot(&bracket(&c, &e3, &u1));
        let b12 = u1.dot(&bracket(&c, &e3, &u2));
        let b21 = u2.dot(&bracket(&c, &e3, &u1));
        let b22 = u2.dot(&bracket(&c, &e3, &u2));
        let tr = b11 + b22;
        let det = b11 * b22 - b12 * b21;
        let disc = tr * tr - 4.0 * det;
        let s2 = scale * scale;
        return if det.abs() <= margin * s2 {
            PointClass::VSaddleNode
        } else if det < 0.0 {
            PointClass::VSaddle
        } else if disc < -margin * s2 {
            PointClass::VFocus
        } else {
            PointClass::VNode
        };
    }
    // Killing entries scale like scale²; each eigenvalue sign must clear
    // the margin on its own, a small determinant alone is not degeneracy.
    let killing = Matrix3::from_fn(|i, k| (ads[i] * ads[k]).trace());
    let ev = SymmetricEigen::new(killing).eigenvalues;
    if ev.amin() <= margin * scale * scale {
        return PointClass::Unresolved;
    }
    if ev.iter().all(|v| *v < 0.0) || ev.iter().all(|v| *v > 0.0) {
        PointClass::So3
    } else {
        PointClass::Sl2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Trunc;

    #[test]
    fn linear_models_at_origin() {
        let t = Trunc::new(4, 0);
        for (plus, want) in [(true, PointClass::So3), (false, PointClass::Sl2)] {
            let fam = NumericFamily::new(&PoissonFamily::linear_model(t, plus), 0.0);
            let j = fam.jacobian(&Vector3::zeros());
            assert_eq!(classify_linearization(&j, 1e-6), want);
        }
    }

    #[test]
    fn newton_finds_the_origin() {
        let fam = NumericFamily::new(&PoissonFamily::linear_model(Trunc::new(4, 0), true), 0.0);
        let q = newton(&fam, Vector3::new(0.3, -0.2, 0.1), 1.0, 1e-10).unwrap();
        assert!(q.amax() < 1e-9);
    }

    #[test]
    fn weak_semisimple_part_is_resolved() {
        // {x,y} = z, {y,z} = c x, {z,x} = c y with c small: so(3).
        let c = 0.01;
        let j = Matrix3::new(0.0, 0.0, 1.0, c, 0.0, 0.0, 0.0, c, 0.0);
        assert_eq!(classify_linearization(&j, 1e-6), PointClass::So3);
        let flat = Matrix3::new(0.0, 0.0, 1.0, 1e-9, 0.0, 0.0, 0.0, 1e-9, 0.0);
        assert_eq!(classify_linearization(&flat, 1e-6), PointClass::Unresolved);
    }

    #[test]
    fn rotational_model_is_a_node() {
        let fam = NumericFamily::new(&PoissonFamily::rotational_v_model(Trunc::new(4, 0)), 0.0);
        let j = fam.jacobian(&Vector3::zeros());
        assert_eq!(classify_linearization(&j, 1e-6), PointClass::VNode);
    }
}
