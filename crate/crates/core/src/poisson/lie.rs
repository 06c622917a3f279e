use num_traits::{Signed, Zero};

use super::PoissonFamily;
use crate::error::{Error, Result};
use crate::jet::{Monomial, Var};
use crate::linalg::{det3, rank, solve, Mat3};
use crate::Rational;

/// Linearization of a Poisson structure at a singular point:
/// `[e_i, e_j] = Σ_k c[i][j][k] e_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieAlgebra1Jet {
    c: [[[Rational; 3]; 3]; 3],
}

/// Presentation `[e1,e2] = 0`, `[e_i,e3] = b_i1 e1 + b_i2 e2` of a solvable
/// algebra, with `basis` holding `e1, e2, e3` as rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactB {
    pub basis: Mat3,
    pub b: [[Rational; 2]; 2],
}

impl FactB {
    pub fn trace(&self) -> Rational {
        &self.b[0][0] + &self.b[1][1]
    }

    pub fn det(&self) -> Rational {
        &self.b[0][0] * &self.b[1][1] - &self.b[0][1] * &self.b[1][0]
    }
}

fn zero() -> Rational {
    Rational::zero()
}

impl LieAlgebra1Jet {
    /// Validates antisymmetry and the Jacobi identity.
    pub fn from_constants(c: [[[Rational; 3]; 3]; 3]) -> Result<Self> {
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    if c[i][j][k] != -c[j][i][k].clone() {
                        return Err(Error::Input("structure constants are not antisymmetric".into()));
                    }
                }
            }
        }
        let l = LieAlgebra1Jet { c };
        let e = |i: usize| unit(i);
        let jac = |a: &[Rational; 3], b: &[Rational; 3], c: &[Rational; 3]| {
            let t1 = l.bracket(a, &l.bracket(b, c));
            let t2 = l.bracket(b, &l.bracket(c, a));
            let t3 = l.bracket(c, &l.bracket(a, b));
            (0..3).all(|k| (&t1[k] + &t2[k] + &t3[k]).is_zero())
        };
        if !jac(&e(0), &e(1), &e(2)) {
            return Err(Error::Input("structure constants violate the Jacobi identity".into()));
        }
        Ok(l)
    }

    pub(super) fn of_family(p: &PoissonFamily, at: [&Rational; 3]) -> Result<Self> {
        let p0 = p.at_eps0();
        let value = |s: &crate::jet::Series| s.eval_space(at).coeff(Monomial::ONE);
        if [p0.bxy(), p0.byz(), p0.bzx()].iter().any(|s| !value(s).is_zero()) {
            return Err(Error::NotSingular);
        }
        let vars = [Var::X, Var::Y, Var::Z];
        let mut c: [[[Rational; 3]; 3]; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                let b = p0.bracket(i, j);
                for (k, v) in vars.iter().enumerate() {
                    c[i][j][k] = value(&b.partial(*v));
                }
            }
        }
        LieAlgebra1Jet::from_constants(c)
    }

    pub fn constants(&self) -> &[[[Rational; 3]; 3]; 3] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().flatten().flatten().all(Zero::is_zero)
    }

    pub fn bracket(&self, u: &[Rational; 3], v: &[Rational; 3]) -> [Rational; 3] {
        let mut out: [Rational; 3] = Default::default();
        for i in 0..3 {
            for j in 0..3 {
                let w = &u[i] * &v[j];
                if w.is_zero() {
                    continue;
                }
                for (k, o) in out.iter_mut().enumerate() {
                    *o += &w * &self.c[i][j][k];
                }
            }
        }
        out
    }

    /// Matrix of `ad_u` with `(ad_u)[k][j]` the `e_k` component of `[u, e_j]`.
    pub fn ad(&self, u: &[Rational; 3]) -> Mat3 {
        let cols: [[Rational; 3]; 3] = std::array::from_fn(|j| self.bracket(u, &unit(j)));
        std::array::from_fn(|k| std::array::from_fn(|j| cols[j][k].clone()))
    }

    /// `φ(e_k) = trace(ad e_k)`.
    pub fn trace_form(&self) -> [Rational; 3] {
        std::array::from_fn(|k| {
            let a = self.ad(&unit(k));
            &a[0][0] + &a[1][1] + &a[2][2]
        })
    }

    pub fn is_unimodular(&self) -> bool {
        self.trace_form().iter().all(Zero::is_zero)
    }

    /// Killing form `K(e_a, e_b) = trace(ad e_a ad e_b)`.
    pub fn killing(&self) -> Mat3 {
        let ads: Vec<Mat3> = (0..3).map(|k| self.ad(&unit(k))).collect();
        std::array::from_fn(|a| {
            std::array::from_fn(|b| {
                let mut t = zero();
                for i in 0..3 {
                    for k in 0..3 {
                        t += &ads[a][i][k] * &ads[b][k][i];
                    }
                }
                t
            })
        })
    }

    /// Whether the algebra is isomorphic to `{x,y} = 0, {y,z} = y, {z,x} = −x`,
    /// i.e. `[u, v] = ψ(u) v − ψ(v) u` with `ψ = trace∘ad / 2` not zero.
    pub fn is_rotational_v(&self) -> bool {
        let phi = self.trace_form();
        if phi.iter().all(Zero::is_zero) {
            return false;
        }
        let half = Rational::new(1.into(), 2.into());
        for i in 0..3 {
            for j in 0..3 {
                let br = self.bracket(&unit(i), &unit(j));
                for k in 0..3 {
                    let mut want = zero();
                    if k == j {
                        want += &phi[i] * &half;
                    }
                    if k == i {
                        want -= &phi[j] * &half;
                    }
                    if br[k] != want {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Dimension of the derived algebra.
    pub fn derived_rank(&self) -> usize {
        let rows: Vec<Vec<Rational>> = [(0, 1), (1, 2), (2, 0)]
            .iter()
            .map(|&(i, j)| self.bracket(&unit(i), &unit(j)).to_vec())
            .collect();
        rank(&rows)
    }

    /// Presentation through a two-dimensional abelian ideal, when one exists
    /// (every nonzero algebra except the semisimple ones).
    pub fn fact_b(&self) -> Option<FactB> {
        let ideal = self.abelian_ideal()?;
        let (u1, u2) = (ideal[0].clone(), ideal[1].clone());
        let e3 = (0..3).map(unit).find(|e| !det3(&[u1.clone(), u2.clone(), e.clone()]).is_zero())?;
        // Coordinates of [u_i, e3] in the basis (u1, u2).
        let mut b: [[Rational; 2]; 2] = Default::default();
        for (i, u) in [&u1, &u2].into_iter().enumerate() {
            let w = self.bracket(u, &e3);
            let a: Vec<Vec<Rational>> = (0..3).map(|k| vec![u1[k].clone(), u2[k].clone()]).collect();
            let sol = solve(&a, &w)?;
            b[i] = [sol[0].clone(), sol[1].clone()];
        }
        Some(FactB { basis: [u1, u2, e3], b })
    }

    fn abelian_ideal(&self) -> Option<[[Rational; 3]; 2]> {
        if self.is_zero() {
            return None;
        }
        let phi = self.trace_form();
        let candidate: Vec<[Rational; 3]> = if phi.iter().any(|v| !v.is_zero()) {
            kernel_of_covector(&phi)
        } else {
            let derived: Vec<[Rational; 3]> =
                [(0, 1), (1, 2), (2, 0)].iter().map(|&(i, j)| self.bracket(&unit(i), &unit(j))).collect();
            match self.derived_rank() {
                2 => independent_pair(&derived)?,
                1 => {
                    let c = derived.iter().find(|v| v.iter().any(|x| !x.is_zero()))?.clone();
                    let other = (0..3).map(unit).find(|e| {
                        let rows = vec![c.to_vec(), e.to_vec()];
                        rank(&rows) == 2 && self.bracket(e, &c).iter().all(Zero::is_zero)
                    })?;
                    vec![c, other]
                }
                _ => return None,
            }
        };
        let (u1, u2) = (&candidate[0], &candidate[1]);
        let commute = self.bracket(u1, u2).iter().all(Zero::is_zero);
        let in_ideal = |w: [Rational; 3]| {
            let rows = vec![u1.to_vec(), u2.to_vec(), w.to_vec()];
            rank(&rows) == 2 || w.iter().all(Zero::is_zero)
        };
        let ideal = (0..3).all(|k| in_ideal(self.bracket(u1, &unit(k))) && in_ideal(self.bracket(u2, &unit(k))));
        (commute && ideal).then(|| [u1.clone(), u2.clone()])
    }

    /// Sign of the Killing form restricted to a complement of its radical,
    /// for degenerate unimodular algebras: `-1`, `0` or `1`.
    pub fn killing_trace_sign(&self) -> i32 {
        let k = self.killing();
        let t = &k[0][0] + &k[1][1] + &k[2][2];
        if t.is_positive() {
            1
        } else if t.is_negative() {
            -1
        } else {
            0
        }
    }
}

fn unit(i: usize) -> [Rational; 3] {
    let mut v: [Rational; 3] = Default::default();
    v[i] = Rational::from_integer(1.into());
    v
}

fn kernel_of_covector(phi: &[Rational; 3]) -> Vec<[Rational; 3]> {
    // Two independent solutions of φ·u = 0.
    let p = (0..3).find(|&i| !phi[i].is_zero()).expect("nonzero covector");
    (0..3)
        .filter(|&j| j != p)
        .map(|j| {
            let mut u: [Rational; 3] = Default::default();
            u[j] = phi[p].clone();
            u[p] = -phi[j].clone();
            u
        })
        .collect()
}

fn independent_pair(vs: &[[Rational; 3]]) -> Option<Vec<[Rational; 3]>> {
    for a in 0..vs.len() {
        for b in a + 1..vs.len() {
            if rank(&[vs[a].to_vec(), vs[b].to_vec()]) == 2 {
                return Some(vec![vs[a].clone(), vs[b].clone()]);
            }
        }
    }
    None
}
