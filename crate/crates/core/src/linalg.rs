//! Small exact linear algebra over the rationals.

use num_traits::{One, Zero};

use crate::Rational;

pub type Mat3 = [[Rational; 3]; 3];

pub fn det3(m: &Mat3) -> Rational {
    let a = &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]);
    let b = &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0]);
    let c = &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0]);
    a - b + c
}

pub fn inverse3(m: &Mat3) -> Option<Mat3> {
    let det = det3(m);
    if det.is_zero() {
        return None;
    }
    let cof = |r0: usize, r1: usize, c0: usize, c1: usize| &m[r0][c0] * &m[r1][c1] - &m[r0][c1] * &m[r1][c0];
    // Adjugate, transposed in place.
    let adj: Mat3 = [
        [cof(1, 2, 1, 2), -cof(0, 2, 1, 2), cof(0, 1, 1, 2)],
        [-cof(1, 2, 0, 2), cof(0, 2, 0, 2), -cof(0, 1, 0, 2)],
        [cof(1, 2, 0, 1), -cof(0, 2, 0, 1), cof(0, 1, 0, 1)],
    ];
    Some(adj.map(|row| row.map(|v| v / &det)))
}

pub fn identity3() -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { Rational::one() } else { Rational::zero() }))
}

pub fn mat_mul3(a: &Mat3, b: &Mat3) -> Mat3 {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| (0..3).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &b[k][j]))
    })
}

pub fn mat_vec3(a: &Mat3, v: &[Rational; 3]) -> [Rational; 3] {
    std::array::from_fn(|i| (0..3).fold(Rational::zero(), |acc, k| acc + &a[i][k] * &v[k]))
}

pub fn cross(a: &[Rational; 3], b: &[Rational; 3]) -> [Rational; 3] {
    [
        &a[1] * &b[2] - &a[2] * &b[1],
        &a[2] * &b[0] - &a[0] * &b[2],
        &a[0] * &b[1] - &a[1] * &b[0],
    ]
}

pub fn dot(a: &[Rational; 3], b: &[Rational; 3]) -> Rational {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

/// Row-reduces `[a | b]` and returns one solution of `a x = b` (free
/// variables set to zero), or `None` when the system is inconsistent.
pub fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(r, v)| {
            let mut r = r.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !m[r][col].is_zero()) else { continue };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for v in m[row].iter_mut() {
            *v *= &inv;
        }
        for r in 0..rows {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=cols {
                    let delta = &f * &m[row][c];
                    m[r][c] -= delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == rows {
            break;
        }
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][cols].clone();
    }
    Some(x)
}

/// Rank of a rational matrix.
pub fn rank(a: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<Rational>> = a.to_vec();
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            if !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for k in c..cols {
                    let delta = &f * &m[r][k];
                    m[i][k] -= delta;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::{rat, ratio};

    fn m(v: [[i64; 3]; 3]) -> Mat3 {
        v.map(|r| r.map(rat))
    }

    #[test]
    fn inverse_roundtrip() {
        let a = m([[2, 1, 0], [0, 1, 3], [1, 0, 1]]);
        let inv = inverse3(&a).unwrap();
        assert_eq!(mat_mul3(&a, &inv), identity3());
        assert!(inverse3(&m([[1, 2, 3], [2, 4, 6], [0, 0, 1]])).is_none());
    }

    #[test]
    fn solve_underdetermined() {
        let a = vec![vec![rat(1), rat(1), rat(0)], vec![rat(0), rat(0), rat(2)]];
        let x = solve(&a, &[rat(3), rat(1)]).unwrap();
        assert_eq!(x, vec![rat(3), rat(0), ratio(1, 2)]);
        let bad = vec![vec![rat(1), rat(1)], vec![rat(2), rat(2)]];
        assert!(solve(&bad, &[rat(1), rat(3)]).is_none());
        assert_eq!(rank(&bad), 1);
    }
}
