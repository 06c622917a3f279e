//! Truncated power series in `x, y, z` and the parameter `ε` with exact
//! rational coefficients.
//!
//! A [`Series`] keeps every term `c · x^i y^j z^k ε^l` with `i + j + k <= d`
//! and `l <= e`. Terms beyond either bound are dropped by every operation, so
//! arithmetic is closed on a fixed [`Trunc`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::JetError;
use crate::Rational;

/// Truncation bounds: total degree `d` in `(x, y, z)` and order `e` in `ε`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Trunc {
    pub d: u32,
    pub e: u32,
}

impl Trunc {
    pub const fn new(d: u32, e: u32) -> Self {
        Trunc { d, e }
    }

    /// Default jet order used across the crate.
    pub const DEFAULT: Trunc = Trunc { d: 6, e: 2 };

    pub fn admits(&self, m: Monomial) -> bool {
        m.degree() <= self.d && m.eps() <= self.e
    }

    pub fn lowered(&self, by: u32) -> Trunc {
        Trunc::new(self.d.saturating_sub(by), self.e)
    }
}

impl Default for Trunc {
    fn default() -> Self {
        Trunc::DEFAULT
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Var {
    X,
    Y,
    Z,
    Eps,
}

impl Var {
    pub const SPACE: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::Z => 2,
            Var::Eps => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Z => "z",
            Var::Eps => "eps",
        }
    }
}

/// Exponent vector `(i, j, k, l)` over `(x, y, z, ε)`.
///
/// Ordered graded-lexicographically with `x > y > z > ε`; the grading uses
/// the full degree `i + j + k + l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub [u32; 4]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0, 0]);

    pub fn new(i: u32, j: u32, k: u32, l: u32) -> Self {
        Monomial([i, j, k, l])
    }

    /// Degree in the space variables only.
    pub fn degree(&self) -> u32 {
        self.0[0] + self.0[1] + self.0[2]
    }

    /// Degree in `(x, y)` only.
    pub fn xy_degree(&self) -> u32 {
        self.0[0] + self.0[1]
    }

    pub fn eps(&self) -> u32 {
        self.0[3]
    }

    pub fn exp(&self, v: Var) -> u32 {
        self.0[v.index()]
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial([
            self.0[0] + o.0[0],
            self.0[1] + o.0[1],
            self.0[2] + o.0[2],
            self.0[3] + o.0[3],
        ])
    }

    pub fn with(&self, v: Var, e: u32) -> Monomial {
        let mut m = *self;
        m.0[v.index()] = e;
        m
    }

    fn key(&self) -> (u32, u32, u32, u32, u32) {
        (self.degree() + self.0[3], self.0[0], self.0[1], self.0[2], self.0[3])
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Truncated multivariate series with exact rational coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    trunc: Trunc,
    terms: BTreeMap<Monomial, Rational>,
}

pub(crate) fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

impl Series {
    pub fn zero(trunc: Trunc) -> Self {
        Series { trunc, terms: BTreeMap::new() }
    }

    pub fn constant(trunc: Trunc, c: Rational) -> Self {
        Series::monomial(trunc, Monomial::ONE, c)
    }

    pub fn one(trunc: Trunc) -> Self {
        Series::constant(trunc, Rational::one())
    }

    pub fn var(trunc: Trunc, v: Var) -> Self {
        let mut m = Monomial::ONE;
        m.0[v.index()] = 1;
        Series::monomial(trunc, m, Rational::one())
    }

    /// A single term; silently zero if `m` lies outside `trunc`.
    pub fn monomial(trunc: Trunc, m: Monomial, c: Rational) -> Self {
        let mut s = Series::zero(trunc);
        if trunc.admits(m) && !c.is_zero() {
            s.terms.insert(m, c);
        }
        s
    }

    /// Builds a series, dropping terms outside `trunc` and summing repeats.
    pub fn from_terms<I>(trunc: Trunc, terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut s = Series::zero(trunc);
        for (m, c) in terms {
            if trunc.admits(m) {
                s.add_term(m, c);
            }
        }
        s
    }

    /// Like [`Series::from_terms`] but rejects terms outside `trunc`.
    pub fn try_from_terms<I>(trunc: Trunc, terms: I) -> Result<Self, JetError>
    where
        I: IntoIterator<Item = (Monomial, Rational)>,
    {
        let mut s = Series::zero(trunc);
        for (m, c) in terms {
            if !trunc.admits(m) {
                return Err(JetError::DegreeOverflow { powers: m.0, trunc });
            }
            s.add_term(m, c);
        }
        Ok(s)
    }

    /// Convenience constructor from small integer data `(i, j, k, l, num, den)`.
    pub fn from_ints(trunc: Trunc, terms: &[(u32, u32, u32, u32, i64, i64)]) -> Self {
        Series::from_terms(
            trunc,
            terms.iter().map(|&(i, j, k, l, n, d)| (Monomial::new(i, j, k, l), ratio(n, d))),
        )
    }

    pub fn trunc(&self) -> Trunc {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: Monomial) -> Rational {
        self.terms.get(&m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() || !self.trunc.admits(m) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Re-truncates (or widens) to new bounds.
    pub fn with_trunc(&self, trunc: Trunc) -> Series {
        Series {
            trunc,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| trunc.admits(**m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Keeps the terms for which `keep` holds.
    pub fn filter<F: Fn(&Monomial) -> bool>(&self, keep: F) -> Series {
        Series {
            trunc: self.trunc,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Applies `f` to each monomial; terms mapped to `None` are dropped.
    pub fn map_monomials<F: Fn(&Monomial) -> Option<Monomial>>(&self, f: F) -> Series {
        let mut out = Series::zero(self.trunc);
        for (m, c) in &self.terms {
            if let Some(n) = f(m) {
                out.add_term(n, c.clone());
            }
        }
        out
    }

    pub fn scale(&self, q: &Rational) -> Series {
        if q.is_zero() {
            return Series::zero(self.trunc);
        }
        Series {
            trunc: self.trunc,
            terms: self.terms.iter().map(|(m, c)| (*m, c * q)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> Series {
        self.scale(&rat(n))
    }

    /// Multiplies by a monomial, truncating.
    pub fn shift(&self, by: Monomial) -> Series {
        self.map_monomials(|m| Some(m.mul(&by)))
    }

    pub fn try_add(&self, o: &Series) -> Result<Series, JetError> {
        self.check(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, o: &Series) -> Result<Series, JetError> {
        self.check(o)?;
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, -c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, o: &Series) -> Result<Series, JetError> {
        self.check(o)?;
        Ok(self.mul_unchecked(o))
    }

    fn check(&self, o: &Series) -> Result<(), JetError> {
        if self.trunc != o.trunc {
            return Err(JetError::TruncMismatch { left: self.trunc, right: o.trunc });
        }
        Ok(())
    }

    /// Integer numerators over a common denominator.
    fn scaled_numerators(&self) -> (BigInt, Vec<(Monomial, BigInt)>) {
        let mut l = BigInt::one();
        for c in self.terms.values() {
            l = l.lcm(c.denom());
        }
        let v = self.terms.iter().map(|(m, c)| (*m, c.numer() * (&l / c.denom()))).collect();
        (l, v)
    }

    fn mul_unchecked(&self, o: &Series) -> Series {
        if self.is_zero() || o.is_zero() {
            return Series::zero(self.trunc);
        }
        let t = self.trunc;
        // Integer products accumulated over a common denominator; one
        // normalization per output term.
        let (la, left) = self.scaled_numerators();
        let (lb, mut right) = o.scaled_numerators();
        right.sort_by_key(|(m, _)| m.degree());
        let mut acc: HashMap<Monomial, BigInt> = HashMap::new();
        for (ma, ca) in &left {
            let budget = match t.d.checked_sub(ma.degree()) {
                Some(b) => b,
                None => continue,
            };
            for (mb, cb) in &right {
                if mb.degree() > budget {
                    break;
                }
                if ma.eps() + mb.eps() > t.e {
                    continue;
                }
                let m = ma.mul(mb);
                let p = ca * cb;
                match acc.get_mut(&m) {
                    Some(v) => *v += p,
                    None => {
                        acc.insert(m, p);
                    }
                }
            }
        }
        let den = la * lb;
        Series {
            trunc: t,
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, Rational::new(c, den.clone())))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Series {
        let mut result = Series::one(self.trunc);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative; the result keeps the same bounds.
    pub fn partial(&self, v: Var) -> Series {
        let idx = v.index();
        let mut out = Series::zero(self.trunc);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut n = *m;
            n.0[idx] = e - 1;
            out.terms.insert(n, c * rat(e as i64));
        }
        out
    }

    /// Antiderivative in `v` with zero integration constant.
    pub fn integrate(&self, v: Var) -> Series {
        let idx = v.index();
        let mut out = Series::zero(self.trunc);
        for (m, c) in &self.terms {
            let mut n = *m;
            n.0[idx] += 1;
            out.add_term(n, c / rat(n.0[idx] as i64));
        }
        out
    }

    /// Lowest space degree among the terms, `None` for the zero series.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    /// Terms of space degree exactly `k`.
    pub fn homogeneous(&self, k: u32) -> Series {
        self.filter(|m| m.degree() == k)
    }

    /// Terms of degree `<= k` in the space variables.
    pub fn jet(&self, k: u32) -> Series {
        self.filter(|m| m.degree() <= k)
    }

    /// Coefficient of `ε^l`, as a series without `ε`.
    pub fn eps_coeff(&self, l: u32) -> Series {
        self.map_monomials(|m| (m.eps() == l).then(|| m.with(Var::Eps, 0)))
    }

    /// Value at `ε = 0`.
    pub fn at_eps0(&self) -> Series {
        self.filter(|m| m.eps() == 0)
    }

    /// Value at the space origin, a polynomial in `ε` alone.
    pub fn at_origin(&self) -> Series {
        self.filter(|m| m.degree() == 0)
    }

    /// Whether some term involves the given variable.
    pub fn depends_on(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.exp(v) > 0)
    }

    /// Constant term at `ε = 0`.
    pub fn constant_term(&self) -> Rational {
        self.coeff(Monomial::ONE)
    }

    /// Exact evaluation at a rational point; `ε` stays symbolic.
    pub fn eval_space(&self, p: [&Rational; 3]) -> Series {
        let mut out = Series::zero(self.trunc);
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (i, pi) in p.iter().enumerate() {
                for _ in 0..m.0[i] {
                    v *= *pi;
                }
            }
            out.add_term(Monomial::new(0, 0, 0, m.eps()), v);
        }
        out
    }

    /// Floating-point evaluation.
    pub fn eval_f64(&self, p: [f64; 3], eps: f64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                c.to_f64().unwrap_or(f64::NAN)
                    * p[0].powi(m.0[0] as i32)
                    * p[1].powi(m.0[1] as i32)
                    * p[2].powi(m.0[2] as i32)
                    * eps.powi(m.0[3] as i32)
            })
            .sum()
    }

    /// Collapses `ε` to a float, leaving a polynomial in space variables.
    pub fn to_f64_terms(&self, eps: f64) -> Vec<([u32; 3], f64)> {
        let mut acc: BTreeMap<[u32; 3], f64> = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = c.to_f64().unwrap_or(f64::NAN) * eps.powi(m.0[3] as i32);
            *acc.entry([m.0[0], m.0[1], m.0[2]]).or_insert(0.0) += v;
        }
        acc.into_iter().filter(|(_, v)| *v != 0.0).collect()
    }

    /// Composition `self(images[0], images[1], images[2], ε)`, truncated to
    /// `self`'s bounds. `ε` is left in place.
    pub fn compose(&self, images: [&Series; 3]) -> Series {
        let t = self.trunc;
        let images: Vec<Series> = images.iter().map(|s| s.with_trunc(t)).collect();
        // Group the terms by their space exponents; each group is a polynomial in ε.
        let mut groups: BTreeMap<(u32, u32, u32), Series> = BTreeMap::new();
        for (m, c) in &self.terms {
            groups
                .entry((m.0[0], m.0[1], m.0[2]))
                .or_insert_with(|| Series::zero(t))
                .add_term(Monomial::new(0, 0, 0, m.eps()), c.clone());
        }
        let max = |idx: usize| groups.keys().map(|k| [k.0, k.1, k.2][idx]).max().unwrap_or(0);
        let powers = |s: &Series, n: u32| {
            let mut v = vec![Series::one(t)];
            for p in 1..=n {
                let next = &v[(p - 1) as usize] * s;
                v.push(next);
            }
            v
        };
        let px = powers(&images[0], max(0));
        let py = powers(&images[1], max(1));
        let pz = powers(&images[2], max(2));
        let mut xy_cache: HashMap<(u32, u32), Series> = HashMap::new();
        let mut out = Series::zero(t);
        for ((i, j, k), c) in &groups {
            let xy = xy_cache
                .entry((*i, *j))
                .or_insert_with(|| &px[*i as usize] * &py[*j as usize]);
            let term = &(&*xy * &pz[*k as usize]) * c;
            for (m, v) in term.terms {
                out.add_term(m, v);
            }
        }
        out
    }

    /// Division by a series whose value at the origin is an invertible
    /// constant, computed by fixed-point iteration.
    pub fn try_div(&self, den: &Series) -> Result<Series, JetError> {
        let c0 = den.coeff(Monomial::ONE);
        if c0.is_zero() {
            return Err(JetError::NotInvertible);
        }
        let inv0 = c0.recip();
        let tail = den.try_sub(&Series::constant(den.trunc, c0))?;
        // q = (self - tail * q) / c0
        let mut q = self.scale(&inv0);
        for _ in 0..(self.trunc.d + self.trunc.e + 1) {
            let next = self.try_sub(&(&tail * &q))?.scale(&inv0);
            if next == q {
                break;
            }
            q = next;
        }
        Ok(q)
    }

    /// Largest absolute coefficient, for diagnostics.
    pub fn max_abs_coeff(&self) -> Rational {
        self.terms.values().map(|c| c.abs()).max().unwrap_or_else(Rational::zero)
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series[{},{}]({})", self.trunc.d, self.trunc.e, self)
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["x", "y", "z", "eps"];
        for (n, (m, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}", c)?;
            for (v, e) in m.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*{}", names[v])?,
                    _ => write!(f, "*{}^{}", names[v], e)?,
                }
            }
        }
        Ok(())
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&Series> for &Series {
            type Output = Series;
            /// Panics when the truncation bounds differ; use the `try_` form
            /// for fallible input.
            fn $m(self, o: &Series) -> Series {
                match self.$checked(o) {
                    Ok(s) => s,
                    Err(e) => panic!("{}", e),
                }
            }
        }
        impl $tr<Series> for Series {
            type Output = Series;
            fn $m(self, o: Series) -> Series {
                (&self).$m(&o)
            }
        }
        impl $tr<&Series> for Series {
            type Output = Series;
            fn $m(self, o: &Series) -> Series {
                (&self).$m(o)
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(&-Rational::one())
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t() -> Trunc {
        Trunc::new(6, 2)
    }

    fn x() -> Series {
        Series::var(t(), Var::X)
    }
    fn y() -> Series {
        Series::var(t(), Var::Y)
    }

    #[test]
    fn monomial_product() {
        let p = &x() * &y();
        assert_eq!(p, Series::from_ints(t(), &[(1, 1, 0, 0, 1, 1)]));
    }

    #[test]
    fn truncation_at_degree() {
        let xd = x().pow(6);
        assert_eq!(xd.len(), 1);
        assert!((&xd * &x()).is_zero());
        let e = Series::var(t(), Var::Eps);
        assert!(e.pow(3).is_zero());
        assert!(!e.pow(2).is_zero());
    }

    #[test]
    fn exact_rational_addition() {
        let a = x().scale(&ratio(1, 2));
        let b = x().scale(&ratio(1, 3));
        assert_eq!((&a + &b).coeff(Monomial::new(1, 0, 0, 0)), ratio(5, 6));
    }

    #[test]
    fn mismatched_bounds_rejected() {
        let a = Series::var(Trunc::new(4, 1), Var::X);
        assert!(matches!(a.try_add(&x()), Err(JetError::TruncMismatch { .. })));
        assert!(a.try_mul(&x()).is_err());
    }

    #[test]
    fn partial_derivatives() {
        let s = &(&x() * &x()) * &y();
        assert_eq!(s.partial(Var::X), (&x() * &y()).scale_int(2));
        assert!(Series::constant(t(), rat(7)).partial(Var::Z).is_zero());
        let plus = &(&x() * &x()) + &(&y() * &y());
        let minus = &(&x() * &x()) - &(&y() * &y());
        assert_eq!(plus.partial(Var::Y), y().scale_int(2));
        assert_eq!(minus.partial(Var::Y), y().scale_int(-2));
    }

    #[test]
    fn canonical_order_is_graded_lex() {
        let s = Series::from_ints(
            t(),
            &[(0, 0, 1, 0, 1, 1), (1, 0, 0, 0, 1, 1), (0, 0, 0, 1, 1, 1), (0, 2, 0, 0, 1, 1), (0, 1, 0, 0, 1, 1)],
        );
        let order: Vec<[u32; 4]> = s.terms().map(|(m, _)| m.0).collect();
        assert_eq!(order, vec![[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0], [0, 2, 0, 0]]);
    }

    #[test]
    fn compose_shift() {
        let sq = &x() * &x();
        let xpy = &x() + &y();
        let got = sq.compose([&xpy, &y(), &Series::var(t(), Var::Z)]);
        let want = Series::from_ints(t(), &[(2, 0, 0, 0, 1, 1), (1, 1, 0, 0, 2, 1), (0, 2, 0, 0, 1, 1)]);
        assert_eq!(got, want);
        let xy = &x() * &y();
        assert_eq!(xy.compose([&y(), &x(), &Series::var(t(), Var::Z)]), xy);
    }

    #[test]
    fn division_by_unit() {
        let one_minus_x = &Series::one(t()) - &x();
        let q = Series::one(t()).try_div(&one_minus_x).unwrap();
        for k in 0..=6 {
            assert_eq!(q.coeff(Monomial::new(k, 0, 0, 0)), rat(1));
        }
        assert!(Series::one(t()).try_div(&x()).is_err());
    }

    #[test]
    fn integrate_then_differentiate() {
        let s = Series::from_ints(t(), &[(1, 2, 0, 1, 3, 4), (0, 0, 2, 0, -1, 2)]);
        assert_eq!(s.integrate(Var::Y).partial(Var::Y), s.jet(5));
    }
}
