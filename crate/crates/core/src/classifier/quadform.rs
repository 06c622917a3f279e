use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::jet::{Monomial, Series};
use crate::Rational;

/// Real type of a binary quadratic form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadClass {
    PosDef,
    NegDef,
    Indefinite,
    Rank1Plus,
    Rank1Minus,
    Zero,
}

impl QuadClass {
    pub fn is_nondegenerate(self) -> bool {
        matches!(self, QuadClass::PosDef | QuadClass::NegDef | QuadClass::Indefinite)
    }
}

/// Coefficients `(a, b, c)` of `a x² + b xy + c y²`.
pub fn quad_coeffs(q: &Series) -> (Rational, Rational, Rational) {
    (
        q.coeff(Monomial::new(2, 0, 0, 0)),
        q.coeff(Monomial::new(1, 1, 0, 0)),
        q.coeff(Monomial::new(0, 2, 0, 0)),
    )
}

/// Exact signature of a homogeneous quadratic form in `x, y`.
pub fn quadform_class(q2: &Series) -> Result<QuadClass> {
    if q2.terms().any(|(m, _)| m.degree() != 2 || m.eps() != 0 || m.exp(crate::jet::Var::Z) != 0) {
        return Err(Error::Input(format!("not a binary quadratic form: {q2}")));
    }
    let (a, b, c) = quad_coeffs(q2);
    let four = Rational::from_integer(4.into());
    let disc = &b * &b - &four * &a * &c;
    Ok(if disc.is_negative() {
        if a.is_positive() {
            QuadClass::PosDef
        } else {
            QuadClass::NegDef
        }
    } else if disc.is_positive() {
        QuadClass::Indefinite
    } else {
        let lead = if a.is_zero() { c } else { a };
        if lead.is_zero() {
            QuadClass::Zero
        } else if lead.is_positive() {
            QuadClass::Rank1Plus
        } else {
            QuadClass::Rank1Minus
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jet::Trunc;

    fn q(terms: &[(u32, u32, i64)]) -> Series {
        let rows: Vec<_> = terms.iter().map(|&(i, j, c)| (i, j, 0, 0, c, 1)).collect();
        Series::from_ints(Trunc::DEFAULT, &rows)
    }

    #[test]
    fn signatures() {
        assert_eq!(quadform_class(&q(&[(2, 0, 1), (0, 2, 1)])).unwrap(), QuadClass::PosDef);
        assert_eq!(quadform_class(&q(&[(2, 0, -1), (0, 2, -3)])).unwrap(), QuadClass::NegDef);
        assert_eq!(quadform_class(&q(&[(1, 1, 2)])).unwrap(), QuadClass::Indefinite);
        assert_eq!(quadform_class(&q(&[(2, 0, 1)])).unwrap(), QuadClass::Rank1Plus);
        assert_eq!(quadform_class(&q(&[(2, 0, -1), (1, 1, 2), (0, 2, -1)])).unwrap(), QuadClass::Rank1Minus);
        assert_eq!(quadform_class(&q(&[])).unwrap(), QuadClass::Zero);
    }

    #[test]
    fn rejects_non_quadratic() {
        assert!(quadform_class(&q(&[(3, 0, 1)])).is_err());
    }
}
