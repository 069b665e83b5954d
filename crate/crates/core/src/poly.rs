//! Integer polynomials in `q`, exact rational interpolation, and Betti
//! numbers read off a Kac polynomial.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `a_α(q)` as integer coefficients, index = power of `q`, together with
/// the declared degree bound `d = 1 - (α, α)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KacPolynomial {
    coeffs: Vec<BigInt>,
    degree_bound: i64,
}

impl KacPolynomial {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<BigInt>, degree_bound: i64) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        KacPolynomial { coeffs, degree_bound }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coefficient(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn degree_bound(&self) -> i64 {
        self.degree_bound
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Actual degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(0)
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn has_nonnegative_coefficients(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl fmt::Display for KacPolynomial {
    /// Comma-separated coefficients, constant term first; `0` for zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Coefficients (constant first) of the unique polynomial of degree
/// `< points.len()` through the given points, by Lagrange's formula over
/// exact rationals. Nodes must be distinct.
pub fn lagrange_interpolate(points: &[(BigInt, BigInt)]) -> Result<Vec<BigRational>> {
    let n = points.len();
    let mut out = vec![BigRational::zero(); n];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // numerator Π_{j≠i} (x - x_j), built up one linear factor at a time
        let mut basis = vec![BigInt::one()];
        let mut denom = BigInt::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            if xi == xj {
                return Err(Error::Interpolation(format!("repeated node {xi}")));
            }
            let mut next = vec![BigInt::zero(); basis.len() + 1];
            for (k, b) in basis.iter().enumerate() {
                next[k + 1] += b;
                next[k] -= b * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        for (k, b) in basis.into_iter().enumerate() {
            out[k] += BigRational::new(b * yi, denom.clone());
        }
    }
    Ok(out)
}

/// Converts rational coefficients to integers when all are integral.
pub fn integral_coefficients(coeffs: &[BigRational]) -> Option<Vec<BigInt>> {
    coeffs.iter().map(|c| c.is_integer().then(|| c.to_integer())).collect()
}

/// Betti numbers `b_0, ..., b_{2d}` of the quiver variety whose point count
/// the polynomial records: the coefficient of `q^i` is `b_{2d-2i}` and odd
/// Betti numbers vanish. Empty for the zero polynomial.
pub fn betti_from_kac(p: &KacPolynomial) -> Result<Vec<BigUint>> {
    for (i, c) in p.coeffs.iter().enumerate() {
        if c.is_negative() {
            return Err(Error::NegativeCoefficient { power: i, coefficient: c.to_string() });
        }
    }
    if p.is_zero() {
        return Ok(Vec::new());
    }
    let d = p.degree_bound.max(p.degree().unwrap_or(0) as i64).to_usize().unwrap_or(0);
    let mut betti = vec![BigUint::zero(); 2 * d + 1];
    for (i, c) in p.coeffs.iter().enumerate() {
        let (_, mag) = c.clone().into_parts();
        betti[2 * d - 2 * i] = mag;
    }
    Ok(betti)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        // q^2 + q + 1 sampled at 2, 3, 4
        let pts: Vec<_> = [2, 3, 4].iter().map(|&q| (bi(q), bi(q * q + q + 1))).collect();
        let c = integral_coefficients(&lagrange_interpolate(&pts).unwrap()).unwrap();
        assert_eq!(c, vec![bi(1), bi(1), bi(1)]);
    }

    #[test]
    fn interpolation_detects_non_integral_fit() {
        let pts = vec![(bi(2), bi(1)), (bi(4), bi(2))];
        let c = lagrange_interpolate(&pts).unwrap();
        assert_eq!(c[1], BigRational::new(bi(1), bi(2)));
        assert!(integral_coefficients(&c).is_none());
    }

    #[test]
    fn repeated_nodes_rejected() {
        assert!(lagrange_interpolate(&[(bi(2), bi(1)), (bi(2), bi(1))]).is_err());
    }

    #[test]
    fn betti_examples() {
        let k2 = KacPolynomial::new(vec![bi(1), bi(1)], 1);
        let b = betti_from_kac(&k2).unwrap();
        assert_eq!(b, vec![BigUint::one(), BigUint::zero(), BigUint::one()]);
        let point = KacPolynomial::new(vec![bi(1)], 0);
        assert_eq!(betti_from_kac(&point).unwrap(), vec![BigUint::one()]);
        assert!(betti_from_kac(&KacPolynomial::new(vec![], 0)).unwrap().is_empty());
        let bad = KacPolynomial::new(vec![bi(1), bi(-1)], 1);
        assert!(matches!(betti_from_kac(&bad), Err(Error::NegativeCoefficient { power: 1, .. })));
    }

    #[test]
    fn display_and_eval() {
        let p = KacPolynomial::new(vec![bi(4), bi(1), bi(0)], 1);
        assert_eq!(p.to_string(), "4,1");
        assert_eq!(p.eval(&bi(7)), bi(11));
        assert_eq!(KacPolynomial::new(vec![], 0).to_string(), "0");
    }
}
