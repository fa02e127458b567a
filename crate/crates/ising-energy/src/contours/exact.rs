//! Exact arithmetic in the field `ℚ(√2)`.
//!
//! Contour weights are integer powers of `α = √2 - 1`, so partition functions
//! and the energy-density identities live in `ℚ(√2)` and can be checked with
//! no floating-point tolerance at all.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::ops::{Add, Div, Mul, Neg, Sub};

/// An element `a + b√2` with rational `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSqrt2 {
    pub a: BigRational,
    pub b: BigRational,
}

impl QSqrt2 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        QSqrt2 { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        QSqrt2 {
            a: BigRational::from(BigInt::from(a)),
            b: BigRational::from(BigInt::from(b)),
        }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    /// `√2`
    pub fn sqrt2() -> Self {
        Self::from_ints(0, 1)
    }

    /// `α = √2 - 1`
    pub fn alpha() -> Self {
        Self::from_ints(-1, 1)
    }

    /// `α^n` for `n ≥ 0`.
    pub fn alpha_pow(n: u32) -> Self {
        let mut acc = Self::one();
        let alpha = Self::alpha();
        for _ in 0..n {
            acc = &acc * &alpha;
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Exact sign test for `a + b√2 ≥ 0`.
    pub fn is_nonnegative(&self) -> bool {
        let a_neg = self.a.is_negative();
        let b_neg = self.b.is_negative();
        match (a_neg, b_neg) {
            (false, false) => true,
            (true, true) => self.is_zero(),
            _ => {
                // Opposite signs: compare a² with 2b² on the positive side.
                let a2 = &self.a * &self.a;
                let b2 = BigRational::from(BigInt::from(2)) * &self.b * &self.b;
                if a_neg {
                    b2 >= a2
                } else {
                    a2 >= b2
                }
            }
        }
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Self {
        // 1/(a + b√2) = (a - b√2)/(a² - 2b²)
        let norm = &self.a * &self.a - BigRational::from(BigInt::from(2)) * &self.b * &self.b;
        assert!(!norm.is_zero(), "inverse of zero in QSqrt2");
        QSqrt2 {
            a: &self.a / &norm,
            b: -(&self.b / &norm),
        }
    }

    pub fn scale(&self, num: i64, den: i64) -> Self {
        let f = BigRational::new(BigInt::from(num), BigInt::from(den));
        QSqrt2 {
            a: &self.a * &f,
            b: &self.b * &f,
        }
    }

    pub fn to_f64(&self) -> f64 {
        // a + b√2 suffers cancellation when the two terms have opposite
        // signs; route through the conjugate, where the denominator adds
        // same-sign terms: a + b√2 = (a² - 2b²)/(a - b√2).
        if self.a.is_positive() != self.b.is_positive() && !self.a.is_zero() && !self.b.is_zero() {
            let norm = &self.a * &self.a - BigRational::from(BigInt::from(2)) * &self.b * &self.b;
            rational_to_f64(&norm)
                / (rational_to_f64(&self.a) - rational_to_f64(&self.b) * std::f64::consts::SQRT_2)
        } else {
            rational_to_f64(&self.a) + rational_to_f64(&self.b) * std::f64::consts::SQRT_2
        }
    }
}

fn rational_to_f64(r: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

impl Add for &QSqrt2 {
    type Output = QSqrt2;
    fn add(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2 {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Sub for &QSqrt2 {
    type Output = QSqrt2;
    fn sub(self, rhs: &QSqrt2) -> QSqrt2 {
        QSqrt2 {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Mul for &QSqrt2 {
    type Output = QSqrt2;
    fn mul(self, rhs: &QSqrt2) -> QSqrt2 {
        let two = BigRational::from(BigInt::from(2));
        QSqrt2 {
            a: &self.a * &rhs.a + &two * &self.b * &rhs.b,
            b: &self.a * &rhs.b + &self.b * &rhs.a,
        }
    }
}

impl Div for &QSqrt2 {
    type Output = QSqrt2;
    #[allow(clippy::suspicious_arithmetic_impl)] // division via the field inverse
    fn div(self, rhs: &QSqrt2) -> QSqrt2 {
        self * &rhs.inv()
    }
}

impl Neg for &QSqrt2 {
    type Output = QSqrt2;
    fn neg(self) -> QSqrt2 {
        QSqrt2 {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

impl std::fmt::Display for QSqrt2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else if self.b.is_positive() {
            write!(f, "{} + {}√2", self.a, self.b)
        } else {
            write!(f, "{} - {}√2", self.a, -&self.b)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_identities() {
        let alpha = QSqrt2::alpha();
        // α² = 3 - 2√2
        let sq = &alpha * &alpha;
        assert_eq!(sq, QSqrt2::from_ints(3, -2));
        // α · α⁻¹ = 1 and α⁻¹ = √2 + 1
        assert_eq!(&alpha * &alpha.inv(), QSqrt2::one());
        assert_eq!(alpha.inv(), QSqrt2::from_ints(1, 1));
        // Floating-point agreement.
        assert!((alpha.to_f64() - crate::ALPHA).abs() < 1e-15);
        assert!((QSqrt2::alpha_pow(4).to_f64() - crate::ALPHA.powi(4)).abs() < 1e-15);
    }

    #[test]
    fn field_ops() {
        let x = QSqrt2::from_ints(2, 3);
        let y = QSqrt2::from_ints(-1, 5);
        let z = &(&x * &y) / &y;
        assert_eq!(z, x);
        assert_eq!(&(&x - &x) + &QSqrt2::zero(), QSqrt2::zero());
    }
}
