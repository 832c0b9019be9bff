//! Truncated power series with exact rational coefficients, and the binomial
//! and generating-function identities behind the Γ-family formulas.

mod identities;

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

pub use identities::{
    check_binomial_rules, check_breaking_up, check_f_to_gamma, check_alternating_central_sum, check_shifted_central_series,
    check_difference_quotient, series_primitives, verify_identities, IdentityReport, SweepRanges, Witness,
    DEFAULT_SERIES_ORDER,
};

/// `Σ_{i <= N} c_i x^i`, exact up to and including order `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// Pads or truncates `coeffs` to orders `0..=order`.
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn from_integers(coeffs: &[i64], order: usize) -> Self {
        Self::new(
            coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
            order,
        )
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![BigRational::one()], order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, i: usize) -> &BigRational {
        &self.coeffs[i]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.coeffs[..=order.min(self.order())].to_vec(), order)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Divides by `x^k`; the first `k` coefficients must vanish. The result
    /// is known to `order - k`.
    pub fn div_x_pow(&self, k: usize) -> Result<Self> {
        if k > self.order() || self.coeffs[..k].iter().any(|c| !c.is_zero()) {
            return Err(Error::Precondition(format!("series is not divisible by x^{k}")));
        }
        Ok(TruncatedSeries {
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::Precondition("series with zero constant term has no inverse".into()));
        }
        let inv0 = c0.recip();
        let mut out = vec![inv0.clone()];
        for k in 1..=self.order() {
            let s: BigRational = (1..=k).map(|i| &self.coeffs[i] * &out[k - i]).sum();
            out.push(-s * &inv0);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Square root of a series with constant term 1, by Newton iteration
    /// `y ← (y + s / y) / 2`, doubling the correct order each step.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Precondition("square root needs constant term 1".into()));
        }
        let n = self.order();
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mut y = Self::one(0);
        let mut prec = 0;
        while prec < n {
            prec = (2 * prec + 1).min(n);
            let y_ext = y.truncate(prec);
            let q = &self.truncate(prec) * &y_ext.inverse()?;
            y = (&y_ext + &q).scale(&half);
        }
        Ok(y.truncate(n))
    }

    /// `self^e` for any integer `e`; negative powers go through the inverse.
    pub fn pow(&self, e: i64) -> Result<Self> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut acc = Self::one(self.order());
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect(),
        }
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        TruncatedSeries {
            coeffs: (0..=n).map(|i| &self.coeffs[i] - &rhs.coeffs[i]).collect(),
        }
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        let n = self.order().min(rhs.order());
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                out[i + j] += a * b;
            }
        }
        TruncatedSeries { coeffs: out }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn ints(s: &TruncatedSeries) -> Vec<BigInt> {
        s.coeffs().iter().map(|c| c.to_integer()).collect()
    }

    #[test]
    fn geometric_inverse() {
        let s = TruncatedSeries::from_integers(&[1, -1], 6);
        assert_eq!(ints(&s.inverse().unwrap()), vec![BigInt::one(); 7]);
        assert!(TruncatedSeries::from_integers(&[0, 1], 3).inverse().is_err());
    }

    #[test]
    fn central_binomials_from_sqrt() {
        let s = TruncatedSeries::from_integers(&[1, -4], 5);
        let r = s.sqrt().unwrap().inverse().unwrap();
        let want: Vec<BigInt> = [1, 2, 6, 20, 70, 252].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(ints(&r), want);
    }

    #[test]
    fn sqrt_squares_back() {
        let s = TruncatedSeries::from_integers(&[1, 3, -2, 5, 0, 7, 1], 12);
        let r = s.sqrt().unwrap();
        assert_eq!(&r * &r, s);
        assert!(TruncatedSeries::from_integers(&[2, 1], 3).sqrt().is_err());
    }

    #[test]
    fn mismatched_orders_truncate() {
        let a = TruncatedSeries::one(3);
        let b = TruncatedSeries::one(5);
        assert_eq!((&a + &b).order(), 3);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!(*(&a - &b).coeff(0), rat(0));
    }

    #[test]
    fn negative_powers() {
        let s = TruncatedSeries::from_integers(&[1, -1], 8);
        let p = s.pow(-3).unwrap();
        // 1/(1-x)^3 has coefficients C(j+2, 2)
        for j in 0..=8i64 {
            assert_eq!(p.coeff(j as usize).to_integer(), BigInt::from((j + 2) * (j + 1) / 2));
        }
    }

    #[test]
    fn divide_by_x() {
        let s = TruncatedSeries::from_integers(&[0, 0, 3, 1], 5);
        let d = s.div_x_pow(2).unwrap();
        assert_eq!(d.order(), 3);
        assert_eq!(*d.coeff(0), rat(3));
        assert!(s.div_x_pow(3).is_err());
    }
}
