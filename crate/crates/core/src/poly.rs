//! Exact univariate polynomials and binomial coefficients.
//!
//! Coefficients are stored constant term first. [`IntPolynomial`] and
//! [`RatPolynomial`] share the dense [`Polynomial`] container; the Laurent
//! variant is only used as an intermediate when a closed formula carries
//! negative powers of `t` that cancel in the final sum.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Binomial coefficient with the combinatorial convention: zero unless
/// `0 <= k <= n`.
pub fn binom(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Generalized binomial `n (n-1) ... (n-k+1) / k!` for any integer `n` and
/// `k >= 0`; zero for negative `k`.
pub fn gen_binom(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= n - i;
        den *= i + 1;
    }
    num / den
}

pub fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

pub fn rat(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Dense polynomial in one variable, constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<T> {
    coeffs: Vec<T>,
}

pub type IntPolynomial = Polynomial<BigInt>;
pub type RatPolynomial = Polynomial<BigRational>;

impl<T: Clone + Zero> Polynomial<T> {
    pub fn new(mut coeffs: Vec<T>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn monomial(c: T, exp: usize) -> Self {
        let mut coeffs = vec![T::zero(); exp + 1];
        coeffs[exp] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Coefficient of `t^i`, zero past the degree.
    pub fn coeff(&self, i: usize) -> T {
        self.coeffs.get(i).cloned().unwrap_or_else(T::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval_at_one(&self) -> T
    where
        T: Add<Output = T>,
    {
        self.coeffs.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// `h_i == h_{d-i}` for all `i`, where `d` is the degree.
    pub fn is_palindromic(&self) -> bool
    where
        T: PartialEq,
    {
        let n = self.coeffs.len();
        (0..n / 2).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    pub fn shift(&self, by: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![T::zero(); by];
        coeffs.extend(self.coeffs.iter().cloned());
        Polynomial { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self
    where
        T: One + Mul<Output = T> + Add<Output = T>,
    {
        let mut acc = Self::new(vec![T::one()]);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl IntPolynomial {
    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    /// `(1 + t)^e`.
    pub fn one_plus_t_pow(e: usize) -> Self {
        Self::new((0..=e as i64).map(|k| binom(e as i64, k)).collect())
    }

    pub fn to_rational(&self) -> RatPolynomial {
        RatPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Some `r` with `h_0 <= ... <= h_r >= ... >= h_d`.
    pub fn is_unimodal(&self) -> bool {
        let c = &self.coeffs;
        let mut i = 0;
        while i + 1 < c.len() && c[i] <= c[i + 1] {
            i += 1;
        }
        while i + 1 < c.len() && c[i] >= c[i + 1] {
            i += 1;
        }
        i + 1 >= c.len()
    }

    /// Exact division by a monic-up-to-sign divisor; `None` if the remainder
    /// is nonzero or a quotient coefficient is not integral.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Option<IntPolynomial> {
        let dd = divisor.degree()?;
        if self.is_zero() {
            return Some(Self::zero());
        }
        let lead = divisor.coeffs[dd].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return None;
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = rem[i + dd].clone();
            let (q, r) = top.div_rem(&lead);
            if !r.is_zero() {
                return None;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &q * d;
            }
            quot[i] = q;
        }
        rem.iter().all(Zero::is_zero).then(|| Self::new(quot))
    }

    pub fn to_i64_vec(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .map(|c| i64::try_from(c).expect("coefficient exceeds i64"))
            .collect()
    }
}

impl RatPolynomial {
    /// The integer polynomial with the same coefficients, if all are integral.
    pub fn to_integer(&self) -> Option<IntPolynomial> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect::<Option<Vec<_>>>()
            .map(IntPolynomial::new)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}

impl<'a, T> Add for &'a Polynomial<T>
where
    T: Clone + Zero + Add<Output = T>,
{
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|i| self.coeff(i) + rhs.coeff(i))
                .collect(),
        )
    }
}

impl<'a, T> Sub for &'a Polynomial<T>
where
    T: Clone + Zero + Sub<Output = T>,
{
    type Output = Polynomial<T>;
    fn sub(self, rhs: Self) -> Polynomial<T> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new(
            (0..n)
                .map(|i| self.coeff(i) - rhs.coeff(i))
                .collect(),
        )
    }
}

impl<'a, T> Mul for &'a Polynomial<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![T::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Polynomial::new(out)
    }
}

impl<T> Add for Polynomial<T>
where
    T: Clone + Zero + Add<Output = T>,
{
    type Output = Polynomial<T>;
    fn add(self, rhs: Self) -> Polynomial<T> {
        &self + &rhs
    }
}

impl<T> Mul for Polynomial<T>
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T>,
{
    type Output = Polynomial<T>;
    fn mul(self, rhs: Self) -> Polynomial<T> {
        &self * &rhs
    }
}

impl<T> Neg for &Polynomial<T>
where
    T: Clone + Zero + Neg<Output = T>,
{
    type Output = Polynomial<T>;
    fn neg(self) -> Polynomial<T> {
        Polynomial::new(self.coeffs.iter().cloned().map(Neg::neg).collect())
    }
}

impl<T: fmt::Display + Zero> fmt::Display for Polynomial<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}t")?,
                _ => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

/// Laurent polynomial with rational coefficients: `Σ c_k t^(low + k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolynomial {
    low: i64,
    coeffs: Vec<BigRational>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        LaurentPolynomial {
            low: 0,
            coeffs: Vec::new(),
        }
    }

    pub fn monomial(c: BigRational, exp: i64) -> Self {
        LaurentPolynomial {
            low: exp,
            coeffs: vec![c],
        }
        .normalized()
    }

    pub fn from_int_poly(p: &IntPolynomial) -> Self {
        LaurentPolynomial {
            low: 0,
            coeffs: p
                .coeffs()
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    /// `(c t)^e` for any integer `e`.
    pub fn scaled_t_pow(c: i64, e: i64) -> Self {
        let base = rat(c);
        let coeff = if e >= 0 {
            num_traits::pow(base, e as usize)
        } else {
            num_traits::pow(base, (-e) as usize).recip()
        };
        Self::monomial(coeff, e)
    }

    fn normalized(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lowest_exponent(&self) -> i64 {
        self.low
    }

    /// The ordinary integer polynomial, if there are no negative powers and
    /// every coefficient is integral.
    pub fn to_int_polynomial(&self) -> Option<IntPolynomial> {
        if self.is_zero() {
            return Some(IntPolynomial::zero());
        }
        if self.low < 0 {
            return None;
        }
        let mut out = vec![BigInt::zero(); self.low as usize];
        for c in &self.coeffs {
            if !c.is_integer() {
                return None;
            }
            out.push(c.to_integer());
        }
        Some(IntPolynomial::new(out))
    }
}

impl Add for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn add(self, rhs: Self) -> LaurentPolynomial {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = (self.low + self.coeffs.len() as i64).max(rhs.low + rhs.coeffs.len() as i64);
        let mut coeffs = vec![BigRational::zero(); (high - low) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - low) as usize + i] += c;
        }
        for (i, c) in rhs.coeffs.iter().enumerate() {
            coeffs[(rhs.low - low) as usize + i] += c;
        }
        LaurentPolynomial { low, coeffs }.normalized()
    }
}

impl Mul for &LaurentPolynomial {
    type Output = LaurentPolynomial;
    fn mul(self, rhs: Self) -> LaurentPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPolynomial::zero();
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        LaurentPolynomial {
            low: self.low + rhs.low,
            coeffs,
        }
        .normalized()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_follow_zero_convention() {
        assert_eq!(binom(5, 2), big(10));
        assert_eq!(binom(5, 6), big(0));
        assert_eq!(binom(-1, -1), big(0));
        assert_eq!(binom(0, 0), big(1));
        assert_eq!(gen_binom(-1, 3), big(-1));
        assert_eq!(gen_binom(-2, 2), big(3));
        assert_eq!(gen_binom(4, 2), big(6));
    }

    #[test]
    fn unimodality() {
        assert!(IntPolynomial::from_i64(&[1, 4, 1]).is_unimodal());
        assert!(IntPolynomial::from_i64(&[1, 1, 1]).is_unimodal());
        assert!(!IntPolynomial::from_i64(&[1, 0, 1]).is_unimodal());
        assert!(IntPolynomial::from_i64(&[3, 2, 1]).is_unimodal());
    }

    #[test]
    fn exact_division() {
        let p = IntPolynomial::from_i64(&[1, 5, 5, 1]);
        let q = p.div_exact(&IntPolynomial::from_i64(&[1, 1])).unwrap();
        assert_eq!(q, IntPolynomial::from_i64(&[1, 4, 1]));
        assert!(IntPolynomial::from_i64(&[1, 4, 1])
            .div_exact(&IntPolynomial::from_i64(&[1, 1]))
            .is_none());
    }

    #[test]
    fn laurent_negative_powers_cancel() {
        let a = LaurentPolynomial::scaled_t_pow(2, -1);
        let b = LaurentPolynomial::scaled_t_pow(2, 1);
        let prod = &a * &b;
        assert_eq!(prod.to_int_polynomial(), Some(IntPolynomial::from_i64(&[1])));
        assert!(a.to_int_polynomial().is_none());
    }

    #[test]
    fn display() {
        let p = IntPolynomial::from_i64(&[1, 10, 22]);
        assert_eq!(p.to_string(), "1 + 10t + 22t^2");
    }
}
