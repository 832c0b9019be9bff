//! Range sweeps over the binomial and generating-function identities. Each
//! sweep returns an [`IdentityReport`] listing every parameter tuple where
//! the two sides differ.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::TruncatedSeries;
use crate::gamma_family::s_sum;
use crate::poly::{binom, gen_binom, IntPolynomial};

pub const DEFAULT_SERIES_ORDER: usize = 64;

/// Where and how an identity failed.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub at: BTreeMap<&'static str, i64>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub identity: &'static str,
    pub range: BTreeMap<&'static str, [i64; 2]>,
    pub checked: u64,
    pub violations: Vec<Witness>,
}

impl IdentityReport {
    fn new(identity: &'static str, range: &[(&'static str, i64, i64)]) -> Self {
        IdentityReport {
            identity,
            range: range.iter().map(|&(k, lo, hi)| (k, [lo, hi])).collect(),
            checked: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn compare<T: PartialEq + ToString>(&mut self, at: &[(&'static str, i64)], lhs: T, rhs: T) {
        self.checked += 1;
        if lhs != rhs {
            self.violations.push(Witness {
                at: at.iter().copied().collect(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        }
    }

    fn merge(&mut self, other: IdentityReport) {
        self.checked += other.checked;
        self.violations.extend(other.violations);
    }
}

/// Pascal triangle with the zero convention outside `0 <= k <= n`.
struct Pascal(Vec<Vec<BigInt>>);

impl Pascal {
    fn new(max: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
        for n in 1..=max {
            let prev = &rows[n - 1];
            let mut row = vec![BigInt::one(); n + 1];
            for k in 1..n {
                row[k] = &prev[k - 1] + &prev[k];
            }
            rows.push(row);
        }
        Pascal(rows)
    }

    fn get(&self, n: i64, k: i64) -> BigInt {
        if n < 0 || k < 0 || k > n {
            return BigInt::zero();
        }
        self.0[n as usize][k as usize].clone()
    }
}

/// The two series identities used throughout: coefficient `j` of
/// `1/(1-x)^(k+1)` is `C(j+k, j)` for `0 <= k <= kmax`, and coefficient `j`
/// of `(1-4x)^(-1/2) ((1 - √(1-4x)) / (2x))^m` is `C(2j+m, j)` for
/// `m ∈ [mmin, mmax]` (generalized binomial for negative upper entries).
pub fn series_primitives(order: usize, kmax: i64, mmin: i64, mmax: i64) -> Vec<IdentityReport> {
    let o = order as i64;
    let mut geo = IdentityReport::new("geometric_powers", &[("k", 0, kmax), ("j", 0, o)]);
    let one_minus_x = TruncatedSeries::from_integers(&[1, -1], order);
    for k in 0..=kmax {
        let s = one_minus_x.pow(-(k + 1)).expect("unit constant term");
        for j in 0..=o {
            geo.compare(
                &[("k", k), ("j", j)],
                s.coeff(j as usize).clone(),
                BigRational::from_integer(binom(j + k, j)),
            );
        }
    }

    let mut cat = IdentityReport::new("catalan_powers", &[("m", mmin, mmax), ("j", 0, o)]);
    // one extra order: dividing by x loses one
    let s = TruncatedSeries::from_integers(&[1, -4], order + 1);
    let root = s.sqrt().expect("constant term 1");
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let l = (&TruncatedSeries::one(order + 1) - &root)
        .div_x_pow(1)
        .expect("1 - √(1-4x) vanishes at 0")
        .scale(&half);
    let front = root.inverse().expect("unit constant term").truncate(order);
    for m in mmin..=mmax {
        let series = &front * &l.pow(m).expect("L(0) = 1");
        for j in 0..=o {
            cat.compare(
                &[("m", m), ("j", j)],
                series.coeff(j as usize).clone(),
                BigRational::from_integer(gen_binom(2 * j + m, j)),
            );
        }
    }
    vec![geo, cat]
}

/// The three binomial summation rules, each for every parameter in
/// `0..=max`; the second only where `b >= a`.
pub fn check_binomial_rules(max: i64) -> Vec<IdentityReport> {
    let pascal = Pascal::new((4 * max + 2) as usize);
    let c = |n, k| pascal.get(n, k);

    let mut vandermonde = IdentityReport::new("binom_vandermonde", &[("a", 0, max), ("b", 0, max), ("c", 0, max)]);
    for a in 0..=max {
        for b in 0..=max {
            for cc in 0..=max {
                let lhs: BigInt = (0..=cc).map(|i| c(a, i) * c(b, cc - i)).sum();
                vandermonde.compare(&[("a", a), ("b", b), ("c", cc)], lhs, c(a + b, cc));
            }
        }
    }

    let upper = (0..=max)
        .into_par_iter()
        .map(|a| {
            let mut r = IdentityReport::new("", &[]);
            for b in a..=max {
                for cc in 0..=max {
                    for d in 0..=max {
                        let lhs: BigInt = (0..=cc).map(|i| c(a + i, b) * c(cc - i, d)).sum();
                        r.compare(
                            &[("a", a), ("b", b), ("c", cc), ("d", d)],
                            lhs,
                            c(a + cc + 1, b + d + 1),
                        );
                    }
                }
            }
            r
        })
        .collect::<Vec<_>>();
    let mut upper_sum = IdentityReport::new(
        "binom_upper_sum",
        &[("a", 0, max), ("b", 0, max), ("c", 0, max), ("d", 0, max)],
    );
    for r in upper {
        upper_sum.merge(r);
    }

    let mut trinomial = IdentityReport::new("binom_trinomial_revision", &[("a", 0, max), ("b", 0, max), ("c", 0, max)]);
    for a in 0..=max {
        for b in 0..=max {
            for cc in 0..=max {
                trinomial.compare(
                    &[("a", a), ("b", b), ("c", cc)],
                    c(a, b) * c(b, cc),
                    c(a - cc, b - cc) * c(a, cc),
                );
            }
        }
    }
    vec![vandermonde, upper_sum, trinomial]
}

/// The two tree-count decompositions, for `1 <= n <= nmax`:
/// with `q >= 1` and `p+q <= 2ℓ <= n`,
/// `C(n-p-q, 2ℓ-p-q) Σ_i C(n-1-i,p) C(i,q-1) + C(n-1-p-q, 2ℓ-1-p-q) Σ_i C(n-1-i,p) C(i,q)
///  = C(n,2ℓ) C(2ℓ+1,p+q+1)`;
/// with `p+q <= 2ℓ <= n-1`,
/// `C(n-1-p-q, 2ℓ-p-q) Σ_i C(n-1-i,p) C(i,q) = C(n,2ℓ+1) C(2ℓ+1,p+q+1)`.
pub fn check_breaking_up(nmax: i64) -> Vec<IdentityReport> {
    let mut first = IdentityReport::new("breaking_up_even", &[("n", 1, nmax)]);
    let mut second = IdentityReport::new("breaking_up_odd", &[("n", 1, nmax)]);
    for n in 1..=nmax {
        for l in 0..=n / 2 {
            for p in 0..=2 * l {
                for q in 0..=2 * l - p {
                    let at = [("n", n), ("l", l), ("p", p), ("q", q)];
                    let sum_q = |qq: i64| -> BigInt { (0..n).map(|i| binom(n - 1 - i, p) * binom(i, qq)).sum() };
                    if q >= 1 {
                        let lhs = binom(n - p - q, 2 * l - p - q) * sum_q(q - 1)
                            + binom(n - 1 - p - q, 2 * l - 1 - p - q) * sum_q(q);
                        first.compare(&at, lhs, binom(n, 2 * l) * binom(2 * l + 1, p + q + 1));
                    }
                    if 2 * l < n {
                        let lhs = binom(n - 1 - p - q, 2 * l - p - q) * sum_q(q);
                        second.compare(&at, lhs, binom(n, 2 * l + 1) * binom(2 * l + 1, p + q + 1));
                    }
                }
            }
        }
    }
    vec![first, second]
}

/// `Σ_{a=0}^ℓ (-1)^(k-a) 4^(ℓ-a) C(2a,a) C(ℓ-k,ℓ-a) = C(ℓ,k) C(2ℓ,ℓ) / C(2ℓ,2k)`
/// for `0 <= k <= ℓ <= lmax`, plus integrality of the right side.
pub fn check_alternating_central_sum(lmax: i64) -> Vec<IdentityReport> {
    let mut sums = IdentityReport::new("alternating_central_sum", &[("l", 0, lmax)]);
    let mut integral = IdentityReport::new("alternating_central_sum_integrality", &[("l", 0, lmax)]);
    for l in 0..=lmax {
        for k in 0..=l {
            let lhs: BigInt = (0..=l)
                .map(|a| {
                    let sign = if (k - a).is_even() { 1 } else { -1 };
                    BigInt::from(sign) * (BigInt::from(4).pow((l - a) as u32)) * binom(2 * a, a) * binom(l - k, l - a)
                })
                .sum();
            let rhs = BigRational::new(binom(l, k) * binom(2 * l, l), binom(2 * l, 2 * k));
            let at = [("l", l), ("k", k)];
            integral.compare(&at, rhs.is_integer(), true);
            sums.compare(&at, BigRational::from_integer(lhs), rhs);
        }
    }
    vec![sums, integral]
}

/// Series coefficients of `C(2k,k) x^k / (1-4x)^(k+3/2)` against
/// `(2ℓ+1)/(2k+1) C(ℓ,k) C(2ℓ,ℓ)` for `k <= kmax`, `ℓ <= order`.
pub fn check_shifted_central_series(kmax: i64, order: usize) -> IdentityReport {
    let mut r = IdentityReport::new("shifted_central_series", &[("k", 0, kmax), ("l", 0, order as i64)]);
    let s = TruncatedSeries::from_integers(&[1, -4], order);
    let inv_root = s.sqrt().expect("constant term 1").inverse().expect("unit constant term");
    for k in 0..=kmax {
        let body = &s.pow(-(k + 1)).expect("unit constant term") * &inv_root;
        let lead = BigRational::from_integer(binom(2 * k, k));
        for l in 0..=order as i64 {
            let lhs = if l < k {
                BigRational::zero()
            } else {
                body.coeff((l - k) as usize) * &lead
            };
            let rhs = BigRational::new(BigInt::from(2 * l + 1), BigInt::from(2 * k + 1))
                * BigRational::from_integer(binom(l, k) * binom(2 * l, l));
            r.compare(&[("k", k), ("l", l)], lhs, rhs);
        }
    }
    r
}

/// `((x+1)^(2ℓ+1) - (y+1)^(2ℓ+1)) / (x - y)` by exact division, compared
/// with `Σ_{p,q} C(2ℓ+1, p+q+1) x^p y^q`, for `ℓ <= lmax`.
pub fn check_difference_quotient(lmax: i64) -> IdentityReport {
    let mut r = IdentityReport::new("difference_quotient", &[("l", 0, lmax)]);
    for l in 0..=lmax {
        let d = (2 * l + 1) as usize;
        // numerator as a polynomial in x with coefficients in Z[y]
        let mut num: Vec<Vec<BigInt>> = (0..=d)
            .map(|i| {
                let mut c = vec![BigInt::zero(); d + 1];
                c[0] = binom(d as i64, i as i64);
                c
            })
            .collect();
        for j in 0..=d {
            num[0][j] -= binom(d as i64, j as i64);
        }
        // synthetic division by x - y
        let mut quot: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); d + 1]; d];
        let mut carry = vec![BigInt::zero(); d + 1];
        for i in (0..=d).rev() {
            let mut c = num[i].clone();
            for j in 1..=d {
                c[j] += &carry[j - 1];
            }
            if i == 0 {
                let exact = c.iter().all(Zero::is_zero);
                r.compare(&[("l", l), ("remainder", 0)], exact, true);
            } else {
                quot[i - 1] = c.clone();
                carry = c;
            }
        }
        for p in 0..d {
            for q in 0..=d {
                let want = binom(d as i64, (p + q + 1) as i64);
                r.compare(&[("l", l), ("p", p as i64), ("q", q as i64)], quot[p][q].clone(), want);
            }
        }
    }
    r
}

/// `Σ_{p+q<=2ℓ} C(2ℓ+1,p+q+1) f_{p,q,ℓ}(t) = Σ_a C(2a,a) t^a (t+1)^(4ℓ-2a)`
/// as polynomials, for `ℓ <= lmax`.
pub fn check_f_to_gamma(lmax: i64) -> IdentityReport {
    let mut r = IdentityReport::new("f_to_gamma", &[("l", 0, lmax)]);
    for l in 0..=lmax {
        let lhs = s_sum(l as usize);
        let mut rhs = IntPolynomial::zero();
        for a in 0..=l {
            let term = IntPolynomial::monomial(binom(2 * a, a), a as usize);
            rhs = &rhs + &(&term * &IntPolynomial::one_plus_t_pow((4 * l - 2 * a) as usize));
        }
        if lhs != rhs {
            let first = (0..=4 * l as usize).find(|&i| lhs.coeff(i) != rhs.coeff(i));
            r.checked += 1;
            r.violations.push(Witness {
                at: [("l", l), ("first_differing_degree", first.map_or(-1, |i| i as i64))]
                    .into_iter()
                    .collect(),
                lhs: lhs.to_string(),
                rhs: rhs.to_string(),
            });
        } else {
            r.checked += 1;
        }
    }
    r
}

/// Ranges for the full identity sweep.
#[derive(Clone, Copy, Debug)]
pub struct SweepRanges {
    pub binom_max: i64,
    pub nmax: i64,
    pub sum_lmax: i64,
    pub series_order: usize,
    pub f_lmax: i64,
}

impl Default for SweepRanges {
    fn default() -> Self {
        SweepRanges {
            binom_max: 12,
            nmax: 12,
            sum_lmax: 10,
            series_order: DEFAULT_SERIES_ORDER,
            f_lmax: 8,
        }
    }
}

/// Every identity sweep, in a fixed order.
pub fn verify_identities(r: SweepRanges) -> Vec<IdentityReport> {
    let mut out = series_primitives(r.series_order, 8, -3, 6);
    out.extend(check_binomial_rules(r.binom_max));
    out.extend(check_breaking_up(r.nmax));
    out.extend(check_alternating_central_sum(r.sum_lmax));
    out.push(check_shifted_central_series(r.sum_lmax, r.series_order));
    out.push(check_difference_quotient(r.sum_lmax));
    out.push(check_f_to_gamma(r.f_lmax));
    out
}
