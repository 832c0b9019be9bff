//! Exact linear programs over `{λ >= 0, Vλ = x}` by integer-preserving
//! simplex pivots (every tableau entry is a subdeterminant, so `i128` never
//! sees fractions). Bland's rule rules out cycling.

use num_integer::Integer;

/// Tableau with rows `0..m` for constraints and row `m` for the objective.
/// Actual values are `entry / den`. The last column holds the right-hand
/// side (negated objective value in the objective row).
struct Tableau {
    m: usize,
    cols: usize,
    data: Vec<i128>,
    den: i128,
    basis: Vec<usize>,
}

impl Tableau {
    #[inline]
    fn at(&self, r: usize, c: usize) -> i128 {
        self.data[r * (self.cols + 1) + c]
    }

    #[inline]
    fn rhs(&self, r: usize) -> i128 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.cols + 1;
        let p = self.at(r, c);
        debug_assert!(p > 0);
        for i in 0..=self.m {
            if i == r {
                continue;
            }
            let f = self.at(i, c);
            for j in 0..w {
                let v = self.data[i * w + j]
                    .checked_mul(p)
                    .and_then(|a| a.checked_sub(f.checked_mul(self.data[r * w + j])?))
                    .expect("simplex entry overflow");
                debug_assert_eq!(v % self.den, 0);
                self.data[i * w + j] = v / self.den;
            }
        }
        self.den = p;
        self.basis[r] = c;
    }

    /// Runs Bland's rule on the current objective row, ignoring columns for
    /// which `allowed` is false. Returns false if unbounded.
    fn optimize(&mut self, allowed: impl Fn(usize) -> bool) -> bool {
        loop {
            let Some(c) = (0..self.cols).find(|&j| allowed(j) && self.at(self.m, j) < 0) else {
                return true;
            };
            let mut best: Option<usize> = None;
            for i in 0..self.m {
                let a = self.at(i, c);
                if a <= 0 {
                    continue;
                }
                best = match best {
                    None => Some(i),
                    Some(b) => {
                        // rhs_i / a  vs  rhs_b / a_b
                        let lhs = self.rhs(i) * self.at(b, c);
                        let rhs = self.rhs(b) * a;
                        if lhs < rhs || (lhs == rhs && self.basis[i] < self.basis[b]) {
                            Some(i)
                        } else {
                            Some(b)
                        }
                    }
                };
            }
            let Some(r) = best else {
                return false;
            };
            self.pivot(r, c);
        }
    }
}

/// Shared constraint matrix `V` (`rows x n`) for repeated solves.
#[derive(Clone, Debug)]
pub struct PointLp {
    rows: usize,
    n: usize,
    v: Vec<i64>,
}

/// Outcome of minimizing `Σλ` subject to `Vλ = x, λ >= 0`: the minimum as a
/// fraction `num / den` with `den > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Gauge {
    pub num: i128,
    pub den: i128,
}

impl Gauge {
    /// Smallest integer `m` with `num / den <= m`.
    pub fn ceil(&self) -> i128 {
        Integer::div_ceil(&self.num, &self.den)
    }
}

impl PointLp {
    /// `columns` are the vectors `V_j`.
    pub fn new(columns: &[Vec<i64>]) -> Self {
        let rows = columns.first().map_or(0, Vec::len);
        let n = columns.len();
        let mut v = vec![0i64; rows * n];
        for (j, col) in columns.iter().enumerate() {
            for (i, &x) in col.iter().enumerate() {
                v[i * n + j] = x;
            }
        }
        PointLp { rows, n, v }
    }

    /// Phase one with the extra row `Σλ = total` when `total` is given.
    /// Returns the feasible tableau or `None`.
    fn phase_one(&self, x: &[i64], total: Option<i64>) -> Option<Tableau> {
        let m = self.rows + usize::from(total.is_some());
        let cols = self.n + m;
        let w = cols + 1;
        let mut data = vec![0i128; (m + 1) * w];
        for i in 0..m {
            let (row, b): (Vec<i128>, i128) = if i < self.rows {
                (
                    (0..self.n).map(|j| self.v[i * self.n + j] as i128).collect(),
                    x[i] as i128,
                )
            } else {
                (vec![1; self.n], total.unwrap() as i128)
            };
            let s = if b < 0 { -1 } else { 1 };
            for j in 0..self.n {
                data[i * w + j] = s * row[j];
            }
            data[i * w + self.n + i] = 1;
            data[i * w + cols] = s * b;
        }
        // objective: minimize the artificial sum
        for j in 0..self.n {
            data[m * w + j] = -(0..m).map(|i| data[i * w + j]).sum::<i128>();
        }
        data[m * w + cols] = -(0..m).map(|i| data[i * w + cols]).sum::<i128>();
        let mut t = Tableau {
            m,
            cols,
            data,
            den: 1,
            basis: (self.n..self.n + m).collect(),
        };
        t.optimize(|_| true);
        if t.rhs(m) != 0 {
            return None;
        }
        // drive zero-level artificials out of the basis
        for r in 0..m {
            if t.basis[r] < self.n {
                continue;
            }
            let Some(c) = (0..self.n).find(|&j| t.at(r, j) != 0) else {
                continue;
            };
            if t.at(r, c) < 0 {
                for j in 0..=cols {
                    t.data[r * w + j] = -t.data[r * w + j];
                }
            }
            t.pivot(r, c);
        }
        Some(t)
    }

    /// Whether `x = Vλ` for some `λ >= 0` with `Σλ = total`.
    pub fn feasible_with_total(&self, x: &[i64], total: i64) -> bool {
        self.phase_one(x, Some(total)).is_some()
    }

    /// `min Σλ` over `Vλ = x, λ >= 0`, or `None` if infeasible.
    pub fn gauge(&self, x: &[i64]) -> Option<Gauge> {
        let mut t = self.phase_one(x, None)?;
        let m = t.m;
        let w = t.cols + 1;
        let n = self.n;
        // phase two objective Σλ, written in reduced form
        for j in 0..w {
            let mut v = if j < n { t.den } else { 0 };
            for i in 0..m {
                if t.basis[i] < n {
                    v -= t.data[i * w + j];
                }
            }
            t.data[m * w + j] = v;
        }
        let ok = t.optimize(|j| j < n);
        debug_assert!(ok, "Σλ is bounded below by zero");
        let num = -t.rhs(m);
        let den = t.den;
        let g = num.gcd(&den);
        Some(Gauge {
            num: num / g,
            den: den / g,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hexagon() -> PointLp {
        let cols = [[1, 0], [0, 1], [1, 1]];
        let mut all: Vec<Vec<i64>> = Vec::new();
        for c in cols {
            all.push(c.to_vec());
            all.push(c.iter().map(|v| -v).collect());
        }
        PointLp::new(&all)
    }

    #[test]
    fn hexagon_gauge() {
        let lp = hexagon();
        assert_eq!(lp.gauge(&[0, 0]).unwrap(), Gauge { num: 0, den: 1 });
        assert_eq!(lp.gauge(&[1, 1]).unwrap().ceil(), 1);
        assert_eq!(lp.gauge(&[1, -1]).unwrap(), Gauge { num: 2, den: 1 });
        assert_eq!(lp.gauge(&[2, -1]).unwrap().ceil(), 3);
    }

    #[test]
    fn fractional_gauge() {
        // segment from -2 to 2 in steps: conv{±2}
        let lp = PointLp::new(&[vec![2], vec![-2]]);
        assert_eq!(lp.gauge(&[1]).unwrap(), Gauge { num: 1, den: 2 });
        assert_eq!(lp.gauge(&[3]).unwrap().ceil(), 2);
    }

    #[test]
    fn feasibility_with_total() {
        let lp = PointLp::new(&[vec![0], vec![1]]);
        assert!(lp.feasible_with_total(&[1], 1));
        assert!(lp.feasible_with_total(&[2], 3));
        assert!(!lp.feasible_with_total(&[2], 1));
        assert!(!lp.feasible_with_total(&[-1], 4));
        assert!(PointLp::new(&[vec![1, 1]]).gauge(&[1, 0]).is_none());
    }
}
