//! Small exact integer linear algebra over column selections.

use num_integer::Integer;

/// Row-major dense integer matrix used as scratch space.
#[derive(Clone, Debug)]
pub(crate) struct Scratch {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i128>,
}

impl Scratch {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Scratch {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    #[inline]
    pub fn at(&self, r: usize, c: usize) -> i128 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: i128) {
        self.data[r * self.cols + c] = v;
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Rank by fraction-free (Bareiss) elimination. Every intermediate value is
/// a minor of the input, so totally unimodular inputs never leave {-1,0,1}.
pub(crate) fn bareiss_rank(mut m: Scratch) -> usize {
    let mut rank = 0;
    let mut prev = 1i128;
    for col in 0..m.cols {
        if rank == m.rows {
            break;
        }
        let Some(p) = (rank..m.rows).find(|&r| m.at(r, col) != 0) else {
            continue;
        };
        m.swap_rows(p, rank);
        let piv = m.at(rank, col);
        for r in rank + 1..m.rows {
            let f = m.at(r, col);
            for c in col..m.cols {
                let v = (m.at(r, c) * piv - f * m.at(rank, c)) / prev;
                m.set(r, c, v);
            }
        }
        prev = piv;
        rank += 1;
    }
    rank
}

/// Determinant of a square matrix by Bareiss elimination.
pub(crate) fn bareiss_det(mut m: Scratch) -> i128 {
    debug_assert_eq!(m.rows, m.cols);
    let n = m.rows;
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| m.at(r, k) != 0) else {
            return 0;
        };
        if p != k {
            m.swap_rows(p, k);
            sign = -sign;
        }
        let piv = m.at(k, k);
        for r in k + 1..n {
            for c in k + 1..n {
                let v = (m.at(r, c) * piv - m.at(r, k) * m.at(k, c)) / prev;
                m.set(r, c, v);
            }
            m.set(r, k, 0);
        }
        prev = piv;
    }
    if n == 0 {
        1
    } else {
        sign * m.at(n - 1, n - 1)
    }
}

/// A primitive integer vector spanning the kernel of `m`, which must have a
/// one-dimensional null space.
pub(crate) fn kernel_vector(m: &Scratch) -> Option<Vec<i128>> {
    let mut basis = kernel_basis(m);
    if basis.len() == 1 {
        basis.pop()
    } else {
        None
    }
}

/// Primitive integer vectors spanning the rational kernel of `m`, one per
/// free column of its reduced row echelon form.
pub(crate) fn kernel_basis(m: &Scratch) -> Vec<Vec<i128>> {
    // Reduced row echelon form with integer rows kept primitive.
    let mut a = m.clone();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..a.cols {
        if row == a.rows {
            break;
        }
        let Some(p) = (row..a.rows).find(|&r| a.at(r, col) != 0) else {
            continue;
        };
        a.swap_rows(p, row);
        for r in 0..a.rows {
            if r == row || a.at(r, col) == 0 {
                continue;
            }
            let piv = a.at(row, col);
            let f = a.at(r, col);
            let mut g = 0i128;
            for c in 0..a.cols {
                let v = a.at(r, c) * piv - f * a.at(row, c);
                a.set(r, c, v);
                g = g.gcd(&v);
            }
            if g > 1 {
                for c in 0..a.cols {
                    a.set(r, c, a.at(r, c) / g);
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut l = 1i128;
    for (i, &p) in pivots.iter().enumerate() {
        l = l.lcm(&a.at(i, p).abs());
    }
    (0..a.cols)
        .filter(|c| !pivots.contains(c))
        .map(|f| {
            // x_f = L, x_{p_i} = -a[i][f] * L / a[i][p_i]
            let mut x = vec![0i128; a.cols];
            x[f] = l;
            for (i, &p) in pivots.iter().enumerate() {
                x[p] = -a.at(i, f) * l / a.at(i, p);
            }
            let g = x.iter().fold(0i128, |g, v| g.gcd(v));
            if g > 1 {
                x.iter_mut().for_each(|v| *v /= g);
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_rows(rows: &[&[i128]]) -> Scratch {
        let mut s = Scratch::zeros(rows.len(), rows[0].len());
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                s.set(r, c, v);
            }
        }
        s
    }

    #[test]
    fn rank_and_det() {
        let m = from_rows(&[&[1, 0, 1], &[0, 1, 1]]);
        assert_eq!(bareiss_rank(m), 2);
        let m = from_rows(&[&[1, 1], &[1, 1]]);
        assert_eq!(bareiss_rank(m.clone()), 1);
        assert_eq!(bareiss_det(m), 0);
        let m = from_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(bareiss_det(m), -1);
        let m = from_rows(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(bareiss_det(m), 18);
    }

    #[test]
    fn kernel_of_triangle() {
        // columns e1-e2, e2-e3, e1-e3 with row 3 dropped
        let m = from_rows(&[&[1, 0, 1], &[-1, 1, 0]]);
        let x = kernel_vector(&m).unwrap();
        let scaled: Vec<i128> = if x[0] < 0 { x.iter().map(|v| -v).collect() } else { x };
        assert_eq!(scaled, vec![1, 1, -1]);
    }
}
