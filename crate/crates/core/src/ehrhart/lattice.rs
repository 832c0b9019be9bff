//! Integer coordinates for points of a sublattice `Z^n ∩ span(V)`.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::matroid::linalg::{bareiss_rank, kernel_basis, Scratch};

fn scratch_rows(rows: &[Vec<i128>], cols: usize) -> Scratch {
    let mut s = Scratch::zeros(rows.len(), cols);
    for (r, row) in rows.iter().enumerate() {
        for (c, &v) in row.iter().enumerate() {
            s.set(r, c, v);
        }
    }
    s
}

/// Rank of a list of integer vectors.
pub fn rank_of(vectors: &[Vec<i64>], n: usize) -> usize {
    let rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    bareiss_rank(scratch_rows(&rows, n))
}

/// Z-basis (as columns of an `n x k` matrix) of the integer kernel of the
/// `rows x n` matrix `a`, by unimodular column operations.
fn integer_kernel(a: &[Vec<i128>], n: usize) -> Vec<Vec<i128>> {
    let mut a: Vec<Vec<i128>> = a.to_vec();
    // u starts as the identity; columns transform alongside a
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    let col_op = |m: &mut Vec<Vec<i128>>, dst: usize, src: usize, f: i128| {
        for row in m.iter_mut() {
            row[dst] -= f * row[src];
        }
    };
    let swap = |m: &mut Vec<Vec<i128>>, x: usize, y: usize| {
        for row in m.iter_mut() {
            row.swap(x, y);
        }
    };
    let mut p = 0;
    for r in 0..a.len() {
        if p == n {
            break;
        }
        loop {
            // smallest nonzero |a[r][c]| among c >= p moves to column p
            let Some(best) = (p..n)
                .filter(|&c| a[r][c] != 0)
                .min_by_key(|&c| a[r][c].abs())
            else {
                break;
            };
            swap(&mut a, p, best);
            swap(&mut u, p, best);
            let mut done = true;
            for c in p + 1..n {
                if a[r][c] != 0 {
                    let f = Integer::div_floor(&a[r][c], &a[r][p]);
                    col_op(&mut a, c, p, f);
                    col_op(&mut u, c, p, f);
                    if a[r][c] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                p += 1;
                break;
            }
        }
    }
    (p..n).map(|c| (0..n).map(|i| u[i][c]).collect()).collect()
}

/// Integer basis `W` of `Z^n ∩ span(vectors)` and the coordinates of every
/// input vector in that basis.
#[derive(Clone, Debug)]
pub struct LatticeFrame {
    pub basis: Vec<Vec<i128>>,
    pub coords: Vec<Vec<i64>>,
}

pub fn lattice_frame(vectors: &[Vec<i64>], n: usize) -> Result<LatticeFrame> {
    let d = rank_of(vectors, n);
    if d == n {
        let basis = (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect();
        return Ok(LatticeFrame {
            basis,
            coords: vectors.to_vec(),
        });
    }
    let rows: Vec<Vec<i128>> = vectors
        .iter()
        .map(|v| v.iter().map(|&x| x as i128).collect())
        .collect();
    // normals of the span, then the saturated lattice inside it
    let normals = if rows.is_empty() {
        (0..n)
            .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
            .collect()
    } else {
        kernel_basis(&scratch_rows(&rows, n))
    };
    let basis = integer_kernel(&normals, n);
    if basis.len() != d {
        return Err(Error::Invariant(format!(
            "lattice basis has {} vectors for a span of dimension {d}",
            basis.len()
        )));
    }
    // solve W c = v on d independent rows of W
    let mut picked: Vec<usize> = Vec::new();
    for i in 0..n {
        let mut trial = picked.clone();
        trial.push(i);
        let sub: Vec<Vec<i128>> = trial
            .iter()
            .map(|&r| basis.iter().map(|b| b[r]).collect())
            .collect();
        if bareiss_rank(scratch_rows(&sub, d)) == trial.len() {
            picked = trial;
        }
        if picked.len() == d {
            break;
        }
    }
    let mut coords = Vec::with_capacity(vectors.len());
    for v in vectors {
        let c = solve_square(&basis, &picked, v)?;
        for (i, &vi) in v.iter().enumerate() {
            let back: i128 = basis.iter().zip(&c).map(|(b, &ci)| b[i] * ci as i128).sum();
            if back != vi as i128 {
                return Err(Error::Invariant("vector outside the lattice span".into()));
            }
        }
        coords.push(c);
    }
    Ok(LatticeFrame { basis, coords })
}

/// Solves `Σ_k c_k basis[k][r] = v[r]` for `r` in `rows` by fraction-free
/// Gauss-Jordan; the solution must be integral.
fn solve_square(basis: &[Vec<i128>], rows: &[usize], v: &[i64]) -> Result<Vec<i64>> {
    let d = basis.len();
    let mut a: Vec<Vec<i128>> = rows
        .iter()
        .map(|&r| {
            let mut row: Vec<i128> = basis.iter().map(|b| b[r]).collect();
            row.push(v[r] as i128);
            row
        })
        .collect();
    for col in 0..d {
        let p = (col..d)
            .find(|&r| a[r][col] != 0)
            .ok_or_else(|| Error::Invariant("singular lattice basis".into()))?;
        a.swap(col, p);
        for r in 0..d {
            if r == col || a[r][col] == 0 {
                continue;
            }
            let (piv, f) = (a[col][col], a[r][col]);
            let mut g = 0i128;
            for c in 0..=d {
                a[r][c] = a[r][c] * piv - f * a[col][c];
                g = g.gcd(&a[r][c]);
            }
            if g > 1 {
                a[r].iter_mut().for_each(|x| *x /= g);
            }
        }
    }
    (0..d)
        .map(|k| {
            let (num, den) = (a[k][d], a[k][k]);
            if num % den != 0 {
                Err(Error::Invariant("non-integral lattice coordinates".into()))
            } else {
                Ok((num / den) as i64)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_dimensional_is_identity() {
        let f = lattice_frame(&[vec![1, 0], vec![0, 1]], 2).unwrap();
        assert_eq!(f.coords, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn diagonal_line() {
        // span of (2,2) meets Z^2 in multiples of (1,1)
        let f = lattice_frame(&[vec![2, 2], vec![-2, -2]], 2).unwrap();
        assert_eq!(f.basis.len(), 1);
        let c: Vec<i64> = f.coords.iter().map(|c| c[0].abs()).collect();
        assert_eq!(c, vec![2, 2]);
    }

    #[test]
    fn plane_in_space() {
        // e1 - e2, e2 - e3 span the plane x + y + z = 0
        let vs = vec![vec![1, -1, 0], vec![0, 1, -1], vec![1, 0, -1]];
        let f = lattice_frame(&vs, 3).unwrap();
        assert_eq!(f.basis.len(), 2);
        for c in &f.coords {
            assert!(c.iter().all(|x| x.abs() <= 2));
        }
    }
}
