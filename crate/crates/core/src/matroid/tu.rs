use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::matroid::linalg::{bareiss_det, Scratch};

/// Exhaustive total-unimodularity checks run only up to this size.
pub const TU_CHECK_LIMIT: usize = 8;

/// Integer matrix with entries in {-1, 0, 1} whose columns are labeled by
/// ground-set elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TUMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i8>,
    labels: Vec<String>,
    verified_tu: bool,
}

impl TUMatrix {
    /// Builds a matrix from row vectors. Total unimodularity is checked
    /// exhaustively when `max(rows, cols) <= 8`; larger inputs are trusted
    /// and flagged unverified.
    pub fn new(rows: usize, cols: usize, data: &[Vec<i64>], labels: Vec<String>) -> Result<Self> {
        let m = Self::new_unchecked(rows, cols, data, labels)?;
        if rows.max(cols) <= TU_CHECK_LIMIT {
            m.verified()
        } else {
            Ok(m)
        }
    }

    /// Same as [`TUMatrix::new`] without the minor check.
    pub fn new_unchecked(
        rows: usize,
        cols: usize,
        data: &[Vec<i64>],
        labels: Vec<String>,
    ) -> Result<Self> {
        if data.len() != rows {
            return Err(Error::Input(format!(
                "expected {rows} rows, found {}",
                data.len()
            )));
        }
        if labels.len() != cols {
            return Err(Error::Input(format!(
                "expected {cols} labels, found {}",
                labels.len()
            )));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for (r, row) in data.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::Input(format!(
                    "row {r} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (c, &v) in row.iter().enumerate() {
                if !(-1..=1).contains(&v) {
                    return Err(Error::EntryOutOfRange {
                        row: r,
                        col: c,
                        value: v,
                    });
                }
                entries.push(v as i8);
            }
        }
        Ok(TUMatrix {
            rows,
            cols,
            entries,
            labels,
            verified_tu: false,
        })
    }

    /// Runs the exhaustive minor check and sets the verified flag.
    pub fn verified(mut self) -> Result<Self> {
        if let Some((rs, cs, d)) = self.find_bad_minor() {
            return Err(Error::Input(format!(
                "not totally unimodular: minor on rows {rs:?}, columns {cs:?} is {d}"
            )));
        }
        self.verified_tu = true;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn verified_tu(&self) -> bool {
        self.verified_tu
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.entries[r * self.cols + c] as i64
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<i64>> {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c)).collect())
            .collect()
    }

    pub(crate) fn set_labels(&mut self, labels: Vec<String>) {
        debug_assert_eq!(labels.len(), self.cols);
        self.labels = labels;
    }

    pub(crate) fn mark_verified(mut self, v: bool) -> Self {
        self.verified_tu = v;
        self
    }

    /// Dense scratch copy of the selected columns.
    pub(crate) fn scratch(&self, cols: &[usize]) -> Scratch {
        let mut s = Scratch::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                s.set(r, j, self.get(r, c) as i128);
            }
        }
        s
    }

    fn find_bad_minor(&self) -> Option<(Vec<usize>, Vec<usize>, i128)> {
        let k_max = self.rows.min(self.cols);
        for k in 1..=k_max {
            for rs in combinations(self.rows, k) {
                for cs in combinations(self.cols, k) {
                    let mut s = Scratch::zeros(k, k);
                    for (i, &r) in rs.iter().enumerate() {
                        for (j, &c) in cs.iter().enumerate() {
                            s.set(i, j, self.get(r, c) as i128);
                        }
                    }
                    let d = bareiss_det(s);
                    if d.abs() > 1 {
                        return Some((rs, cs, d));
                    }
                }
            }
        }
        None
    }

    /// Whether every square minor lies in {-1, 0, 1}, regardless of size.
    pub fn is_totally_unimodular(&self) -> bool {
        self.find_bad_minor().is_none()
    }
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = if k <= n { Some((0..k).collect()) } else { None };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        let next = {
            let c = cur.as_mut().unwrap();
            let mut i = k;
            loop {
                if i == 0 {
                    break None;
                }
                i -= 1;
                if c[i] < n - k + i {
                    c[i] += 1;
                    for j in i + 1..k {
                        c[j] = c[j - 1] + 1;
                    }
                    break Some(());
                }
            }
        };
        if next.is_none() {
            cur = None;
        }
        Some(out)
    })
}
