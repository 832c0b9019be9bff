//! Regular matroids represented by totally unimodular matrices.
//!
//! Elements are identified by column position; element sets are `u64`
//! bitmasks, which caps the ground set at 64 elements.

mod graph;
pub(crate) mod linalg;
mod tu;

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

pub use graph::{Cycle, Graph};
pub use tu::{TUMatrix, TU_CHECK_LIMIT};
pub(crate) use tu::combinations;

use crate::error::{Error, Result};
use linalg::{bareiss_rank, kernel_vector};

pub type ElementSet = u64;

pub const MAX_ELEMENTS: usize = 64;

/// Circuits are re-derived from scratch to validate a parallel connection
/// only up to this many elements.
const GLUE_CHECK_LIMIT: usize = 20;

/// A circuit with signs making the signed column sum vanish. The weakest
/// element (smallest position) always carries `+1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedCircuit {
    elements: Vec<usize>,
    signs: Vec<i8>,
    mask: ElementSet,
}

impl SignedCircuit {
    /// Sorts by element and flips the global sign so the weakest element is
    /// positive.
    pub fn new(mut pairs: Vec<(usize, i8)>) -> Self {
        pairs.sort_unstable();
        let flip = if pairs.first().is_some_and(|p| p.1 < 0) { -1 } else { 1 };
        let elements: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let signs = pairs.iter().map(|p| p.1 * flip).collect();
        let mask = elements.iter().fold(0, |m, &e| m | 1 << e);
        SignedCircuit {
            elements,
            signs,
            mask,
        }
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn mask(&self) -> ElementSet {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn weakest(&self) -> usize {
        self.elements[0]
    }

    pub fn sign_of(&self, e: usize) -> Option<i8> {
        self.elements
            .iter()
            .position(|&f| f == e)
            .map(|i| self.signs[i])
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, i8)> + '_ {
        self.elements.iter().copied().zip(self.signs.iter().copied())
    }
}

/// Old and new labels of elements renamed to avoid a collision.
pub type Relabel = Vec<(String, String)>;

/// `[I | D]` form with the column order used to reach it: column `k` of the
/// standard matrix is element `order[k]` of the source.
#[derive(Clone, Debug)]
pub struct StandardForm {
    pub matroid: Matroid,
    pub order: Vec<usize>,
    pub rank: usize,
}

#[derive(Clone, Debug)]
pub struct Matroid {
    repr: TUMatrix,
    rank: OnceLock<usize>,
    circuits: OnceLock<Vec<SignedCircuit>>,
    bases: OnceLock<Vec<ElementSet>>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.repr == other.repr
    }
}

impl Matroid {
    pub fn new(repr: TUMatrix) -> Result<Self> {
        if repr.cols() > MAX_ELEMENTS {
            return Err(Error::Input(format!(
                "{} elements exceed the supported {MAX_ELEMENTS}",
                repr.cols()
            )));
        }
        Ok(Matroid {
            repr,
            rank: OnceLock::new(),
            circuits: OnceLock::new(),
            bases: OnceLock::new(),
        })
    }

    /// Builds from row vectors with labels `e1, e2, ...`.
    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let labels = (1..=cols).map(|i| format!("e{i}")).collect();
        Self::new(TUMatrix::new(rows.len(), cols, rows, labels)?)
    }

    pub(crate) fn with_circuits(self, circuits: Vec<SignedCircuit>) -> Self {
        let _ = self.circuits.set(circuits);
        self
    }

    pub fn representation(&self) -> &TUMatrix {
        &self.repr
    }

    /// Ground-set size.
    pub fn len(&self) -> usize {
        self.repr.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.repr.cols() == 0
    }

    pub fn ground(&self) -> ElementSet {
        full_mask(self.len())
    }

    pub fn labels(&self) -> &[String] {
        self.repr.labels()
    }

    pub fn label(&self, e: usize) -> &str {
        &self.repr.labels()[e]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels()
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    pub fn mask_of(&self, labels: &[&str]) -> Result<ElementSet> {
        labels
            .iter()
            .try_fold(0, |m, l| Ok(m | 1 << self.index_of(l)?))
    }

    pub fn column(&self, e: usize) -> Vec<i64> {
        self.repr.column(e)
    }

    pub fn rank(&self) -> usize {
        *self.rank.get_or_init(|| {
            let cols: Vec<usize> = (0..self.len()).collect();
            bareiss_rank(self.repr.scratch(&cols))
        })
    }

    pub fn rank_of(&self, set: ElementSet) -> usize {
        bareiss_rank(self.repr.scratch(&elements_of(set)))
    }

    pub fn is_independent(&self, set: ElementSet) -> bool {
        self.rank_of(set) == set.count_ones() as usize
    }

    pub fn is_loop(&self, e: usize) -> bool {
        (0..self.repr.rows()).all(|r| self.repr.get(r, e) == 0)
    }

    pub fn is_coloop(&self, e: usize) -> bool {
        !self.is_loop(e) && self.rank_of(self.ground() & !(1 << e)) < self.rank()
    }

    pub fn loops(&self) -> ElementSet {
        (0..self.len())
            .filter(|&e| self.is_loop(e))
            .fold(0, |m, e| m | 1 << e)
    }

    pub fn coloops(&self) -> ElementSet {
        (0..self.len())
            .filter(|&e| self.is_coloop(e))
            .fold(0, |m, e| m | 1 << e)
    }

    /// All circuits with one sign representative each, ordered by size then
    /// lexicographically.
    pub fn circuits(&self) -> &[SignedCircuit] {
        self.circuits.get_or_init(|| self.enumerate_circuits())
    }

    fn enumerate_circuits(&self) -> Vec<SignedCircuit> {
        let mut out: Vec<SignedCircuit> = (0..self.len())
            .filter(|&e| self.is_loop(e))
            .map(|e| SignedCircuit::new(vec![(e, 1)]))
            .collect();
        let candidates: Vec<usize> = (0..self.len())
            .filter(|&e| !self.is_loop(e) && !self.is_coloop(e))
            .collect();
        let r = self.rank();
        let mut found: Vec<ElementSet> = Vec::new();
        for k in 2..=(r + 1).min(candidates.len()) {
            for sub in combinations(candidates.len(), k) {
                let elems: Vec<usize> = sub.iter().map(|&i| candidates[i]).collect();
                let mask = elems.iter().fold(0u64, |m, &e| m | 1 << e);
                if found.iter().any(|&c| c & mask == c) {
                    continue;
                }
                let Some(x) = kernel_vector(&self.repr.scratch(&elems)) else {
                    continue;
                };
                debug_assert!(x.iter().all(|&v| v != 0));
                let pairs = elems
                    .iter()
                    .zip(&x)
                    .map(|(&e, &v)| (e, v.signum() as i8))
                    .collect();
                found.push(mask);
                out.push(SignedCircuit::new(pairs));
            }
        }
        out
    }

    /// Whether `Σ σ_e · column(e) = 0` holds exactly.
    pub fn check_signed_circuit(&self, c: &SignedCircuit) -> bool {
        (0..self.repr.rows()).all(|r| {
            c.pairs()
                .map(|(e, s)| s as i64 * self.repr.get(r, e))
                .sum::<i64>()
                == 0
        })
    }

    /// All bases, by depth-first search with pivoting. Order is
    /// deterministic.
    pub fn bases(&self) -> &[ElementSet] {
        self.bases.get_or_init(|| {
            let mut out = Vec::new();
            self.for_each_basis(|b| out.push(b));
            out
        })
    }

    /// Calls `f` on every basis without storing them.
    pub fn for_each_basis(&self, mut f: impl FnMut(ElementSet)) {
        let full = self.full_rank_rows();
        let rows = full.len();
        let n = self.len();
        let mut data: Vec<i8> = Vec::with_capacity(rows * n);
        for row in &full {
            data.extend(row.iter().map(|&v| v as i8));
        }
        let mut state = BasisSearch {
            n,
            rows,
            used: vec![false; rows],
            f: &mut f,
        };
        state.dfs(0, 0, &data);
    }

    /// Rows of an equivalent representation with full row rank.
    pub fn full_rank_matrix(&self) -> Vec<Vec<i64>> {
        if self.rank() == self.repr.rows() {
            self.repr.row_vecs()
        } else {
            self.full_rank_rows()
        }
    }

    /// Rows of an equivalent representation with full row rank, obtained by
    /// pivoting and dropping rows that vanish.
    fn full_rank_rows(&self) -> Vec<Vec<i64>> {
        let (rows, _) = pivot_form(&self.repr.row_vecs(), self.len(), &[]);
        rows
    }

    fn rebuilt(&self, rows: Vec<Vec<i64>>, labels: Vec<String>) -> Result<Matroid> {
        let cols = labels.len();
        let m = TUMatrix::new_unchecked(rows.len(), cols, &rows, labels)?
            .mark_verified(self.repr.verified_tu());
        Matroid::new(m)
    }

    /// Pivots to `[I | D]`, taking the lexicographically first basis in
    /// ground order.
    pub fn standard_form(&self) -> Result<StandardForm> {
        self.standard_form_with(&[])
    }

    fn standard_form_with(&self, priority: &[usize]) -> Result<StandardForm> {
        let r = self.rank();
        if r < self.repr.rows() {
            return Err(Error::RankDeficient {
                rank: r,
                rows: self.repr.rows(),
            });
        }
        let (rows, pivots) = pivot_form(&self.repr.row_vecs(), self.len(), priority);
        // pivot k sits in row k after pivot_form
        let mut order: Vec<usize> = pivots.clone();
        order.extend((0..self.len()).filter(|e| !pivots.contains(e)));
        let data: Vec<Vec<i64>> = rows
            .iter()
            .map(|row| order.iter().map(|&c| row[c]).collect())
            .collect();
        let labels = order.iter().map(|&c| self.label(c).to_string()).collect();
        Ok(StandardForm {
            matroid: self.rebuilt(data, labels)?,
            order,
            rank: r,
        })
    }

    /// Dual matroid represented by `[-Dᵀ | I]`, with columns returned in the
    /// original ground order and labels preserved.
    pub fn dual(&self) -> Result<Matroid> {
        let sf = self.standard_form()?;
        let r = sf.rank;
        let n = self.len();
        let s = sf.matroid.representation();
        let mut pos_in_sf = vec![0; n];
        for (k, &e) in sf.order.iter().enumerate() {
            pos_in_sf[e] = k;
        }
        let mut data = vec![vec![0i64; n]; n - r];
        for e in 0..n {
            let k = pos_in_sf[e];
            if k < r {
                for j in 0..n - r {
                    data[j][e] = -s.get(k, r + j);
                }
            } else {
                data[k - r][e] = 1;
            }
        }
        self.rebuilt(data, self.labels().to_vec())
    }

    /// `M \ deletions / contractions`. Contracting a loop deletes it.
    pub fn minor(&self, deletions: ElementSet, contractions: ElementSet) -> Result<Matroid> {
        if deletions & contractions != 0 {
            return Err(Error::Precondition(
                "deleted and contracted sets must be disjoint".into(),
            ));
        }
        if (deletions | contractions) & !self.ground() != 0 {
            return Err(Error::UnknownElement("element index out of range".into()));
        }
        let mut rows = self.repr.row_vecs();
        let mut keep: Vec<usize> = (0..self.len()).collect();
        for e in elements_of(contractions) {
            let col = keep.iter().position(|&k| k == e).unwrap();
            if let Some(r) = rows.iter().position(|row| row[col] != 0) {
                pivot(&mut rows, r, col);
                rows.remove(r);
            }
            for row in rows.iter_mut() {
                row.remove(col);
            }
            keep.remove(col);
        }
        let cols: Vec<usize> = keep
            .iter()
            .enumerate()
            .filter(|(_, &e)| deletions & (1 << e) == 0)
            .map(|(i, _)| i)
            .collect();
        let rows: Vec<Vec<i64>> = rows
            .iter()
            .map(|row| cols.iter().map(|&c| row[c]).collect())
            .collect();
        let labels: Vec<String> = cols
            .iter()
            .map(|&c| self.label(keep[c]).to_string())
            .collect();
        let (rows, _) = pivot_form(&rows, labels.len(), &[]);
        self.rebuilt(rows, labels)
    }

    pub fn delete(&self, labels: &[&str]) -> Result<Matroid> {
        self.minor(self.mask_of(labels)?, 0)
    }

    pub fn contract(&self, labels: &[&str]) -> Result<Matroid> {
        self.minor(0, self.mask_of(labels)?)
    }

    /// Block-diagonal direct sum. Labels of `other` that collide are
    /// suffixed; the renaming is returned.
    pub fn direct_sum(&self, other: &Matroid) -> Result<(Matroid, Relabel)> {
        let (labels2, relabel) = disjoint_labels(self.labels(), other.labels(), None);
        let (r1, r2) = (self.repr.rows(), other.repr.rows());
        let (n1, n2) = (self.len(), other.len());
        let mut rows = vec![vec![0i64; n1 + n2]; r1 + r2];
        for r in 0..r1 {
            for c in 0..n1 {
                rows[r][c] = self.repr.get(r, c);
            }
        }
        for r in 0..r2 {
            for c in 0..n2 {
                rows[r1 + r][n1 + c] = other.repr.get(r, c);
            }
        }
        let mut labels = self.labels().to_vec();
        labels.extend(labels2);
        let verified = self.repr.verified_tu() && other.repr.verified_tu();
        let m = TUMatrix::new_unchecked(r1 + r2, n1 + n2, &rows, labels)?.mark_verified(verified);
        let mut circuits: Vec<SignedCircuit> = self.circuits().to_vec();
        circuits.extend(
            other
                .circuits()
                .iter()
                .map(|c| SignedCircuit::new(c.pairs().map(|(e, s)| (e + n1, s)).collect())),
        );
        Ok((Matroid::new(m)?.with_circuits(circuits), relabel))
    }

    /// Parallel connection along the element labeled `p` in both matroids.
    /// The result lists the elements of `m1` first, then those of `m2` other
    /// than `p`, except in the degenerate loop/coloop cases which reduce to
    /// direct sums.
    pub fn parallel_connection(m1: &Matroid, m2: &Matroid, p: &str) -> Result<(Matroid, Relabel)> {
        let p1 = m1.index_of(p)?;
        let p2 = m2.index_of(p)?;
        if m1.is_loop(p1) {
            return m1.direct_sum(&m2.contract(&[p])?);
        }
        if m1.is_coloop(p1) {
            return m1.delete(&[p])?.direct_sum(m2);
        }
        if m2.is_loop(p2) {
            return m1.contract(&[p])?.direct_sum(m2);
        }
        if m2.is_coloop(p2) {
            return m1.direct_sum(&m2.delete(&[p])?);
        }
        let (rows1, piv1) = pivot_form(&m1.repr.row_vecs(), m1.len(), &[p1]);
        let (rows2, piv2) = pivot_form(&m2.repr.row_vecs(), m2.len(), &[p2]);
        // p is the first pivot, so its unit entry sits in row 0 of both
        debug_assert_eq!((piv1[0], piv2[0]), (p1, p2));
        let (r1, r2) = (rows1.len(), rows2.len());
        let (n1, n2) = (m1.len(), m2.len());
        let others2: Vec<usize> = (0..n2).filter(|&c| c != p2).collect();
        let mut rows = vec![vec![0i64; n1 + n2 - 1]; r1 + r2 - 1];
        for r in 0..r1 {
            rows[r][..n1].copy_from_slice(&rows1[r]);
        }
        for (j, &c) in others2.iter().enumerate() {
            rows[0][n1 + j] = rows2[0][c];
            for r in 1..r2 {
                rows[r1 + r - 1][n1 + j] = rows2[r][c];
            }
        }
        let (labels2, relabel) = disjoint_labels(m1.labels(), m2.labels(), Some(p));
        let mut labels = m1.labels().to_vec();
        labels.extend(others2.iter().map(|&c| labels2[c].clone()));
        let verified = m1.repr.verified_tu() && m2.repr.verified_tu();
        let tu = TUMatrix::new_unchecked(rows.len(), labels.len(), &rows, labels)?
            .mark_verified(verified);
        let glued = Matroid::new(tu)?;

        if glued.len() <= GLUE_CHECK_LIMIT {
            let map2 = |e: usize| -> usize {
                if e == p2 {
                    p1
                } else {
                    n1 + others2.iter().position(|&c| c == e).unwrap()
                }
            };
            let mut expected: BTreeSet<ElementSet> = m1.circuits().iter().map(|c| c.mask()).collect();
            let c2: Vec<ElementSet> = m2
                .circuits()
                .iter()
                .map(|c| c.elements().iter().fold(0, |m, &e| m | 1 << map2(e)))
                .collect();
            expected.extend(c2.iter().copied());
            let pbit = 1u64 << p1;
            for a in m1.circuits().iter().map(|c| c.mask()).filter(|m| m & pbit != 0) {
                for &b in c2.iter().filter(|&&m| m & pbit != 0) {
                    expected.insert((a | b) & !pbit);
                }
            }
            let actual: BTreeSet<ElementSet> = glued.circuits().iter().map(|c| c.mask()).collect();
            if actual != expected {
                return Err(Error::Invariant(
                    "glued representation does not realize the parallel connection".into(),
                ));
            }
        }
        Ok((glued, relabel))
    }

    /// All circuits have even size.
    pub fn is_bipartite(&self) -> bool {
        self.circuits().iter().all(|c| c.len() % 2 == 0)
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Matroid> {
        if labels.len() != self.len() {
            return Err(Error::Input("one label per element required".into()));
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        let mut repr = self.repr.clone();
        repr.set_labels(labels);
        let m = Matroid {
            repr,
            rank: self.rank.clone(),
            circuits: self.circuits.clone(),
            bases: self.bases.clone(),
        };
        Ok(m)
    }

    /// Cycle matroid of `g`: signed incidence matrix with the row of the
    /// smallest vertex of every component removed.
    pub fn cycle_matroid(g: &Graph) -> Result<Matroid> {
        let comp = g.components();
        let mut dropped = HashSet::new();
        let mut keep = Vec::new();
        for v in 0..g.vertex_count() {
            if !dropped.insert(comp[v]) {
                keep.push(v);
            }
        }
        let mut rows = vec![vec![0i64; g.edge_count()]; keep.len()];
        for (e, &(a, b)) in g.edges().iter().enumerate() {
            if a == b {
                continue;
            }
            if let Some(i) = keep.iter().position(|&v| v == a) {
                rows[i][e] = 1;
            }
            if let Some(i) = keep.iter().position(|&v| v == b) {
                rows[i][e] = -1;
            }
        }
        let tu = TUMatrix::new(keep.len(), g.edge_count(), &rows, g.labels().to_vec())?;
        let circuits = g
            .simple_cycles()
            .into_iter()
            .map(|c| SignedCircuit::new(c.edges))
            .collect();
        let m = Matroid::new(tu)?.with_circuits(circuits);
        let _ = m.rank.set(keep.len());
        Ok(m)
    }

    /// `[I_{2(n-1)} | B_n]`, a representation of the dual of `M(K_{3,n})`.
    pub fn dual_k3n(n: usize) -> Result<Matroid> {
        if n < 2 {
            return Err(Error::Input("dual_k3n needs n >= 2".into()));
        }
        let r = 2 * (n - 1);
        let cols = r + n + 2;
        let mut rows = vec![vec![0i64; cols]; r];
        for j in 1..n {
            let (a, b) = (2 * j - 2, 2 * j - 1);
            rows[a][a] = 1;
            rows[b][b] = 1;
            rows[a][r] = 1;
            rows[a][r + 1] = 1;
            rows[b][r] = 1;
            rows[b][r + 2] = 1;
            rows[a][r + 2 + j] = -1;
            rows[b][r + 2 + j] = -1;
        }
        let labels = (1..=cols).map(|i| format!("e{i}")).collect();
        Matroid::new(TUMatrix::new(r, cols, &rows, labels)?)
    }
}

struct BasisSearch<'a, F: FnMut(ElementSet)> {
    n: usize,
    rows: usize,
    used: Vec<bool>,
    f: &'a mut F,
}

impl<F: FnMut(ElementSet)> BasisSearch<'_, F> {
    fn dfs(&mut self, e: usize, chosen: ElementSet, data: &[i8]) {
        let picked = chosen.count_ones() as usize;
        if picked == self.rows {
            (self.f)(chosen);
            return;
        }
        if e == self.n || self.n - e < self.rows - picked {
            return;
        }
        // every free row must still be reachable from the remaining columns
        for r in 0..self.rows {
            if !self.used[r] && (e..self.n).all(|c| data[r * self.n + c] == 0) {
                return;
            }
        }
        if let Some(r) = (0..self.rows).find(|&r| !self.used[r] && data[r * self.n + e] != 0) {
            let mut next = data.to_vec();
            pivot_flat(&mut next, self.rows, self.n, r, e);
            self.used[r] = true;
            self.dfs(e + 1, chosen | 1 << e, &next);
            self.used[r] = false;
        }
        self.dfs(e + 1, chosen, data);
    }
}

fn pivot_flat(a: &mut [i8], rows: usize, n: usize, r: usize, c: usize) {
    let p = a[r * n + c];
    debug_assert!(p == 1 || p == -1);
    if p == -1 {
        for j in 0..n {
            a[r * n + j] = -a[r * n + j];
        }
    }
    for i in 0..rows {
        let f = a[i * n + c];
        if i == r || f == 0 {
            continue;
        }
        for j in 0..n {
            a[i * n + j] -= f * a[r * n + j];
        }
    }
}

/// Unimodular pivot on a `±1` entry: column `c` becomes the unit vector at
/// row `r`. Keeps totally unimodular matrices in {-1, 0, 1}.
pub(crate) fn pivot(rows: &mut [Vec<i64>], r: usize, c: usize) {
    let p = rows[r][c];
    assert!(p == 1 || p == -1, "pivot entry {p} is not a unit");
    if p == -1 {
        rows[r].iter_mut().for_each(|v| *v = -*v);
    }
    let prow = rows[r].clone();
    for (i, row) in rows.iter_mut().enumerate() {
        let f = row[c];
        if i == r || f == 0 {
            continue;
        }
        for (v, &pv) in row.iter_mut().zip(&prow) {
            *v -= f * pv;
        }
    }
}

/// Pivots greedily over `priority` then ground order, reorders rows so
/// pivot `k` sits in row `k`, and drops the rows that vanish. Returns the
/// rows and the pivot columns.
pub(crate) fn pivot_form(
    rows: &[Vec<i64>],
    cols: usize,
    priority: &[usize],
) -> (Vec<Vec<i64>>, Vec<usize>) {
    let mut a = rows.to_vec();
    let mut used = vec![false; a.len()];
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let order = priority
        .iter()
        .copied()
        .chain((0..cols).filter(|c| !priority.contains(c)));
    for c in order {
        if let Some(r) = (0..a.len()).find(|&r| !used[r] && a[r][c] != 0) {
            pivot(&mut a, r, c);
            used[r] = true;
            pivots.push((r, c));
        }
    }
    let out = pivots.iter().map(|&(r, _)| a[r].clone()).collect();
    (out, pivots.iter().map(|&(_, c)| c).collect())
}

fn disjoint_labels(taken: &[String], labels: &[String], shared: Option<&str>) -> (Vec<String>, Relabel) {
    let mut used: HashSet<String> = taken.iter().cloned().collect();
    used.extend(labels.iter().cloned());
    let taken: HashSet<&str> = taken.iter().map(String::as_str).collect();
    let mut relabel = Vec::new();
    let out = labels
        .iter()
        .map(|l| {
            if Some(l.as_str()) == shared || !taken.contains(l.as_str()) {
                return l.clone();
            }
            let mut k = 2;
            let fresh = loop {
                let cand = format!("{l}_{k}");
                if !used.contains(&cand) {
                    break cand;
                }
                k += 1;
            };
            used.insert(fresh.clone());
            relabel.push((l.clone(), fresh.clone()));
            fresh
        })
        .collect();
    (out, relabel)
}

pub fn full_mask(n: usize) -> ElementSet {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn elements_of(set: ElementSet) -> Vec<usize> {
    let mut out = Vec::with_capacity(set.count_ones() as usize);
    let mut s = set;
    while s != 0 {
        out.push(s.trailing_zeros() as usize);
        s &= s - 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Matroid {
        Matroid::cycle_matroid(&Graph::complete(3).unwrap()).unwrap()
    }

    fn c(n: usize) -> Matroid {
        Matroid::cycle_matroid(&Graph::cycle(n).unwrap()).unwrap()
    }

    fn fresh(m: &Matroid) -> Matroid {
        Matroid::new(m.representation().clone()).unwrap()
    }

    fn basis_set(m: &Matroid) -> BTreeSet<ElementSet> {
        m.bases().iter().copied().collect()
    }

    #[test]
    fn triangle() {
        let m = k3();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.circuits().len(), 1);
        assert_eq!(m.circuits()[0].len(), 3);
        assert_eq!(m.bases().len(), 3);
        assert!(!m.is_bipartite());
        // enumeration agrees with the graph-seeded circuits
        let masks: Vec<_> = fresh(&m).circuits().iter().map(|c| c.mask()).collect();
        assert_eq!(masks, vec![0b111]);
    }

    #[test]
    fn parallel_pair_is_two_circuit() {
        let g = Graph::new(2, vec![(0, 1), (0, 1)]).unwrap();
        let m = fresh(&Matroid::cycle_matroid(&g).unwrap());
        assert_eq!(m.circuits().len(), 1);
        assert_eq!(m.circuits()[0].signs(), &[1, -1]);
    }

    #[test]
    fn signed_circuits_cancel() {
        for m in [k3(), c(5), Matroid::dual_k3n(3).unwrap()] {
            let f = fresh(&m);
            for c in f.circuits() {
                assert!(f.check_signed_circuit(c));
                assert_eq!(c.signs()[0], 1);
            }
            for c in m.circuits() {
                assert!(m.check_signed_circuit(c));
            }
        }
    }

    #[test]
    fn dual_of_triangle() {
        let d = k3().dual().unwrap();
        assert_eq!(d.rank(), 1);
        let sizes: Vec<usize> = d.circuits().iter().map(SignedCircuit::len).collect();
        assert_eq!(sizes, vec![2, 2, 2]);
        let dd = d.dual().unwrap();
        assert_eq!(basis_set(&dd), basis_set(&k3()));
    }

    #[test]
    fn dual_complements_bases() {
        let m = Matroid::cycle_matroid(&Graph::complete(4).unwrap()).unwrap();
        let d = m.dual().unwrap();
        let full = m.ground();
        let comp: BTreeSet<_> = m.bases().iter().map(|b| full & !b).collect();
        assert_eq!(basis_set(&d), comp);
    }

    #[test]
    fn standard_form_of_triangle() {
        let sf = k3().standard_form().unwrap();
        let s = sf.matroid.representation();
        assert_eq!(s.rows(), 2);
        assert_eq!((s.get(0, 0), s.get(0, 1), s.get(1, 0), s.get(1, 1)), (1, 0, 0, 1));
        assert_eq!(s.get(0, 2).abs(), 1);
        assert_eq!(s.get(1, 2).abs(), 1);
        assert_eq!(s.get(0, 2), -s.get(1, 2));
    }

    #[test]
    fn rank_deficient_standard_form_fails() {
        let m = Matroid::from_rows(&[vec![1, 0], vec![1, 0]]).unwrap();
        assert!(matches!(m.standard_form(), Err(Error::RankDeficient { .. })));
        assert!(m.dual().is_err());
    }

    #[test]
    fn minors() {
        let m = c(4);
        let con = m.contract(&["e1"]).unwrap();
        assert_eq!(con.rank(), 2);
        let masks: Vec<_> = con.circuits().iter().map(|c| c.mask()).collect();
        assert_eq!(masks, vec![0b111]);
        assert_eq!(con.labels(), &["e2", "e3", "e4"]);

        let del = c(3).delete(&["e2"]).unwrap();
        assert_eq!(del.rank(), 2);
        assert!(del.circuits().is_empty());
        assert_eq!(del.coloops(), 0b11);

        // contracting a loop deletes it
        let g = Graph::new(2, vec![(0, 1), (1, 1)]).unwrap();
        let lm = Matroid::cycle_matroid(&g).unwrap();
        assert_eq!(lm.loops(), 0b10);
        let cl = lm.contract(&["e2"]).unwrap();
        assert_eq!(cl.rank(), 1);
        assert_eq!(cl.len(), 1);
    }

    #[test]
    fn deletion_contraction_duality() {
        let m = c(4);
        for e in 0..4 {
            let a = m.minor(1 << e, 0).unwrap().dual().unwrap();
            let b = m.dual().unwrap().minor(0, 1 << e).unwrap();
            assert_eq!(basis_set(&a), basis_set(&b));
        }
    }

    #[test]
    fn direct_sums() {
        let (s, relabel) = k3().direct_sum(&k3()).unwrap();
        assert_eq!(s.rank(), 4);
        assert_eq!(s.circuits().len(), 2);
        assert_eq!(s.bases().len(), 9);
        assert_eq!(relabel.len(), 3);
        assert_eq!(relabel[0], ("e1".to_string(), "e1_2".to_string()));
        let f = fresh(&s);
        assert_eq!(f.circuits().len(), 2);

        let u11 = Matroid::from_rows(&[vec![1]]).unwrap();
        let (s, _) = u11.direct_sum(&u11).unwrap();
        assert_eq!(s.rank(), 2);
        assert!(s.circuits().is_empty());

        let (mixed, _) = c(4).direct_sum(&k3()).unwrap();
        assert!(!mixed.is_bipartite());
        assert!(c(4).is_bipartite());
    }

    #[test]
    fn parallel_connection_of_triangles() {
        let (p, _) = Matroid::parallel_connection(&k3(), &k3(), "e1").unwrap();
        let mut sizes: Vec<usize> = p.circuits().iter().map(SignedCircuit::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![3, 3, 4]);
        assert_eq!(p.rank(), 3);
    }

    #[test]
    fn parallel_connection_of_squares() {
        let (p, _) = Matroid::parallel_connection(&c(4), &c(4), "e1").unwrap();
        let mut sizes: Vec<usize> = p.circuits().iter().map(SignedCircuit::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![4, 4, 6]);
    }

    #[test]
    fn parallel_connection_at_coloop() {
        let m1 = c(3).delete(&["e3"]).unwrap();
        let (p, _) = Matroid::parallel_connection(&m1, &k3(), "e1").unwrap();
        let (expect, _) = m1.delete(&["e1"]).unwrap().direct_sum(&k3()).unwrap();
        assert_eq!(basis_set(&p), basis_set(&expect));
    }

    #[test]
    fn dual_k3n_shape() {
        let m = Matroid::dual_k3n(3).unwrap();
        let r = m.representation();
        assert_eq!((r.rows(), r.cols()), (4, 9));
        let b: Vec<Vec<i64>> = (4..9).map(|c| r.column(c)).collect();
        assert_eq!(
            b,
            vec![
                vec![1, 1, 1, 1],
                vec![1, 0, 1, 0],
                vec![0, 1, 0, 1],
                vec![-1, -1, 0, 0],
                vec![0, 0, -1, -1],
            ]
        );
        assert!(Matroid::dual_k3n(1).is_err());
    }

    #[test]
    fn dual_k3_6_basis_count() {
        let m = Matroid::dual_k3n(6).unwrap();
        assert_eq!(m.rank(), 10);
        assert_eq!(m.len(), 18);
        // matrix-tree theorem on K_{3,6}: 3^5 * 6^2
        assert_eq!(m.bases().len(), 3usize.pow(5) * 36);
    }
}
