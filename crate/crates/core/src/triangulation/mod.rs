//! Regular unimodular triangulation of `Σ(M)` from the grevlex initial
//! terms of the toric ideal, with `z < x_{e1} < y_{e1} < x_{e2} < ...`.
//!
//! Faces of the boundary complex are the squarefree standard monomials
//! without `z`, encoded as bitmasks: element at order position `k` owns bit
//! `2k` for `x_e` (the column `+u_e`) and bit `2k + 1` for `y_e` (`-u_e`).

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matroid::linalg::{bareiss_det, Scratch};
use crate::matroid::{combinations, Graph, Matroid};
use crate::poly::{binom, IntPolynomial};

/// Default cap on bases × orientations (and on faces visited).
pub const DEFAULT_BASIS_BUDGET: u128 = 100_000_000;

pub const MAX_ELEMENTS: usize = 32;

/// Ground elements listed from weakest to strongest; each contributes `x_e`
/// then `y_e` after `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VariableOrder {
    elements: Vec<usize>,
    position: Vec<usize>,
}

impl VariableOrder {
    pub fn ground(n: usize) -> Self {
        Self::new((0..n).collect()).expect("identity is a permutation")
    }

    pub fn new(elements: Vec<usize>) -> Result<Self> {
        let n = elements.len();
        let mut position = vec![usize::MAX; n];
        for (k, &e) in elements.iter().enumerate() {
            if e >= n || position[e] != usize::MAX {
                return Err(Error::Input(format!(
                    "element order {elements:?} is not a permutation"
                )));
            }
            position[e] = k;
        }
        Ok(VariableOrder { elements, position })
    }

    /// Order given by labels, weakest first.
    pub fn from_labels(m: &Matroid, labels: &[&str]) -> Result<Self> {
        if labels.len() != m.len() {
            return Err(Error::Input(format!(
                "order lists {} labels for {} elements",
                labels.len(),
                m.len()
            )));
        }
        let elems = labels
            .iter()
            .map(|l| m.index_of(l))
            .collect::<Result<Vec<_>>>()?;
        Self::new(elems)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn position(&self, e: usize) -> usize {
        self.position[e]
    }

    pub fn element_at(&self, k: usize) -> usize {
        self.elements[k]
    }

    /// Bit of `x_e` (sign `+1`) or `y_e` (sign `-1`).
    pub fn bit(&self, e: usize, sign: i8) -> u32 {
        (2 * self.position[e] + usize::from(sign < 0)) as u32
    }
}

/// Oriented elements with at most one sign each, optionally with `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedSet {
    bits: u64,
    with_origin: bool,
}

impl OrientedSet {
    pub const EMPTY: OrientedSet = OrientedSet {
        bits: 0,
        with_origin: false,
    };

    pub fn from_bits(bits: u64) -> Self {
        OrientedSet {
            bits,
            with_origin: false,
        }
    }

    pub fn from_pairs(order: &VariableOrder, pairs: &[(usize, i8)]) -> Self {
        Self::from_bits(pairs.iter().fold(0, |b, &(e, s)| b | 1 << order.bit(e, s)))
    }

    pub fn with_origin(mut self) -> Self {
        self.with_origin = true;
        self
    }

    pub fn has_origin(&self) -> bool {
        self.with_origin
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    /// No element carries both signs.
    pub fn is_consistent(&self) -> bool {
        const EVEN: u64 = 0x5555_5555_5555_5555;
        (self.bits & EVEN) & ((self.bits >> 1) & EVEN) == 0
    }

    pub fn contains_set(&self, other: &OrientedSet) -> bool {
        self.bits & other.bits == other.bits
    }

    /// `(element, sign)` pairs in variable order.
    pub fn pairs(&self, order: &VariableOrder) -> Vec<(usize, i8)> {
        let mut out = Vec::with_capacity(self.len());
        let mut b = self.bits;
        while b != 0 {
            let bit = b.trailing_zeros() as usize;
            out.push((order.element_at(bit / 2), if bit % 2 == 0 { 1 } else { -1 }));
            b &= b - 1;
        }
        out
    }

    /// Signed labels such as `+e1 -e3`, in variable order.
    pub fn display<'a>(&self, m: &'a Matroid, order: &'a VariableOrder) -> impl fmt::Display + 'a {
        let pairs = self.pairs(order);
        DisplaySet { pairs, m }
    }
}

struct DisplaySet<'a> {
    pairs: Vec<(usize, i8)>,
    m: &'a Matroid,
}

impl fmt::Display for DisplaySet<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &(e, s)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}{}", if s > 0 { '+' } else { '-' }, self.m.label(e))?;
        }
        Ok(())
    }
}

/// Initial terms of the generating set, minimized under inclusion and
/// indexed by their highest bit. The family `x_e y_e` is implicit.
#[derive(Clone, Debug)]
pub struct InitialMonomialSet {
    order: VariableOrder,
    monomials: Vec<OrientedSet>,
    by_top: Vec<Vec<u64>>,
    rejected: usize,
}

impl InitialMonomialSet {
    pub fn order(&self) -> &VariableOrder {
        &self.order
    }

    /// Minimal generators, sorted.
    pub fn monomials(&self) -> &[OrientedSet] {
        &self.monomials
    }

    /// Candidates that failed the lattice relation check (always zero for a
    /// correct circuit enumeration).
    pub fn rejected(&self) -> usize {
        self.rejected
    }

    /// Number of minimal generators of each degree.
    pub fn degree_counts(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for g in &self.monomials {
            let d = g.len();
            if out.len() <= d {
                out.resize(d + 1, 0);
            }
            out[d] += 1;
        }
        out
    }

    /// Whether adding `bit` (higher than every bit of `base`) keeps the set
    /// standard, given `base` is standard.
    #[inline]
    fn extends(&self, base: u64, bit: u32) -> bool {
        let with = base | 1 << bit;
        self.by_top[bit as usize].iter().all(|&g| g & with != g)
    }
}

/// Generating set of initial terms: for each signed circuit `C` and both global
/// signs, the monomials `Π_{e∈I} var(σ_e)` over `k`-subsets `I` avoiding the
/// weakest element when `|C| = 2k`, and over all `(k+1)`-subsets when
/// `|C| = 2k + 1`. Each candidate is checked against the exact relation
/// `Σ_I σ_e u_e = Σ_{C-I} -σ_e u_e`.
pub fn initial_monomials(m: &Matroid, order: &VariableOrder) -> Result<InitialMonomialSet> {
    if m.len() > MAX_ELEMENTS {
        return Err(Error::Input(format!(
            "triangulation supports at most {MAX_ELEMENTS} elements, got {}",
            m.len()
        )));
    }
    if order.len() != m.len() {
        return Err(Error::Input("variable order does not match the ground set".into()));
    }
    let rows = m.representation().rows();
    let cols: Vec<Vec<i64>> = (0..m.len()).map(|e| m.column(e)).collect();
    let mut raw: Vec<u64> = Vec::new();
    let mut rejected = 0;
    for c in m.circuits() {
        let mut pairs: Vec<(usize, i8)> = c.pairs().collect();
        pairs.sort_by_key(|&(e, _)| order.position(e));
        let size = pairs.len();
        let (pick, skip_weakest) = if size % 2 == 0 {
            (size / 2, true)
        } else {
            (size / 2 + 1, false)
        };
        for global in [1i8, -1] {
            let signed: Vec<(usize, i8)> = pairs.iter().map(|&(e, s)| (e, s * global)).collect();
            let start = usize::from(skip_weakest);
            let pool = &signed[start..];
            for sub in combinations(pool.len(), pick) {
                let mut in_i = vec![false; size];
                for &i in &sub {
                    in_i[start + i] = true;
                }
                // Σ_I σ u  ==  Σ_{C-I} (-σ) u
                let ok = (0..rows).all(|r| {
                    let mut lhs = 0i64;
                    let mut rhs = 0i64;
                    for (k, &(e, s)) in signed.iter().enumerate() {
                        if in_i[k] {
                            lhs += s as i64 * cols[e][r];
                        } else {
                            rhs -= s as i64 * cols[e][r];
                        }
                    }
                    lhs == rhs
                });
                if !ok {
                    rejected += 1;
                    continue;
                }
                let bits = sub
                    .iter()
                    .map(|&i| pool[i])
                    .fold(0u64, |b, (e, s)| b | 1 << order.bit(e, s));
                raw.push(bits);
            }
        }
    }
    raw.sort_unstable_by_key(|b| (b.count_ones(), *b));
    raw.dedup();
    let mut minimal: Vec<u64> = Vec::new();
    for g in raw {
        if !minimal.iter().any(|&h| h & g == h) {
            minimal.push(g);
        }
    }
    minimal.sort_unstable();
    let mut by_top = vec![Vec::new(); 2 * m.len()];
    for &g in &minimal {
        by_top[63 - g.leading_zeros() as usize].push(g);
    }
    Ok(InitialMonomialSet {
        order: order.clone(),
        monomials: minimal.into_iter().map(OrientedSet::from_bits).collect(),
        by_top,
        rejected,
    })
}

/// No generator divides `s`, and `s` never holds both signs of an element.
pub fn is_standard(s: &OrientedSet, gens: &InitialMonomialSet) -> bool {
    s.is_consistent() && gens.monomials.iter().all(|g| !s.contains_set(g))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TriangulationSummary {
    pub facet_count: u64,
    /// `f[i]` counts standard sets of `i` oriented elements, `f[0] = 1`.
    pub f_vector: Vec<u64>,
    #[serde(serialize_with = "crate::io::ser_poly")]
    pub h_vector: IntPolynomial,
    /// Minimal initial monomials by degree.
    pub generator_degrees: Vec<usize>,
}

/// Every oriented basis whose oriented set is standard, sorted by bits.
pub fn facets(m: &Matroid, gens: &InitialMonomialSet, budget: u128) -> Result<Vec<OrientedSet>> {
    let r = m.rank();
    if r == 0 {
        return Err(Error::Precondition("triangulation needs positive rank".into()));
    }
    let bases = m.bases();
    let needed = (bases.len() as u128).saturating_mul(1u128 << r.min(127));
    if needed > budget {
        return Err(Error::Budget {
            what: "oriented bases",
            needed,
            cap: budget,
            advice: "raise --budget-bases or shrink the instance",
        });
    }
    let order = &gens.order;
    let mut out: Vec<OrientedSet> = bases
        .par_iter()
        .flat_map_iter(|&b| {
            let mut elems: Vec<usize> = crate::matroid::elements_of(b);
            elems.sort_by_key(|&e| order.position(e));
            let mut found = Vec::new();
            orient_dfs(gens, &elems, 0, 0, &mut found);
            found.into_iter().map(OrientedSet::from_bits)
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

fn orient_dfs(gens: &InitialMonomialSet, elems: &[usize], k: usize, cur: u64, out: &mut Vec<u64>) {
    if k == elems.len() {
        out.push(cur);
        return;
    }
    for sign in [1i8, -1] {
        let bit = gens.order.bit(elems[k], sign);
        if gens.extends(cur, bit) {
            orient_dfs(gens, elems, k + 1, cur | 1 << bit, out);
        }
    }
}

/// Face counts of the boundary complex by depth-first extension in
/// variable order; every subset of a standard set is standard, so pruning
/// at the first generator hit is exact.
pub fn face_f_vector(m: &Matroid, gens: &InitialMonomialSet, budget: u128) -> Result<Vec<u64>> {
    let n = m.len();
    let r = m.rank();
    let firsts: Vec<(usize, i8)> = (0..n).flat_map(|k| [(k, 1i8), (k, -1)]).collect();
    let parts: Vec<Vec<u64>> = firsts
        .par_iter()
        .map(|&(k, s)| {
            let mut f = vec![0u64; r + 2];
            let bit = (2 * k + usize::from(s < 0)) as u32;
            // parallel elements give initial terms of degree one
            if gens.extends(0, bit) {
                face_dfs(gens, n, k + 1, 1 << bit, 1, &mut f, budget);
            }
            f
        })
        .collect();
    let mut f = vec![0u64; r + 2];
    f[0] = 1;
    for p in parts {
        for (a, b) in f.iter_mut().zip(p) {
            *a += b;
        }
    }
    if f[r + 1] != 0 {
        return Err(Error::Invariant(format!(
            "standard set larger than the rank {r}: f = {f:?}"
        )));
    }
    f.pop();
    let total: u128 = f.iter().map(|&x| x as u128).sum();
    if total > budget {
        return Err(Error::Budget {
            what: "faces",
            needed: total,
            cap: budget,
            advice: "raise --budget-bases or shrink the instance",
        });
    }
    Ok(f)
}

fn face_dfs(
    gens: &InitialMonomialSet,
    n: usize,
    next: usize,
    cur: u64,
    size: usize,
    f: &mut [u64],
    budget: u128,
) {
    if size >= f.len() {
        // oversize standard set; reported by the caller
        f[f.len() - 1] += 1;
        return;
    }
    f[size] += 1;
    if f[size] as u128 > budget {
        return;
    }
    for k in next..n {
        for bit in [2 * k as u32, 2 * k as u32 + 1] {
            if gens.extends(cur, bit) {
                face_dfs(gens, n, k + 1, cur | 1 << bit, size + 1, f, budget);
            }
        }
    }
}

/// `h_k = Σ_{i<=k} (-1)^{k-i} C(d-i, k-i) f_i` with `f_i` indexed by face
/// cardinality.
pub fn h_from_f(f: &[u64], d: usize) -> Result<IntPolynomial> {
    if f.len() != d + 1 {
        return Err(Error::Input(format!(
            "f-vector of length {} for dimension {d}",
            f.len()
        )));
    }
    let mut h = Vec::with_capacity(d + 1);
    for k in 0..=d {
        let mut acc = BigInt::zero();
        for (i, &fi) in f.iter().enumerate().take(k + 1) {
            let term = binom((d - i) as i64, (k - i) as i64) * BigInt::from(fi);
            if (k - i) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if acc.is_negative() {
            return Err(Error::Invariant(format!(
                "h_{k} = {acc} is negative for f = {f:?}"
            )));
        }
        h.push(acc);
    }
    Ok(IntPolynomial::new(h))
}

/// Full pass: generators, facets, faces, and the h-vector, cross-checking
/// the facet count against `h(1)`.
pub fn triangulate(
    m: &Matroid,
    order: &VariableOrder,
    budget: u128,
) -> Result<(Vec<OrientedSet>, TriangulationSummary)> {
    let gens = initial_monomials(m, order)?;
    if gens.rejected() > 0 {
        return Err(Error::Invariant(format!(
            "{} generator candidates failed the lattice relation",
            gens.rejected()
        )));
    }
    let facets = facets(m, &gens, budget)?;
    let f = face_f_vector(m, &gens, budget)?;
    let h = h_from_f(&f, m.rank())?;
    let summary = TriangulationSummary {
        facet_count: facets.len() as u64,
        f_vector: f,
        h_vector: h,
        generator_degrees: gens.degree_counts(),
    };
    if BigInt::from(summary.facet_count) != summary.h_vector.eval_at_one()
        || summary.facet_count != *summary.f_vector.last().unwrap()
    {
        return Err(Error::Invariant(format!(
            "facet count {} disagrees with f = {:?}, h = {}",
            summary.facet_count, summary.f_vector, summary.h_vector
        )));
    }
    Ok((facets, summary))
}

/// h* via the f-vector only (no facet list).
pub fn triangulation_hstar(m: &Matroid, order: &VariableOrder, budget: u128) -> Result<IntPolynomial> {
    let gens = initial_monomials(m, order)?;
    let f = face_f_vector(m, &gens, budget)?;
    h_from_f(&f, m.rank())
}

/// Each facet with the origin spans a unimodular simplex: the oriented
/// columns have determinant `±1` in a full-row-rank representation.
pub fn facets_unimodular(m: &Matroid, order: &VariableOrder, facets: &[OrientedSet]) -> bool {
    let rows = m.full_rank_matrix();
    let r = rows.len();
    facets.iter().all(|fc| {
        let pairs = fc.pairs(order);
        if pairs.len() != r {
            return false;
        }
        let mut s = Scratch::zeros(r, r);
        for (j, &(e, sign)) in pairs.iter().enumerate() {
            for (i, row) in rows.iter().enumerate() {
                s.set(i, j, (sign as i64 * row[e]) as i128);
            }
        }
        bareiss_det(s).abs() == 1
    })
}

/// h*_i = number of oriented spanning trees with exactly `i` edges pointing
/// away from `v`: an edge points away when `v` lies in the component of the
/// tail after removing the edge.
pub fn hstar_by_pointing(g: &Graph, v: usize, facets: &[OrientedSet], order: &VariableOrder) -> Result<IntPolynomial> {
    if !g.is_connected() {
        return Err(Error::Precondition("pointing statistic needs a connected graph".into()));
    }
    if v >= g.vertex_count() {
        return Err(Error::Input(format!("no vertex {v}")));
    }
    let nv = g.vertex_count();
    let mut h = vec![0u64; nv];
    for fc in facets {
        let pairs = fc.pairs(order);
        if pairs.len() + 1 != nv {
            return Err(Error::Input("facet is not a spanning tree".into()));
        }
        h[edges_pointing_away(g, v, &pairs)?] += 1;
    }
    Ok(IntPolynomial::new(h.into_iter().map(BigInt::from).collect()))
}

/// Number of edges of the oriented spanning tree `pairs` that point away
/// from `v`. An element with sign `+` runs from the first to the second
/// endpoint of its edge.
pub fn edges_pointing_away(g: &Graph, v: usize, pairs: &[(usize, i8)]) -> Result<usize> {
    let parent = tree_parents(g, pairs, v)?;
    Ok(pairs
        .iter()
        .filter(|&&(e, s)| {
            let (a, b) = g.edge(e);
            let (tail, head) = if s > 0 { (a, b) } else { (b, a) };
            parent[head] == Some(tail)
        })
        .count())
}

/// Parent pointers of the tree rooted at `root`.
pub(crate) fn tree_parents(g: &Graph, edges: &[(usize, i8)], root: usize) -> Result<Vec<Option<usize>>> {
    let nv = g.vertex_count();
    let mut adj = vec![Vec::new(); nv];
    for &(e, _) in edges {
        let (a, b) = g.edge(e);
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut parent = vec![None; nv];
    let mut seen = vec![false; nv];
    seen[root] = true;
    let mut stack = vec![root];
    let mut visited = 1;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                parent[w] = Some(u);
                visited += 1;
                stack.push(w);
            }
        }
    }
    if visited != nv {
        return Err(Error::Input("edge set does not span the graph".into()));
    }
    Ok(parent)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graphic(g: &Graph) -> Matroid {
        Matroid::cycle_matroid(g).unwrap()
    }

    fn run(m: &Matroid) -> (Vec<OrientedSet>, TriangulationSummary) {
        triangulate(m, &VariableOrder::ground(m.len()), DEFAULT_BASIS_BUDGET).unwrap()
    }

    #[test]
    fn coloop_segment() {
        let m = Matroid::from_rows(&[vec![1]]).unwrap();
        let (f, s) = run(&m);
        assert_eq!(f.len(), 2);
        assert_eq!(s.f_vector, vec![1, 2]);
        assert_eq!(s.h_vector, IntPolynomial::from_i64(&[1, 1]));
    }

    #[test]
    fn triangle_hexagon() {
        let g = Graph::complete(3).unwrap();
        let m = graphic(&g);
        let order = VariableOrder::ground(3);
        let gens = initial_monomials(&m, &order).unwrap();
        // one 3-circuit, two signings, C(3,2) subsets each
        assert_eq!(gens.monomials().len(), 6);
        assert!(gens.monomials().iter().all(|g| g.len() == 2));
        let (f, s) = run(&m);
        assert_eq!(f.len(), 6);
        assert_eq!(s.f_vector, vec![1, 6, 6]);
        assert_eq!(s.h_vector, IntPolynomial::from_i64(&[1, 4, 1]));
        assert!(facets_unimodular(&m, &order, &f));
        for v in 0..3 {
            assert_eq!(
                hstar_by_pointing(&g, v, &f, &order).unwrap(),
                IntPolynomial::from_i64(&[1, 4, 1])
            );
        }
    }

    #[test]
    fn square_generators_avoid_weakest() {
        let m = graphic(&Graph::cycle(4).unwrap());
        let order = VariableOrder::ground(4);
        let gens = initial_monomials(&m, &order).unwrap();
        assert_eq!(gens.monomials().len(), 6);
        assert!(gens.monomials().iter().all(|g| g.bits() & 0b11 == 0));
        let (_, s) = run(&m);
        assert_eq!(s.h_vector, IntPolynomial::from_i64(&[1, 5, 5, 1]));
    }

    #[test]
    fn path_pointing() {
        let g = Graph::path(3).unwrap();
        let m = graphic(&g);
        let order = VariableOrder::ground(2);
        let (f, _) = run(&m);
        assert_eq!(f.len(), 4);
        assert_eq!(
            hstar_by_pointing(&g, 0, &f, &order).unwrap(),
            IntPolynomial::from_i64(&[1, 2, 1])
        );
    }

    #[test]
    fn standardness() {
        let m = graphic(&Graph::complete(3).unwrap());
        let order = VariableOrder::ground(3);
        let gens = initial_monomials(&m, &order).unwrap();
        assert!(is_standard(&OrientedSet::EMPTY, &gens));
        for e in 0..3 {
            for s in [1, -1] {
                assert!(is_standard(&OrientedSet::from_pairs(&order, &[(e, s)]), &gens));
            }
            let both = OrientedSet::from_pairs(&order, &[(e, 1), (e, -1)]);
            assert!(!is_standard(&both, &gens));
        }
    }

    #[test]
    fn h_transform() {
        assert_eq!(h_from_f(&[1, 6, 6], 2).unwrap(), IntPolynomial::from_i64(&[1, 4, 1]));
        assert_eq!(h_from_f(&[1, 2], 1).unwrap(), IntPolynomial::from_i64(&[1, 1]));
        assert!(h_from_f(&[1, 2], 2).is_err());
    }

    #[test]
    fn order_must_be_permutation() {
        assert!(VariableOrder::new(vec![0, 0]).is_err());
        assert!(VariableOrder::new(vec![1, 0]).is_ok());
    }

    #[test]
    fn parallel_edges_never_enter_faces() {
        // triangle with one doubled edge: the copy is a degree-one initial term
        let g = Graph::new(3, vec![(0, 1), (0, 1), (0, 2), (2, 1)]).unwrap();
        let m = Matroid::cycle_matroid(&g).unwrap();
        let order = VariableOrder::ground(4);
        let gens = initial_monomials(&m, &order).unwrap();
        assert_eq!(face_f_vector(&m, &gens, DEFAULT_BASIS_BUDGET).unwrap(), vec![1, 6, 6]);
        let (facets, s) = triangulate(&m, &order, DEFAULT_BASIS_BUDGET).unwrap();
        assert_eq!(s.h_vector, IntPolynomial::from_i64(&[1, 4, 1]));
        assert_eq!(facets.len(), 6);
    }
}
