//! Brute-force Ehrhart counting for symmetric edge polytopes.
//!
//! Lattice points of `mP` are found by walking the integer bounding box and
//! deciding membership with an exact LP. For centrally symmetric polytopes
//! one LP per box point gives its gauge `min{m : x ∈ mP}`, so a single walk
//! over the box of `dP` yields `L(0), ..., L(d)` at once.

mod checks;
pub mod lattice;
pub mod lp;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

pub use checks::{
    brute_force_hstar, check_contraction, check_free_sum, check_parallel_connection,
    IdentityCheck,
};

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::poly::{binom, IntPolynomial, RatPolynomial};
use lattice::{lattice_frame, rank_of};
use lp::PointLp;

/// Default cap on the number of bounding-box points visited.
pub const DEFAULT_BOX_BUDGET: u128 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePolytope {
    ambient_dim: usize,
    vertices: Vec<Vec<i64>>,
    dropped_loops: usize,
}

impl LatticePolytope {
    /// Deduplicates the vertex list, keeping first occurrences.
    pub fn new(ambient_dim: usize, vertices: Vec<Vec<i64>>) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for v in vertices {
            if v.len() != ambient_dim {
                return Err(Error::Input(format!(
                    "vertex of length {} in dimension {ambient_dim}",
                    v.len()
                )));
            }
            if seen.insert(v.clone()) {
                out.push(v);
            }
        }
        Ok(LatticePolytope {
            ambient_dim,
            vertices: out,
            dropped_loops: 0,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    /// Number of zero columns skipped when building a symmetric edge
    /// polytope.
    pub fn dropped_loops(&self) -> usize {
        self.dropped_loops
    }

    pub fn is_centrally_symmetric(&self) -> bool {
        let set: HashSet<&Vec<i64>> = self.vertices.iter().collect();
        self.vertices
            .iter()
            .all(|v| set.contains(&v.iter().map(|x| -x).collect::<Vec<_>>()))
    }

    /// Affine dimension.
    pub fn dim(&self) -> usize {
        let Some(v0) = self.vertices.first() else {
            return 0;
        };
        let diffs: Vec<Vec<i64>> = self
            .vertices
            .iter()
            .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
            .collect();
        rank_of(&diffs, self.ambient_dim)
    }

    /// Vertices in lexicographic order, for hashing.
    pub fn sorted_vertices(&self) -> Vec<Vec<i64>> {
        let mut v = self.vertices.clone();
        v.sort();
        v
    }
}

/// `Σ(M) = conv{±u : u a column of the representation}`.
pub fn sep_of(m: &Matroid) -> Result<LatticePolytope> {
    if m.rank() == 0 {
        return Err(Error::Precondition(
            "symmetric edge polytope needs positive rank".into(),
        ));
    }
    let mut verts = Vec::new();
    let mut dropped = 0;
    for e in 0..m.len() {
        let c = m.column(e);
        if c.iter().all(|&x| x == 0) {
            dropped += 1;
            continue;
        }
        let neg = c.iter().map(|x| -x).collect();
        verts.push(c);
        verts.push(neg);
    }
    let mut p = LatticePolytope::new(m.representation().rows(), verts)?;
    p.dropped_loops = dropped;
    Ok(p)
}

/// `dim Σ(M) = rk(M)`.
pub fn dim_check(p: &LatticePolytope, m: &Matroid) -> bool {
    p.dim() == m.rank()
}

fn box_bounds(coords: &[Vec<i64>], scale: i64) -> Vec<(i64, i64)> {
    let d = coords.first().map_or(0, Vec::len);
    (0..d)
        .map(|i| {
            let lo = coords.iter().map(|c| c[i]).min().unwrap();
            let hi = coords.iter().map(|c| c[i]).max().unwrap();
            (lo * scale, hi * scale)
        })
        .collect()
}

fn box_volume(bounds: &[(i64, i64)]) -> u128 {
    bounds
        .iter()
        .map(|&(lo, hi)| (hi - lo + 1) as u128)
        .fold(1u128, |a, b| a.saturating_mul(b))
}

fn check_budget(bounds: &[(i64, i64)], cap: u128) -> Result<()> {
    let needed = box_volume(bounds);
    if needed > cap {
        return Err(Error::Budget {
            what: "lattice box points",
            needed,
            cap,
            advice: "use the triangulation engine",
        });
    }
    Ok(())
}

/// Visits every point of the box, splitting the first coordinate across
/// workers, and folds per-point values into a histogram of `bins` slots.
fn box_histogram<F>(bounds: &[(i64, i64)], bins: usize, classify: F) -> Vec<u64>
where
    F: Fn(&[i64]) -> Option<usize> + Sync,
{
    if bounds.is_empty() {
        let mut h = vec![0u64; bins];
        if let Some(b) = classify(&[]) {
            h[b] += 1;
        }
        return h;
    }
    let (lo0, hi0) = bounds[0];
    (lo0..=hi0)
        .into_par_iter()
        .map(|x0| {
            let mut h = vec![0u64; bins];
            let mut x: Vec<i64> = bounds.iter().map(|b| b.0).collect();
            x[0] = x0;
            loop {
                if let Some(b) = classify(&x) {
                    h[b] += 1;
                }
                // odometer over coordinates 1..
                let mut i = bounds.len() - 1;
                loop {
                    if i == 0 {
                        return h;
                    }
                    if x[i] < bounds[i].1 {
                        x[i] += 1;
                        break;
                    }
                    x[i] = bounds[i].0;
                    i -= 1;
                }
            }
        })
        .reduce(
            || vec![0u64; bins],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Coordinates of `vertices - vertices[0]` in an integer basis of the lattice
/// of the affine hull.
fn affine_coords(p: &LatticePolytope) -> Result<Vec<Vec<i64>>> {
    let v0 = &p.vertices[0];
    let diffs: Vec<Vec<i64>> = p
        .vertices
        .iter()
        .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    Ok(lattice_frame(&diffs, p.ambient_dim)?.coords)
}

/// `|mP ∩ Z^n|` by box enumeration with an exact feasibility test of
/// `{λ >= 0, Σλ = m, Vλ = x}` per box point.
pub fn count_points(p: &LatticePolytope, m: u32, box_cap: u128) -> Result<BigInt> {
    if p.vertices.is_empty() {
        return Ok(BigInt::zero());
    }
    if m == 0 {
        return Ok(BigInt::from(1));
    }
    let coords = affine_coords(p)?;
    let bounds = box_bounds(&coords, m as i64);
    check_budget(&bounds, box_cap)?;
    let lp = PointLp::new(&coords);
    let h = box_histogram(&bounds, 1, |x| {
        lp.feasible_with_total(x, m as i64).then_some(0)
    });
    Ok(BigInt::from(h[0]))
}

/// `L(0), ..., L(d)` for `d = dim P`.
pub fn ehrhart_counts(p: &LatticePolytope, box_cap: u128) -> Result<Vec<BigInt>> {
    let d = p.dim();
    if p.vertices.is_empty() {
        return Err(Error::Input("empty polytope".into()));
    }
    if !p.is_centrally_symmetric() {
        return (0..=d as u32).map(|m| count_points(p, m, box_cap)).collect();
    }
    let frame = lattice_frame(&p.vertices, p.ambient_dim)?;
    let bounds = box_bounds(&frame.coords, d as i64);
    check_budget(&bounds, box_cap)?;
    let lp = PointLp::new(&frame.coords);
    let cuts = SubsetCuts::new(&frame.coords);
    // gauge(-x) = gauge(x): walk slices with x_0 >= 0 and weight x_0 > 0 twice
    let mut half = bounds.clone();
    if let Some(b) = half.first_mut() {
        b.0 = 0;
    }
    let hist = box_histogram(&half, 2 * (d + 1), |x| {
        if cuts.lower_bound(x) > d as i64 {
            return None;
        }
        let k = lp.gauge(x).expect("span covers the frame").ceil();
        let twice = x.first().is_some_and(|&x0| x0 > 0);
        (k <= d as i128).then_some(k as usize + if twice { d + 1 } else { 0 })
    });
    let mut acc = 0u64;
    Ok((0..=d)
        .map(|k| {
            acc += hist[k] + 2 * hist[d + 1 + k];
            BigInt::from(acc)
        })
        .collect())
}

/// Valid inequalities `|Σ_{i∈S} x_i| <= m · h_S` of a centrally symmetric
/// polytope `P` for every coordinate subset `S`, used to skip LPs for box
/// points that are clearly outside `dP`.
struct SubsetCuts {
    dim: usize,
    support: Vec<i64>,
}

impl SubsetCuts {
    const MAX_DIM: usize = 12;

    fn new(coords: &[Vec<i64>]) -> Self {
        let dim = coords.first().map_or(0, Vec::len);
        if dim > Self::MAX_DIM {
            return SubsetCuts {
                dim,
                support: Vec::new(),
            };
        }
        let mut support = vec![0i64; 1 << dim];
        for v in coords {
            let sums = Self::subset_sums(v);
            for (h, s) in support.iter_mut().zip(sums) {
                *h = (*h).max(s.abs());
            }
        }
        SubsetCuts { dim, support }
    }

    fn subset_sums(x: &[i64]) -> Vec<i64> {
        let mut sums = vec![0i64; 1 << x.len()];
        for s in 1..sums.len() {
            let low = s.trailing_zeros() as usize;
            sums[s] = sums[s & (s - 1)] + x[low];
        }
        sums
    }

    /// A lower bound on the smallest `m` with `x ∈ mP`.
    fn lower_bound(&self, x: &[i64]) -> i64 {
        if self.support.is_empty() || self.dim == 0 {
            return 0;
        }
        let sums = Self::subset_sums(x);
        let mut best = 0;
        for (s, h) in sums.iter().zip(&self.support).skip(1) {
            if *h > 0 {
                best = best.max(Integer::div_ceil(&s.abs(), h));
            }
        }
        best
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EhrhartData {
    pub dim: usize,
    pub counts: Vec<BigInt>,
    pub hstar: IntPolynomial,
}

impl EhrhartData {
    /// Normalized volume `h*(1)`.
    pub fn volume(&self) -> BigInt {
        self.hstar.eval_at_one()
    }
}

pub fn ehrhart_data(p: &LatticePolytope, box_cap: u128) -> Result<EhrhartData> {
    let counts = ehrhart_counts(p, box_cap)?;
    let dim = counts.len() - 1;
    let hstar = hstar_from_counts(&counts, dim)?;
    Ok(EhrhartData { dim, counts, hstar })
}

/// `h*_j = Σ_{i<=j} (-1)^{j-i} C(d+1, j-i) L(i)`.
pub fn hstar_from_counts(counts: &[BigInt], d: usize) -> Result<IntPolynomial> {
    if counts.len() != d + 1 {
        return Err(Error::Input(format!(
            "need {} counts for dimension {d}, got {}",
            d + 1,
            counts.len()
        )));
    }
    if counts[0] != BigInt::from(1) {
        return Err(Error::Input("L(0) must be 1".into()));
    }
    let mut h = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let mut acc = BigInt::zero();
        for i in 0..=j {
            let term = binom(d as i64 + 1, (j - i) as i64) * &counts[i];
            if (j - i) % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if acc.is_negative() {
            return Err(Error::Invariant(format!(
                "h*_{j} = {acc} is negative; counts {counts:?}"
            )));
        }
        h.push(acc);
    }
    Ok(IntPolynomial::new(h))
}

/// Unique `γ` with `h(t) = Σ γ_i t^i (1+t)^{d-2i}`, `d = deg h`, solved from
/// the lowest coefficient up. Has `⌊d/2⌋ + 1` entries.
pub fn gamma_from_hstar(h: &IntPolynomial) -> Result<Vec<BigRational>> {
    if !h.is_palindromic() {
        return Err(Error::Precondition(format!("{h} is not symmetric")));
    }
    let d = h.degree().unwrap_or(0);
    let mut rest = h.to_rational();
    let mut gamma = Vec::with_capacity(d / 2 + 1);
    for i in 0..=d / 2 {
        let g = rest.coeff(i);
        let term = gamma_term(&g, i, d);
        rest = &rest - &term;
        gamma.push(g);
    }
    if !rest.is_zero() {
        return Err(Error::Invariant(format!("γ expansion leaves {rest}")));
    }
    Ok(gamma)
}

fn gamma_term(g: &BigRational, i: usize, d: usize) -> RatPolynomial {
    &IntPolynomial::one_plus_t_pow(d - 2 * i).to_rational() * &RatPolynomial::monomial(g.clone(), i)
}

/// `Σ γ_i t^i (1+t)^{d-2i}`.
pub fn expand_gamma(gamma: &[BigRational], d: usize) -> RatPolynomial {
    gamma
        .iter()
        .enumerate()
        .fold(RatPolynomial::zero(), |acc, (i, g)| &acc + &gamma_term(g, i, d))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Predicates {
    pub symmetric: bool,
    pub unimodal: bool,
    pub gamma_nonnegative: bool,
}

pub fn predicates(h: &IntPolynomial) -> Predicates {
    let symmetric = h.is_palindromic();
    let gamma_nonnegative =
        symmetric && gamma_from_hstar(h).is_ok_and(|g| g.iter().all(|c| !c.is_negative()));
    Predicates {
        symmetric,
        unimodal: h.is_unimodal(),
        gamma_nonnegative,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::Graph;
    use crate::poly::big;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| big(x)).collect()
    }

    fn rats(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| crate::poly::rat(x)).collect()
    }

    #[test]
    fn segment() {
        let m = Matroid::from_rows(&[vec![1]]).unwrap();
        let p = sep_of(&m).unwrap();
        assert_eq!(p.vertices(), &[vec![1], vec![-1]]);
        assert_eq!(count_points(&p, 3, DEFAULT_BOX_BUDGET).unwrap(), big(7));
        let e = ehrhart_data(&p, DEFAULT_BOX_BUDGET).unwrap();
        assert_eq!(e.hstar, IntPolynomial::from_i64(&[1, 1]));
    }

    #[test]
    fn hexagon() {
        let m = Matroid::cycle_matroid(&Graph::complete(3).unwrap()).unwrap();
        let p = sep_of(&m).unwrap();
        assert_eq!(p.vertices().len(), 6);
        assert!(p.is_centrally_symmetric());
        assert!(dim_check(&p, &m));
        assert_eq!(count_points(&p, 1, DEFAULT_BOX_BUDGET).unwrap(), big(7));
        assert_eq!(count_points(&p, 2, DEFAULT_BOX_BUDGET).unwrap(), big(19));
        let e = ehrhart_data(&p, DEFAULT_BOX_BUDGET).unwrap();
        assert_eq!(e.counts, ints(&[1, 7, 19]));
        assert_eq!(e.hstar, IntPolynomial::from_i64(&[1, 4, 1]));
        assert_eq!(e.volume(), big(6));
    }

    #[test]
    fn loops_are_dropped() {
        let g = Graph::new(2, vec![(0, 1), (1, 1)]).unwrap();
        let p = sep_of(&Matroid::cycle_matroid(&g).unwrap()).unwrap();
        assert_eq!(p.dropped_loops(), 1);
        assert_eq!(p.vertices().len(), 2);
    }

    #[test]
    fn rank_zero_rejected() {
        let m = Matroid::from_rows(&[vec![0, 0]]).unwrap();
        assert!(sep_of(&m).is_err());
    }

    #[test]
    fn non_full_dimensional_counts() {
        // hexagon embedded in the plane x + y + z = 0
        let vs: Vec<Vec<i64>> = [[1, -1, 0], [0, 1, -1], [1, 0, -1]]
            .iter()
            .flat_map(|v| [v.to_vec(), v.iter().map(|x| -x).collect()])
            .collect();
        let p = LatticePolytope::new(3, vs).unwrap();
        assert_eq!(p.dim(), 2);
        let e = ehrhart_data(&p, DEFAULT_BOX_BUDGET).unwrap();
        assert_eq!(e.hstar, IntPolynomial::from_i64(&[1, 4, 1]));
        assert_eq!(count_points(&p, 2, DEFAULT_BOX_BUDGET).unwrap(), big(19));
    }

    #[test]
    fn non_symmetric_counts() {
        // unit square: L(m) = (m+1)^2, h* = 1 + t
        let p = LatticePolytope::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]])
            .unwrap();
        let e = ehrhart_data(&p, DEFAULT_BOX_BUDGET).unwrap();
        assert_eq!(e.counts, ints(&[1, 4, 9]));
        assert_eq!(e.hstar, IntPolynomial::from_i64(&[1, 1]));
    }

    #[test]
    fn budget_refusal() {
        let m = Matroid::cycle_matroid(&Graph::complete(3).unwrap()).unwrap();
        let p = sep_of(&m).unwrap();
        assert!(matches!(ehrhart_counts(&p, 10), Err(Error::Budget { .. })));
    }

    #[test]
    fn hstar_transform() {
        assert_eq!(
            hstar_from_counts(&ints(&[1, 3]), 1).unwrap(),
            IntPolynomial::from_i64(&[1, 1])
        );
        assert_eq!(
            hstar_from_counts(&ints(&[1, 7, 19]), 2).unwrap(),
            IntPolynomial::from_i64(&[1, 4, 1])
        );
        assert!(hstar_from_counts(&ints(&[1, 1, 1]), 2).is_err());
        assert!(hstar_from_counts(&ints(&[2, 3]), 1).is_err());
    }

    #[test]
    fn gamma_vectors() {
        let g = |h: &[i64]| gamma_from_hstar(&IntPolynomial::from_i64(h)).unwrap();
        assert_eq!(g(&[1, 1]), rats(&[1]));
        assert_eq!(g(&[1, 10, 22, 10, 1]), rats(&[1, 6, 4]));
        assert_eq!(
            g(&[1, 26, 297, 1908, 6264, 9108, 6264, 1908, 297, 26, 1]),
            rats(&[1, 16, 124, 596, 914, -148])
        );
        assert_eq!(g(&[1, 1, 1]), rats(&[1, -1]));
        assert!(gamma_from_hstar(&IntPolynomial::from_i64(&[1, 2])).is_err());
        let h = IntPolynomial::from_i64(&[1, 10, 22, 10, 1]);
        assert_eq!(expand_gamma(&g(&[1, 10, 22, 10, 1]), 4), h.to_rational());
    }

    #[test]
    fn predicate_table() {
        let p = |h: &[i64]| predicates(&IntPolynomial::from_i64(h));
        let t = |s, u, g| Predicates {
            symmetric: s,
            unimodal: u,
            gamma_nonnegative: g,
        };
        assert_eq!(p(&[1, 4, 1]), t(true, true, true));
        assert_eq!(p(&[1, 1, 1]), t(true, true, false));
        assert_eq!(
            p(&[1, 26, 297, 1908, 6264, 9108, 6264, 1908, 297, 26, 1]),
            t(true, true, false)
        );
    }
}
