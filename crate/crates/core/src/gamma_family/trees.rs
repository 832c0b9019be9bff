//! Oriented spanning trees of Γ(n+1) in the triangulating tree set, their
//! pair structure relative to the triangles `u_i v_i u_(i+1)`, and an audit
//! that buckets them against the terms of the closed h* formula.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matroid::Graph;
use crate::poly::{binom, IntPolynomial};
use crate::triangulation::{OrientedSet, VariableOrder};

use super::{closed_hstar, closed_volume, f_pql, GammaGraph};

/// Largest `n` for which the trees of Γ(n+1) are enumerated.
pub const MAX_TREE_N: usize = 8;

/// An oriented edge set: `edges` is the support, `reversed ⊆ edges` marks
/// edges traversed head to tail relative to the graph's edge direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrientedTree {
    pub edges: u64,
    pub reversed: u64,
}

impl OrientedTree {
    pub fn sign(&self, e: usize) -> Option<i8> {
        if self.edges >> e & 1 == 0 {
            None
        } else if self.reversed >> e & 1 == 1 {
            Some(-1)
        } else {
            Some(1)
        }
    }

    pub fn pairs(&self) -> Vec<(usize, i8)> {
        (0..64)
            .filter_map(|e| self.sign(e).map(|s| (e, s)))
            .collect()
    }

    /// `(tail, head)` of edge `e` as oriented in this tree.
    pub fn ends(&self, g: &Graph, e: usize) -> (usize, usize) {
        let (a, b) = g.edge(e);
        if self.reversed >> e & 1 == 1 {
            (b, a)
        } else {
            (a, b)
        }
    }

    pub fn to_oriented_set(&self, order: &VariableOrder) -> OrientedSet {
        OrientedSet::from_pairs(order, &self.pairs())
    }

    pub fn from_oriented_set(s: &OrientedSet, order: &VariableOrder) -> Self {
        let mut t = OrientedTree {
            edges: 0,
            reversed: 0,
        };
        for (e, sign) in s.pairs(order) {
            t.edges |= 1 << e;
            if sign < 0 {
                t.reversed |= 1 << e;
            }
        }
        t
    }

    pub fn display(&self, g: &Graph) -> String {
        self.pairs()
            .iter()
            .map(|&(e, s)| format!("{}{}", if s > 0 { '+' } else { '-' }, g.labels()[e]))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

struct CycleMask {
    mask: u64,
    fwd: u64,
    len: usize,
}

fn cycle_masks(g: &Graph) -> Vec<CycleMask> {
    g.simple_cycles()
        .into_iter()
        .map(|c| CycleMask {
            mask: c.mask(),
            fwd: c.edges.iter().filter(|&&(_, s)| s > 0).fold(0, |m, &(e, _)| m | 1 << e),
            len: c.len(),
        })
        .collect()
}

impl CycleMask {
    /// The cycle condition on the oriented edges in `edges`: per direction
    /// class at most `⌊(|C|-1)/2⌋` edges, except that an even cycle may
    /// have exactly `|C|/2` in a class containing ẽ (edge 0). Adding edges
    /// never repairs a violation, so partial orientations can be tested.
    fn admits(&self, edges: u64, reversed: u64) -> bool {
        let d = edges & self.mask;
        let agree = self.fwd ^ reversed;
        let k = self.len / 2;
        let ok = |x: u64| {
            let s = x.count_ones() as usize;
            if self.len % 2 == 1 {
                s <= k
            } else {
                s < k || (s == k && x & 1 == 1)
            }
        };
        ok(d & agree) && ok(d & !agree)
    }
}

fn spanning_trees(g: &Graph) -> Vec<u64> {
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    fn rec(g: &Graph, e: usize, need: usize, parent: &mut Vec<usize>, mask: u64, out: &mut Vec<u64>) {
        if need == 0 {
            out.push(mask);
            return;
        }
        if g.edge_count() - e < need {
            return;
        }
        let (a, b) = g.edge(e);
        let (ra, rb) = (find(parent, a), find(parent, b));
        if ra != rb {
            let saved = parent.clone();
            parent[ra] = rb;
            rec(g, e + 1, need - 1, parent, mask | 1 << e, out);
            *parent = saved;
        }
        rec(g, e + 1, need, parent, mask, out);
    }
    let mut out = Vec::new();
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    rec(g, 0, g.vertex_count() - 1, &mut parent, 0, &mut out);
    out
}

/// Depth-first over orientations of the support `edges`, testing each cycle
/// when one of its edges is oriented. Edges in `fixed` only take the
/// orientation given by `fixed_rev`.
fn orientations(
    edges: u64,
    cycles: &[CycleMask],
    by_edge: &[Vec<usize>],
    fixed: u64,
    fixed_rev: u64,
    out: &mut impl FnMut(OrientedTree),
) {
    let list: Vec<usize> = (0..64).filter(|&e| edges >> e & 1 == 1).collect();
    fn rec(
        list: &[usize],
        k: usize,
        assigned: u64,
        rev: u64,
        cycles: &[CycleMask],
        by_edge: &[Vec<usize>],
        fixed: (u64, u64),
        out: &mut impl FnMut(OrientedTree),
    ) {
        let Some(&e) = list.get(k) else {
            out(OrientedTree {
                edges: assigned,
                reversed: rev,
            });
            return;
        };
        let assigned = assigned | 1 << e;
        for flip in [false, true] {
            if fixed.0 >> e & 1 == 1 && (fixed.1 >> e & 1 == 1) != flip {
                continue;
            }
            let rev = if flip { rev | 1 << e } else { rev };
            if by_edge[e].iter().all(|&c| cycles[c].admits(assigned, rev)) {
                rec(list, k + 1, assigned, rev, cycles, by_edge, fixed, out);
            }
        }
    }
    rec(&list, 0, 0, 0, cycles, by_edge, (fixed, fixed_rev), out);
}

struct Search {
    trees: Vec<u64>,
    cycles: Vec<CycleMask>,
    by_edge: Vec<Vec<usize>>,
}

fn search(g: &GammaGraph) -> Result<Search> {
    if g.n() > MAX_TREE_N {
        return Err(Error::Budget {
            what: "triangulating trees",
            needed: g.n() as u128,
            cap: MAX_TREE_N as u128,
            advice: "use the closed formulas for larger n",
        });
    }
    let graph = g.graph();
    let cycles = cycle_masks(graph);
    let by_edge = (0..graph.edge_count())
        .map(|e| (0..cycles.len()).filter(|&c| cycles[c].mask >> e & 1 == 1).collect())
        .collect();
    Ok(Search {
        trees: spanning_trees(graph),
        cycles,
        by_edge,
    })
}

/// Every oriented spanning tree of Γ(n+1) meeting the cycle condition,
/// sorted.
pub fn triangulating_trees(n: usize) -> Result<Vec<OrientedTree>> {
    let g = GammaGraph::new(n)?;
    let s = search(&g)?;
    let mut out: Vec<OrientedTree> = s
        .trees
        .par_iter()
        .flat_map_iter(|&t| {
            let mut v = Vec::new();
            orientations(t, &s.cycles, &s.by_edge, 0, 0, &mut |o| v.push(o));
            v
        })
        .collect();
    out.sort_unstable();
    Ok(out)
}

/// Size of the triangulating tree set, orienting each chordless pair only
/// towards its `v_i` and doubling: the two orientations sharing an end are
/// the only admissible ones and are interchangeable.
pub fn count_triangulating_trees(n: usize) -> Result<u64> {
    let g = GammaGraph::new(n)?;
    let s = search(&g)?;
    Ok(s.trees
        .par_iter()
        .map(|&t| {
            let (mut fixed, mut fixed_rev, mut pairs) = (0u64, 0u64, 0u32);
            for i in 1..=n {
                let (a, b) = (g.a(i), g.b(i));
                if t >> a & 1 == 1 && t >> b & 1 == 1 {
                    // a = u_i → v_i as stored, b = v_i → u_(i+1) reversed
                    fixed |= 1 << a | 1 << b;
                    fixed_rev |= 1 << b;
                    pairs += 1;
                }
            }
            let mut c = 0u64;
            orientations(t, &s.cycles, &s.by_edge, fixed, fixed_rev, &mut |_| c += 1);
            c << pairs
        })
        .sum())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    Left,
    Right,
}

/// What a spanning tree contains of triangle `u_i v_i u_(i+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairKind {
    /// `u_i v_i` and `v_i u_(i+1)`; `shared_end` when both share a tail or
    /// both share a head.
    Chordless { shared_end: bool },
    /// The chord with one other edge. `alpha` when the other edge meets the
    /// chord end nearer to `u1` in the tree. `toward` is `Some(d)` when both
    /// edges point towards `u1` (`d = true`) or both away.
    Chorded {
        non_chord: usize,
        alpha: bool,
        side: Side,
        toward: Option<bool>,
    },
    /// A single non-chord edge.
    Unpaired { edge: usize, side: Side },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Anchor {
    First,
    Last,
}

/// The pendant edge `u1 v(n+1)` or `u(n+1) v(n+1)` that replaces the
/// unpaired edge; `outward` when it is directed away from the anchor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ModifiedEdge {
    pub anchor: Anchor,
    pub outward: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeClassification {
    /// Entry `i - 1` describes triangle `i`.
    pub triangles: Vec<PairKind>,
    /// Number of chords `u_i u_(i+1)` in the tree.
    pub chords: usize,
    /// Whether ẽ is in the tree.
    pub eps: bool,
    /// Vertices of the component of `T - ẽ` containing `u1`.
    pub left: Vec<usize>,
    /// The remaining vertices together with `u1`.
    pub right: Vec<usize>,
    /// The unpaired edge and whether it and ẽ point towards each other
    /// (`Some(true)`), away from each other (`Some(false)`), or neither.
    pub unpaired_toward_tilde: Option<Option<bool>>,
    /// The pendant edge of the modified tree, when ẽ is present and the
    /// orientation is opposite to the unpaired edge.
    pub modified: Option<ModifiedEdge>,
    /// Type of the pair formed by ẽ and the pendant edge (true = α).
    pub tilde_alpha: Option<bool>,
    /// Tree edges pointing away from `u1`.
    pub away: usize,
    /// Same count taken in the modified tree.
    pub away_modified: Option<usize>,
    /// Whether the chord total `c + eps` of the modified tree is odd.
    pub odd_part: bool,
    pub l: usize,
    pub p: usize,
    pub q: usize,
    /// α pairs on the left (resp. right) with both edges towards `u1`.
    pub i: usize,
    pub j: usize,
    /// Edges of the pair (ẽ, pendant) pointing towards `u1`.
    pub tilde_toward: Option<usize>,
}

impl TreeClassification {
    pub fn chordless_pairs(&self) -> usize {
        self.triangles
            .iter()
            .filter(|k| matches!(k, PairKind::Chordless { .. }))
            .count()
    }

    pub fn chorded_pairs(&self) -> usize {
        self.triangles
            .iter()
            .filter(|k| matches!(k, PairKind::Chorded { .. }))
            .count()
    }

    pub fn unpaired_edge(&self) -> Option<usize> {
        self.triangles.iter().find_map(|k| match k {
            PairKind::Unpaired { edge, .. } => Some(*edge),
            _ => None,
        })
    }

    /// Edges towards `u1` predicted by the pair structure.
    pub fn predicted_toward(&self, n: usize) -> Option<usize> {
        let r = 2 * self.l - self.p - self.q;
        if self.odd_part {
            Some(n - 2 * self.l - 1 + 2 * (self.i + self.j) + r + self.tilde_toward?)
        } else {
            Some(n - 2 * self.l + 2 * (self.i + self.j) + r)
        }
    }
}

fn component(g: &Graph, edges: u64, skip: u64, start: usize) -> Vec<bool> {
    let mut seen = vec![false; g.vertex_count()];
    seen[start] = true;
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        for e in 0..g.edge_count() {
            if (edges & !skip) >> e & 1 == 0 {
                continue;
            }
            let (a, b) = g.edge(e);
            let y = if a == x {
                b
            } else if b == x {
                a
            } else {
                continue;
            };
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen
}

/// Pair structure, sides, modified tree and the statistics feeding the
/// closed h* formula, for an oriented spanning tree of Γ(n+1).
pub fn classify(t: &OrientedTree, g: &GammaGraph) -> Result<TreeClassification> {
    let graph = g.graph();
    let n = g.n();
    let nv = graph.vertex_count();
    if t.edges >> graph.edge_count() != 0 || t.reversed & !t.edges != 0 {
        return Err(Error::Input("edge set outside Γ".into()));
    }
    if t.edges.count_ones() as usize != nv - 1 || component(graph, t.edges, 0, 0).contains(&false) {
        return Err(Error::Input("not a spanning tree of Γ".into()));
    }
    let u1 = g.u(1);
    let un = g.u(n + 1);
    let mut depth = vec![usize::MAX; nv];
    let mut parent = vec![usize::MAX; nv];
    depth[u1] = 0;
    let mut queue = std::collections::VecDeque::from([u1]);
    while let Some(x) = queue.pop_front() {
        for e in 0..graph.edge_count() {
            if t.edges >> e & 1 == 0 {
                continue;
            }
            let (a, b) = graph.edge(e);
            let y = if a == x { b } else if b == x { a } else { continue };
            if depth[y] == usize::MAX {
                depth[y] = depth[x] + 1;
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    let points_away = |e: usize| {
        let (tail, head) = t.ends(graph, e);
        parent[head] == tail
    };
    let away = (0..graph.edge_count())
        .filter(|&e| t.edges >> e & 1 == 1 && points_away(e))
        .count();
    let eps = t.edges & 1 == 1;
    let in_left = component(graph, t.edges, 1 << GammaGraph::TILDE, u1);
    let side_of = |x: usize| if in_left[x] { Side::Left } else { Side::Right };
    let has = |e: usize| t.edges >> e & 1 == 1;

    let mut triangles = Vec::with_capacity(n);
    let mut chords = 0;
    for i in 1..=n {
        let (c, a, b) = (g.chord(i), g.a(i), g.b(i));
        let kind = match (has(c), has(a), has(b)) {
            (false, true, true) => {
                let (ta, ha) = t.ends(graph, a);
                let (tb, hb) = t.ends(graph, b);
                PairKind::Chordless {
                    shared_end: ta == tb || ha == hb,
                }
            }
            (true, x, y) if x != y => {
                chords += 1;
                let other = if x { a } else { b };
                let touches = if x { g.u(i) } else { g.u(i + 1) };
                let near = if depth[g.u(i)] < depth[g.u(i + 1)] {
                    g.u(i)
                } else {
                    g.u(i + 1)
                };
                let toward = match (points_away(c), points_away(other)) {
                    (false, false) => Some(true),
                    (true, true) => Some(false),
                    _ => None,
                };
                PairKind::Chorded {
                    non_chord: other,
                    alpha: touches == near,
                    side: side_of(g.v(i)),
                    toward,
                }
            }
            (false, x, y) if x != y => {
                let edge = if x { a } else { b };
                PairKind::Unpaired {
                    edge,
                    side: side_of(g.v(i)),
                }
            }
            _ => return Err(Error::Invariant(format!("triangle {i} has an impossible edge set"))),
        };
        triangles.push(kind);
    }

    let left: Vec<usize> = (0..nv).filter(|&x| in_left[x]).collect();
    let right: Vec<usize> = (0..nv).filter(|&x| !in_left[x] || x == u1).collect();

    let mut unpaired_toward_tilde = None;
    let mut modified = None;
    let mut tilde_alpha = None;
    let mut away_modified = None;
    let mut tilde_toward = None;
    let unpaired = triangles.iter().enumerate().find_map(|(k, kind)| match kind {
        PairKind::Unpaired { edge, side } => Some((k + 1, *edge, *side)),
        _ => None,
    });
    if let Some((k, e, side)) = unpaired {
        // the end of ẽ facing e, and the u-end of e (its v-end is a leaf)
        let tilde_near = if side == Side::Left { u1 } else { un };
        let e_near = if e == g.a(k) { g.u(k) } else { g.u(k + 1) };
        let tilde_to = t.ends(graph, GammaGraph::TILDE).1 == tilde_near;
        let e_to = t.ends(graph, e).1 == e_near;
        let rel = (tilde_to == e_to).then_some(tilde_to);
        unpaired_toward_tilde = Some(rel);
        // The pendant keeps e's pointing status. It hangs at u1 when ẽ and
        // the pendant then point the same way relative to u1 (an α pair),
        // otherwise at u(n+1) (a β pair); with ẽ and e opposite this is the
        // four-case rule (e on the left goes to u1, on the right to u(n+1)).
        let e_away = points_away(e);
        let tilde_to_u1 = t.ends(graph, GammaGraph::TILDE).1 == u1;
        let anchor = if tilde_to_u1 != e_away { Anchor::First } else { Anchor::Last };
        let md = ModifiedEdge {
            anchor,
            outward: e_away,
        };
        modified = Some(md);
        tilde_alpha = Some(anchor == Anchor::First);
        away_modified = Some(away - usize::from(e_away) + usize::from(md.outward));
        tilde_toward = Some(usize::from(tilde_to_u1) + usize::from(!e_away));
    }

    let total = chords + usize::from(eps);
    let odd_part = total % 2 == 1;
    let l = total / 2;
    let (mut p, mut q, mut i, mut j) = (0, 0, 0, 0);
    for kind in &triangles {
        if let PairKind::Chorded {
            alpha: true,
            side,
            toward,
            ..
        } = kind
        {
            let to = usize::from(*toward == Some(true));
            match side {
                Side::Left => {
                    p += 1;
                    i += to;
                }
                Side::Right => {
                    q += 1;
                    j += to;
                }
            }
        }
    }
    if !odd_part && tilde_alpha == Some(true) {
        q += 1;
        j += usize::from(tilde_toward == Some(2));
    }

    Ok(TreeClassification {
        triangles,
        chords,
        eps,
        left,
        right,
        unpaired_toward_tilde,
        modified,
        tilde_alpha,
        away,
        away_modified,
        odd_part,
        l,
        p,
        q,
        i,
        j,
        tilde_toward,
    })
}

/// One compared quantity of the audit.
#[derive(Clone, Debug, Serialize)]
pub struct BucketCheck {
    pub kind: &'static str,
    pub key: String,
    pub expected: String,
    pub actual: String,
    pub holds: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub n: usize,
    pub trees: usize,
    pub checks: Vec<BucketCheck>,
    pub violations: Vec<String>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.checks.iter().all(|c| c.holds)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum TildeRole {
    Absent,
    Alpha,
    Beta,
}

#[derive(Default)]
struct Bucket {
    skeletons: std::collections::BTreeSet<u64>,
    oriented: usize,
    witness: Option<OrientedTree>,
}

/// Buckets every triangulating tree of Γ(n+1) by its pair structure and
/// compares each bucket with the matching term of the closed h* formula:
/// tree counts per (part, ℓ, p, q, role of ẽ, triangles right of the
/// unpaired edge), oriented counts per (ℓ, p, q, i, j), the t-polynomial
/// per (ℓ, p, q), and the totals.
pub fn summand_audit(n: usize) -> Result<AuditReport> {
    let g = GammaGraph::new(n)?;
    let trees = triangulating_trees(n)?;
    let classes: Vec<TreeClassification> = trees
        .par_iter()
        .map(|t| classify(t, &g))
        .collect::<Result<_>>()?;
    let graph = g.graph();
    let mut violations = Vec::new();
    let mut checks = Vec::new();

    let mut skeleton: BTreeMap<(bool, usize, usize, usize, TildeRole, usize), Bucket> = BTreeMap::new();
    let mut oriented: BTreeMap<(bool, usize, usize, usize, usize, usize), Bucket> = BTreeMap::new();
    let mut polys: BTreeMap<(bool, usize, usize, usize), Vec<u64>> = BTreeMap::new();
    let mut total_poly = vec![0u64; 2 * n + 1];
    for (t, c) in trees.iter().zip(&classes) {
        let who = || t.display(graph);
        for kind in &c.triangles {
            match kind {
                PairKind::Chordless { shared_end: false } => {
                    violations.push(format!("chordless pair without a shared end: {}", who()))
                }
                PairKind::Chorded { alpha: true, toward: None, .. } => {
                    violations.push(format!("chorded pair with mixed orientation: {}", who()))
                }
                _ => {}
            }
        }
        if !c.eps && c.chords % 2 == 1 {
            violations.push(format!("odd chord count without ẽ: {}", who()));
        }
        if c.eps && c.chords == 0 && !matches!(c.unpaired_toward_tilde, Some(Some(_))) {
            violations.push(format!("ẽ and the unpaired edge not opposite: {}", who()));
        }
        if let Some(Some(toward)) = c.unpaired_toward_tilde {
            let side = c.triangles.iter().find_map(|k| match k {
                PairKind::Unpaired { side, .. } => Some(*side),
                _ => None,
            });
            let expected = match (toward, side) {
                (false, Some(Side::Left)) => Some((Anchor::First, true)),
                (false, Some(Side::Right)) => Some((Anchor::Last, true)),
                (true, Some(Side::Left)) => Some((Anchor::First, false)),
                (true, Some(Side::Right)) => Some((Anchor::Last, false)),
                _ => None,
            };
            if c.modified.map(|m| (m.anchor, m.outward)) != expected {
                violations.push(format!("modified tree differs from the four-case rule: {}", who()));
            }
        }
        if c.away_modified.is_some_and(|a| a != c.away) {
            violations.push(format!("modified tree changes the pointing count: {}", who()));
        }
        let toward = 2 * n - c.away;
        if c.predicted_toward(n) != Some(toward) {
            violations.push(format!(
                "towards-u1 count {toward} differs from the pair prediction {:?}: {}",
                c.predicted_toward(n),
                who()
            ));
        }
        total_poly[c.away] += 1;

        let role = match c.tilde_alpha {
            None => TildeRole::Absent,
            Some(true) => TildeRole::Alpha,
            Some(false) => TildeRole::Beta,
        };
        // regular triangles on the right side
        let right = c
            .triangles
            .iter()
            .filter(|k| match k {
                PairKind::Chordless { .. } => false,
                PairKind::Chorded { side, .. } => *side == Side::Right,
                PairKind::Unpaired { .. } => false,
            })
            .count()
            + (1..=n)
                .filter(|&i| {
                    matches!(c.triangles[i - 1], PairKind::Chordless { .. }) && !c.left.contains(&g.v(i))
                })
                .count();
        let b = skeleton
            .entry((c.odd_part, c.l, c.p, c.q, role, right))
            .or_default();
        b.skeletons.insert(t.edges);
        b.oriented += 1;
        b.witness.get_or_insert(*t);
        let b = oriented
            .entry((c.odd_part, c.l, c.p, c.q, c.i, c.j))
            .or_default();
        b.skeletons.insert(t.edges);
        b.oriented += 1;
        b.witness.get_or_insert(*t);
        let poly = polys
            .entry((c.odd_part, c.l, c.p, c.q))
            .or_insert_with(|| vec![0; 2 * n + 1]);
        poly[toward] += 1;
    }

    let ni = n as i64;
    let witness = |b: Option<&Bucket>| b.and_then(|b| b.witness).map(|t| t.display(graph));
    let push = |checks: &mut Vec<BucketCheck>, kind, key: String, expected: String, actual: String, w| {
        checks.push(BucketCheck {
            kind,
            holds: expected == actual,
            key,
            expected,
            actual,
            witness: w,
        });
    };

    // tree counts per skeleton bucket
    let mut per_part: BTreeMap<(bool, usize, usize, usize, TildeRole), usize> = BTreeMap::new();
    for odd in [false, true] {
        for l in 0..=n / 2 {
            for p in 0..=2 * l {
                for q in 0..=2 * l - p {
                    for role in [TildeRole::Absent, TildeRole::Alpha, TildeRole::Beta] {
                        for r in 0..n {
                            let (li, pi, qi, ri) = (l as i64, p as i64, q as i64, r as i64);
                            let expected = match (odd, role) {
                                (false, TildeRole::Absent) if q == 0 && r == 0 => {
                                    binom(ni, 2 * li) * binom(2 * li, pi)
                                }
                                (false, TildeRole::Alpha) => {
                                    binom(ni - ri - 1, pi)
                                        * binom(ri, qi - 1)
                                        * binom(ni - pi - qi, 2 * li - pi - qi)
                                }
                                (false, TildeRole::Beta) => {
                                    binom(ni - ri - 1, pi)
                                        * binom(ri, qi)
                                        * binom(ni - 1 - pi - qi, 2 * li - 1 - pi - qi)
                                }
                                (true, TildeRole::Alpha | TildeRole::Beta) => {
                                    binom(ni - 1 - ri, pi)
                                        * binom(ri, qi)
                                        * binom(ni - 1 - pi - qi, 2 * li - pi - qi)
                                }
                                _ => BigInt::from(0),
                            };
                            let key = (odd, l, p, q, role, r);
                            let got = skeleton.get(&key).map_or(0, |b| b.skeletons.len());
                            *per_part.entry((odd, l, p, q, role)).or_default() += got;
                            if expected == BigInt::from(0) && got == 0 {
                                continue;
                            }
                            push(
                                &mut checks,
                                "trees",
                                format!(
                                    "part={} l={l} p={p} q={q} tilde={role:?} right={r}",
                                    if odd { 2 } else { 1 }
                                ),
                                expected.to_string(),
                                got.to_string(),
                                witness(skeleton.get(&key)),
                            );
                        }
                    }
                }
            }
        }
    }
    // observed buckets outside the enumerated key range
    for key in skeleton.keys() {
        let (odd, l, p, q, _, r) = *key;
        if l > n / 2 || p + q > 2 * l || r >= n {
            violations.push(format!("tree bucket out of range: {key:?}"));
        }
        if odd && !matches!(key.4, TildeRole::Alpha | TildeRole::Beta) {
            violations.push(format!("odd part without ẽ: {key:?}"));
        }
    }

    // bucket totals and polynomials per (part, ℓ, p, q)
    for odd in [false, true] {
        for l in 0..=n / 2 {
            for p in 0..=2 * l {
                for q in 0..=2 * l - p {
                    let (li, pqi) = (l as i64, (p + q) as i64);
                    let f = f_pql(p, q, l);
                    let get = |r| per_part.get(&(odd, l, p, q, r)).copied().unwrap_or(0);
                    let part = if odd { 2 } else { 1 };
                    if odd && 2 * l + 1 > n {
                        // no room for an odd chord total
                        if get(TildeRole::Alpha) + get(TildeRole::Beta) != 0 || polys.contains_key(&(odd, l, p, q)) {
                            violations.push(format!("part 2 bucket l={l} should be empty"));
                        }
                        continue;
                    }
                    let (expected_count, actual_count, poly_expected) = if odd {
                        let per_type = binom(ni, 2 * li + 1) * binom(2 * li + 1, pqi + 1);
                        for role in [TildeRole::Alpha, TildeRole::Beta] {
                            push(
                                &mut checks,
                                "trees_total",
                                format!("part=2 l={l} p={p} q={q} tilde={role:?}"),
                                per_type.to_string(),
                                get(role).to_string(),
                                None,
                            );
                        }
                        let scale = IntPolynomial::monomial(
                            per_type.clone() * BigInt::from(2).pow((n - 2 * l - 1) as u32),
                            n - 2 * l - 1,
                        );
                        let poly = &(&scale * &IntPolynomial::one_plus_t_pow(2)) * &f;
                        (per_type, get(TildeRole::Alpha), poly)
                    } else {
                        let count = binom(ni, 2 * li) * binom(2 * li + 1, pqi + 1);
                        let got = get(TildeRole::Absent) + get(TildeRole::Alpha) + get(TildeRole::Beta);
                        let scale = IntPolynomial::monomial(
                            count.clone() * BigInt::from(2).pow((n - 2 * l) as u32),
                            n - 2 * l,
                        );
                        (count, got, &scale * &f)
                    };
                    if !odd {
                        push(
                            &mut checks,
                            "trees_total",
                            format!("part={part} l={l} p={p} q={q}"),
                            expected_count.to_string(),
                            actual_count.to_string(),
                            None,
                        );
                    }
                    let actual_poly = polys
                        .get(&(odd, l, p, q))
                        .map(|v| IntPolynomial::new(v.iter().map(|&x| BigInt::from(x)).collect()))
                        .unwrap_or_else(IntPolynomial::zero);
                    push(
                        &mut checks,
                        "polynomial",
                        format!("part={part} l={l} p={p} q={q}"),
                        poly_expected.to_string(),
                        actual_poly.to_string(),
                        None,
                    );
                    // orientation counts per (i, j)
                    let undirected = if odd {
                        2 * get(TildeRole::Alpha)
                    } else {
                        actual_count
                    };
                    let chordless = if odd { n - 2 * l - 1 } else { n - 2 * l };
                    for i in 0..=p {
                        for j in 0..=q {
                            let ways = binom(p as i64, i as i64)
                                * binom(q as i64, j as i64)
                                * binom(2 * li - pqi, li - q as i64 - i as i64 + j as i64);
                            let per_tree = if odd { ways * 2 } else { ways };
                            let expected = BigInt::from(undirected) * per_tree * (BigInt::from(1) << chordless);
                            let key = (odd, l, p, q, i, j);
                            let got = oriented.get(&key).map_or(0, |b| b.oriented);
                            if expected == BigInt::from(0) && got == 0 {
                                continue;
                            }
                            push(
                                &mut checks,
                                "orientations",
                                format!("part={part} l={l} p={p} q={q} i={i} j={j}"),
                                expected.to_string(),
                                got.to_string(),
                                witness(oriented.get(&key)),
                            );
                        }
                    }
                }
            }
        }
    }

    let total = IntPolynomial::new(total_poly.into_iter().map(BigInt::from).collect());
    push(
        &mut checks,
        "hstar",
        "all trees, pointing away from u1".into(),
        closed_hstar(n)?.to_string(),
        total.to_string(),
        None,
    );
    push(
        &mut checks,
        "volume",
        "tree count".into(),
        closed_volume(n).to_string(),
        trees.len().to_string(),
        None,
    );
    Ok(AuditReport {
        n,
        trees: trees.len(),
        checks,
        violations,
    })
}
