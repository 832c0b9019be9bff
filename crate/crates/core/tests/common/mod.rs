#![allow(dead_code)]

use sepkit::matroid::Graph;

/// One connected simple graph per isomorphism class on exactly `nv`
/// vertices, found by brute-force canonical forms (fine up to 6 vertices).
pub fn connected_graphs(nv: usize) -> Vec<Graph> {
    graphs(nv, true)
}

/// Same as [`connected_graphs`] without the connectivity filter.
pub fn graphs(nv: usize, connected_only: bool) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..nv).flat_map(|a| (a + 1..nv).map(move |b| (a, b))).collect();
    let index = |a: usize, b: usize| pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
    let perms = permutations(nv);
    let images: Vec<Vec<usize>> = perms
        .iter()
        .map(|p| pairs.iter().map(|&(a, b)| index(p[a], p[b])).collect())
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    for mask in 0u32..1 << pairs.len() {
        if connected_only && !connected(nv, &pairs, mask) {
            continue;
        }
        let canon = images
            .iter()
            .map(|img| (0..pairs.len()).filter(|&k| mask >> k & 1 == 1).fold(0u32, |m, k| m | 1 << img[k]))
            .min()
            .unwrap();
        seen.insert(canon);
    }
    seen.into_iter()
        .map(|mask| {
            let edges = (0..pairs.len()).filter(|&k| mask >> k & 1 == 1).map(|k| pairs[k]).collect();
            Graph::new(nv, edges).unwrap()
        })
        .collect()
}

fn connected(nv: usize, pairs: &[(usize, usize)], mask: u32) -> bool {
    let mut reach = 1u32;
    loop {
        let mut next = reach;
        for (k, &(a, b)) in pairs.iter().enumerate() {
            if mask >> k & 1 == 1 && (reach >> a & 1 == 1 || reach >> b & 1 == 1) {
                next |= 1 << a | 1 << b;
            }
        }
        if next == reach {
            return reach.count_ones() as usize == nv;
        }
        reach = next;
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}
