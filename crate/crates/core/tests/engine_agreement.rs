//! Lattice-point counting, the triangulation and the closed formulas agree.

mod common;

use num_bigint::BigInt;
use sepkit::ehrhart::{brute_force_hstar, ehrhart_data, sep_of, DEFAULT_BOX_BUDGET};
use sepkit::gamma_family::{closed_hstar, GammaGraph};
use sepkit::matroid::{Graph, Matroid};
use sepkit::triangulation::{facets_unimodular, triangulate, VariableOrder, DEFAULT_BASIS_BUDGET};

#[test]
fn isomorphism_class_counts() {
    let connected: Vec<usize> = (2..=6).map(|n| common::connected_graphs(n).len()).collect();
    assert_eq!(connected, vec![1, 2, 6, 21, 112]);
    let all: Vec<usize> = (2..=6).map(|n| common::graphs(n, false).len()).collect();
    assert_eq!(all, vec![2, 4, 11, 34, 156]);
}

#[test]
fn every_graph_up_to_six_vertices() {
    let mut checked = 0;
    for nv in 2..=6 {
        for g in common::graphs(nv, false) {
            if g.edge_count() == 0 {
                continue;
            }
            let m = Matroid::cycle_matroid(&g).unwrap();
            let data = ehrhart_data(&sep_of(&m).unwrap(), DEFAULT_BOX_BUDGET).unwrap();
            assert_eq!(data.dim, m.rank(), "{:?}", g.edges());
            let order = VariableOrder::ground(m.len());
            let (facets, s) = triangulate(&m, &order, DEFAULT_BASIS_BUDGET).unwrap();
            assert_eq!(data.hstar, s.h_vector, "{:?}", g.edges());
            assert!(data.hstar.is_palindromic(), "{:?}: {}", g.edges(), data.hstar);
            assert_eq!(BigInt::from(facets.len()), data.volume());
            assert!(facets_unimodular(&m, &order, &facets));
            checked += 1;
        }
    }
    assert_eq!(checked, 2 + 4 + 11 + 34 + 156 - 5);
}

#[test]
fn gamma_family_three_ways() {
    for n in 1..=3 {
        let g = GammaGraph::new(n).unwrap();
        let m = g.matroid().unwrap();
        let bf = brute_force_hstar(&m, DEFAULT_BOX_BUDGET).unwrap();
        let (_, s) = triangulate(&m, &g.variable_order(), DEFAULT_BASIS_BUDGET).unwrap();
        let closed = closed_hstar(n).unwrap();
        assert_eq!(bf, closed, "n={n}");
        assert_eq!(s.h_vector, closed, "n={n}");
    }
}

#[test]
fn cographic_and_matroid_inputs() {
    // rank 6 (n = 4) already costs minutes of lattice-point counting
    for n in [2, 3] {
        let m = Matroid::dual_k3n(n).unwrap();
        let bf = brute_force_hstar(&m, DEFAULT_BOX_BUDGET).unwrap();
        let (_, s) = triangulate(&m, &VariableOrder::ground(m.len()), DEFAULT_BASIS_BUDGET).unwrap();
        assert_eq!(bf, s.h_vector, "n={n}");
        let direct = Matroid::cycle_matroid(&Graph::complete_bipartite(3, n).unwrap())
            .unwrap()
            .dual()
            .unwrap();
        assert_eq!(brute_force_hstar(&direct, DEFAULT_BOX_BUDGET).unwrap(), bf, "n={n}");
    }
}

#[test]
fn linear_coefficient_counts_vertices() {
    // simple matroids: the only lattice points of Σ(M) are 0 and ±columns,
    // so h*_1 = L(1) - (d + 1) = 2|E| - r
    for m in [
        Matroid::dual_k3n(3).unwrap(),
        Matroid::cycle_matroid(&Graph::complete(5).unwrap()).unwrap(),
        Matroid::cycle_matroid(&Graph::cycle(6).unwrap()).unwrap(),
    ] {
        let data = ehrhart_data(&sep_of(&m).unwrap(), DEFAULT_BOX_BUDGET).unwrap();
        assert_eq!(data.counts[1], BigInt::from(2 * m.len() + 1));
        assert_eq!(data.hstar.coeff(1), BigInt::from(2 * m.len() - m.rank()));
        assert_eq!(data.hstar.degree(), Some(m.rank()));
    }
}
