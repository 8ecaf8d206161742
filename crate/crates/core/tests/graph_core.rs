mod common;

use std::collections::HashSet;

use graphlet_core::canon::canonical_labeling;
use graphlet_core::{automorphism_orbits, canonical_code, parse_graph6, write_graph6, Error, Graph};
use petgraph::graph6::{FromGraph6, ToGraph6};
use petgraph::graph::UnGraph;
use proptest::prelude::*;

use common::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for j in 1..n {
                for i in 0..j {
                    if bits[k] {
                        g.add_edge(i, j);
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn graph6_agrees_with_petgraph(g in graph_strategy(8)) {
        let ours = write_graph6(&g);
        let theirs: UnGraph<(), ()> = UnGraph::from_graph6_string(ours.clone());
        prop_assert_eq!(theirs.node_count(), g.order());
        prop_assert_eq!(theirs.edge_count(), g.edge_count());
        for e in theirs.edge_indices() {
            let (a, b) = theirs.edge_endpoints(e).unwrap();
            prop_assert!(g.has_edge(a.index(), b.index()));
        }
        prop_assert_eq!(to_petgraph(&g).graph6_string(), ours.clone());
        prop_assert_eq!(parse_graph6(&ours).unwrap(), g);
    }

    #[test]
    fn canonical_code_survives_relabeling(g in graph_strategy(10), seed in any::<u64>()) {
        let mut r = rng(seed);
        prop_assert_eq!(canonical_code(&shuffled(&mut r, &g)), canonical_code(&g));
    }

    #[test]
    fn canonical_order_is_an_isomorphism(g in graph_strategy(12)) {
        let lab = canonical_labeling(&g);
        prop_assert_eq!(canonical_code(&g).to_graph(), g.permuted(&lab.order));
    }
}

#[test]
fn graph6_examples() {
    let g = parse_graph6("D?{").unwrap();
    let theirs: UnGraph<(), ()> = UnGraph::from_graph6_string("D?{".to_string());
    assert_eq!(g.edge_count(), theirs.edge_count());
    assert_eq!(g.order(), 5);
    assert_eq!(parse_graph6("A_").unwrap(), Graph::complete(2));
    assert_eq!(parse_graph6("A?").unwrap().edge_count(), 0);
    assert!(matches!(parse_graph6("A_x"), Err(Error::Parse { offset: 2, .. })));
}

#[test]
fn relabeling_invariance_is_exhaustive_up_to_six() {
    for n in 1..=6 {
        let mut seen = HashSet::new();
        for g in all_labeled_graphs(n) {
            let code = canonical_code(&g);
            if !seen.insert(code.clone()) {
                continue;
            }
            for p in permutations(n) {
                assert_eq!(canonical_code(&g.permuted(&p)), code);
            }
        }
    }
}

#[test]
fn four_vertex_graphs_give_eleven_codes() {
    let graphs = all_labeled_graphs(4);
    let codes: HashSet<_> = graphs.iter().map(canonical_code).collect();
    let forms: HashSet<_> = graphs.iter().map(brute_form).collect();
    assert_eq!(codes.len(), 11);
    assert_eq!(forms.len(), 11);
    assert_ne!(canonical_code(&Graph::complete(3)), canonical_code(&Graph::path(3)));
    let relabeled = Graph::from_edges(3, &[(1, 0), (0, 2)]).unwrap();
    assert_eq!(canonical_code(&relabeled), canonical_code(&Graph::path(3)));
}

#[test]
fn orbits_match_permutation_search_up_to_six() {
    let mut rigid_six = 0;
    for n in 1..=6 {
        let mut seen = HashSet::new();
        for g in all_labeled_graphs(n) {
            if !seen.insert(canonical_code(&g)) {
                continue;
            }
            let brute = brute_orbits(&g);
            let orbits = automorphism_orbits(&g);
            for u in 0..n {
                for v in 0..n {
                    assert_eq!(brute[u] == brute[v], orbits.orbit_of(u) == orbits.orbit_of(v));
                }
            }
            assert_eq!(orbits.is_rigid(), automorphisms(&g).len() == 1);
            if n == 6 && orbits.num_orbits() == 6 {
                rigid_six += 1;
            }
            if n < 6 && n > 1 {
                assert!(!orbits.is_rigid(), "no rigid graph below six vertices");
            }
        }
    }
    assert!(rigid_six > 0);
}

#[test]
fn orbit_indices_follow_canonical_positions() {
    for g in [Graph::star(4), Graph::path(5), Graph::petersen(), Graph::cycle(5)] {
        let lab = canonical_labeling(&g);
        let orbits = automorphism_orbits(&g);
        let firsts: Vec<usize> = lab.order.iter().map(|&v| orbits.orbit_of(v)).collect();
        let mut expected = 0;
        for o in firsts {
            assert!(o <= expected);
            if o == expected {
                expected += 1;
            }
        }
        assert_eq!(expected, orbits.num_orbits());
    }
    assert_eq!(automorphism_orbits(&Graph::cycle(5)).num_orbits(), 1);
    assert_eq!(automorphism_orbits(&Graph::star(4)).num_orbits(), 2);
}

#[test]
fn connectivity_matches_subset_deletion_up_to_seven() {
    for n in 2..=7 {
        for g in graphlet_core::generate(n, graphlet_core::Family::All) {
            assert_eq!(g.vertex_connectivity(), brute_connectivity(&g), "{}", write_graph6(&g));
            assert_eq!(g.is_connected(), connected(&g));
        }
    }
    assert_eq!(Graph::cycle(4).vertex_connectivity(), 2);
    assert_eq!(Graph::path(3).vertex_connectivity(), 1);
    assert_eq!(Graph::complete(5).vertex_connectivity(), 4);
}

#[test]
fn eccentricities() {
    let p5 = Graph::path(5);
    assert_eq!(p5.eccentricity(0).unwrap(), 4);
    assert_eq!(p5.eccentricity(2).unwrap(), 2);
    let pet = Graph::petersen();
    for v in 0..10 {
        assert_eq!(pet.eccentricity(v).unwrap(), 2);
    }
    assert!(matches!(Graph::new(2).eccentricity(0), Err(Error::Disconnected(_))));
}

#[test]
fn symmetric_graphs_label_quickly() {
    for n in [16, 24, 32] {
        for g in [Graph::cycle(n), Graph::complete(n), Graph::new(n)] {
            let code = canonical_code(&g);
            assert_eq!(code.size(), n);
        }
    }
}

#[test]
fn thousand_random_relabelings() {
    let mut r = rng(7);
    for i in 0..1000 {
        let n = 2 + i % 9;
        let g = random_graph(&mut r, n, 0.45);
        assert_eq!(canonical_code(&shuffled(&mut r, &g)), canonical_code(&g));
    }
}
