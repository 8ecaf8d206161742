//! Brute-force oracles shared by the integration tests. They deliberately
//! avoid the library's refinement, enumeration and connectivity code.
#![allow(dead_code)]

use std::collections::HashMap;

use graphlet_core::{Catalog, Graph};
use petgraph::graph::UnGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn to_petgraph(g: &Graph) -> UnGraph<(), ()> {
    let mut p = UnGraph::new_undirected();
    let nodes: Vec<_> = (0..g.order()).map(|_| p.add_node(())).collect();
    for (u, v) in g.edges() {
        p.add_edge(nodes[u], nodes[v], ());
    }
    p
}

pub fn connected(g: &Graph) -> bool {
    g.order() <= 1 || petgraph::algo::connected_components(&to_petgraph(g)) == 1
}

/// Every labeled graph on `n` vertices.
pub fn all_labeled_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|j| (0..j).map(move |i| (i, j))).collect();
    (0u64..1 << pairs.len())
        .map(|mask| {
            let mut g = Graph::new(n);
            for (b, &(i, j)) in pairs.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    g.add_edge(i, j);
                }
            }
            g
        })
        .collect()
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Adjacency bits of `g` relabeled by `perm` (new vertex `k` is old `perm[k]`).
fn relabeled_bits(g: &Graph, perm: &[usize]) -> Vec<bool> {
    let n = perm.len();
    let mut bits = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in i + 1..n {
            bits.push(g.has_edge(perm[i], perm[j]));
        }
    }
    bits
}

/// Lexicographically largest relabeled adjacency: a slow canonical form.
pub fn brute_form(g: &Graph) -> Vec<bool> {
    permutations(g.order()).iter().map(|p| relabeled_bits(g, p)).max().unwrap()
}

/// Canonical form of `(g, root)` with the root pinned to position 0.
pub fn brute_rooted_form(g: &Graph, root: usize) -> Vec<bool> {
    let others: Vec<usize> = (0..g.order()).filter(|&v| v != root).collect();
    permutations(others.len())
        .iter()
        .map(|p| {
            let perm: Vec<usize> = std::iter::once(root).chain(p.iter().map(|&k| others[k])).collect();
            relabeled_bits(g, &perm)
        })
        .max()
        .unwrap()
}

pub fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.order();
    permutations(n)
        .into_iter()
        .filter(|p| (0..n).all(|i| (i + 1..n).all(|j| g.has_edge(i, j) == g.has_edge(p[i], p[j]))))
        .collect()
}

/// Orbit representative (smallest member) of each vertex.
pub fn brute_orbits(g: &Graph) -> Vec<usize> {
    let auts = automorphisms(g);
    (0..g.order()).map(|v| auts.iter().map(|p| p[v]).min().unwrap()).collect()
}

pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    (0u32..1 << n)
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).filter(|&b| m >> b & 1 == 1).collect())
        .collect()
}

pub fn remove_vertices(g: &Graph, removed: &[usize]) -> Graph {
    let keep: Vec<usize> = (0..g.order()).filter(|v| !removed.contains(v)).collect();
    g.induced(&keep)
}

/// Largest `k <= n-1` such that deleting any `k-1` vertices leaves the graph connected.
pub fn brute_connectivity(g: &Graph) -> usize {
    let n = g.order();
    if !connected(g) {
        return 0;
    }
    let mut k = 1;
    while k < n - 1 && subsets(n, k).iter().all(|s| connected(&remove_vertices(g, s))) {
        k += 1;
    }
    k
}

pub fn brute_articulations(g: &Graph) -> Vec<usize> {
    (0..g.order()).filter(|&v| !connected(&g.delete_vertex(v))).collect()
}

/// Induced connected subgraph counts keyed by slow canonical form.
pub fn induced_census(g: &Graph, max_size: usize) -> HashMap<Vec<bool>, u64> {
    let mut out = HashMap::new();
    for k in 2..=max_size.min(g.order()) {
        for s in subsets(g.order(), k) {
            let h = g.induced(&s);
            if connected(&h) {
                *out.entry(brute_form(&h)).or_insert(0) += 1;
            }
        }
    }
    out
}

/// Slow form of every catalog class, by class index.
pub fn class_forms(c: &Catalog) -> Vec<Vec<bool>> {
    c.classes().iter().map(|k| brute_form(&k.graph)).collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(r: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for j in 0..n {
        for i in 0..j {
            if r.gen_bool(p) {
                g.add_edge(i, j);
            }
        }
    }
    g
}

pub fn random_connected(r: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    loop {
        let g = random_graph(r, n, p);
        if connected(&g) {
            return g;
        }
    }
}

/// Random relabeling of `g`.
pub fn shuffled(r: &mut ChaCha8Rng, g: &Graph) -> Graph {
    let mut order: Vec<usize> = (0..g.order()).collect();
    for i in (1..order.len()).rev() {
        order.swap(i, r.gen_range(0..=i));
    }
    g.permuted(&order)
}
