//! Isomorph-free exhaustive generation by canonical augmentation.
//!
//! A child `P + w` of a parent class `P` is kept iff `w` lies in the
//! automorphism orbit of the child's canonical deletion vertex: the admissible
//! vertex with the largest canonical label (any vertex for `All`, a non-cut
//! vertex for `Connected`, a leaf for `Trees`). Every class is then produced
//! by exactly one parent class; siblings are deduplicated per parent.

use std::collections::HashSet;

use rayon::prelude::*;

use crate::canon::{canonical_labeling, rooted_code, CanonicalCode};
use crate::graph::{bits, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    All,
    Connected,
    Trees,
}

/// Known class counts, used to refuse runs that are out of desk scale.
pub fn known_class_count(n: usize, family: Family) -> Option<u64> {
    const ALL: [u64; 11] = [1, 1, 2, 4, 11, 34, 156, 1044, 12346, 274_668, 12_005_168];
    const CONNECTED: [u64; 11] = [1, 1, 1, 2, 6, 21, 112, 853, 11117, 261_080, 11_716_571];
    const TREES: [u64; 11] = [1, 1, 1, 1, 2, 3, 6, 11, 23, 47, 106];
    let table = match family {
        Family::All => &ALL,
        Family::Connected => &CONNECTED,
        Family::Trees => &TREES,
    };
    table.get(n).copied()
}

pub(crate) fn mask_connected(rows: &[u64], mask: u64) -> bool {
    if mask == 0 {
        return true;
    }
    let mut seen = mask & mask.wrapping_neg();
    let mut frontier = seen;
    while frontier != 0 {
        let mut next = 0;
        for v in bits(frontier) {
            next |= rows[v];
        }
        next &= mask & !seen;
        seen |= next;
        frontier = next;
    }
    seen == mask
}

fn admissible(rows: &[u64], v: usize, family: Family) -> bool {
    let n = rows.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    match family {
        Family::All => true,
        Family::Connected => mask_connected(rows, all & !(1 << v)),
        Family::Trees => rows[v].count_ones() <= 1,
    }
}

fn children(parent: &CanonicalCode, family: Family) -> Vec<CanonicalCode> {
    let pg = parent.to_graph();
    let m = pg.order();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for s in 0u64..(1u64 << m) {
        let ok = match family {
            Family::All => true,
            Family::Connected => s != 0 || m == 0,
            Family::Trees => s.count_ones() == 1 || m == 0,
        };
        if !ok {
            continue;
        }
        let nbrs: Vec<usize> = bits(s).collect();
        let child = pg.with_vertex(&nbrs);
        let rows = child.rows();
        let w = m;
        let lab = canonical_labeling(&child);
        let x = *lab
            .order
            .iter()
            .rev()
            .find(|&&v| admissible(&rows, v, family))
            .expect("every graph has an admissible deletion vertex");
        let accept = x == w
            || (rows[x].count_ones() == rows[w].count_ones() && rooted_code(&child, x) == rooted_code(&child, w));
        if accept && seen.insert(lab.code.clone()) {
            out.push(lab.code);
        }
    }
    out
}

/// Canonical codes of all classes on `n` vertices in `family`, sorted ascending.
pub fn generate_codes(n: usize, family: Family) -> Vec<CanonicalCode> {
    if n == 0 {
        return vec![canonical_labeling(&Graph::new(0)).code];
    }
    generate_levels(n, family).pop().unwrap()
}

/// Classes on `1..=max_n` vertices; entry `k` holds the classes on `k + 1` vertices.
pub fn generate_levels(max_n: usize, family: Family) -> Vec<Vec<CanonicalCode>> {
    let mut levels = vec![vec![canonical_labeling(&Graph::new(1)).code]];
    for _ in 1..max_n {
        let mut next: Vec<CanonicalCode> = levels
            .last()
            .unwrap()
            .par_iter()
            .flat_map_iter(|p| children(p, family))
            .collect();
        next.sort_unstable();
        debug_assert!(next.windows(2).all(|w| w[0] != w[1]));
        levels.push(next);
    }
    levels
}

/// One canonically labeled representative per class on `n` vertices.
pub fn generate(n: usize, family: Family) -> Vec<Graph> {
    generate_codes(n, family).iter().map(CanonicalCode::to_graph).collect()
}
