//! Canonical labeling and automorphism orbits.
//!
//! The labeling is the lexicographically smallest adjacency code over the
//! leaves of an individualization-refinement search tree. Partitions are
//! refined to the coarsest equitable refinement, branching happens on the
//! first non-singleton cell, and siblings equivalent under already discovered
//! automorphisms (fixing the current prefix) are skipped.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bits, Graph};

/// Largest vertex count supported by the canonical labeling routines.
pub const MAX_CANON_VERTICES: usize = 64;

/// Canonical form of an isomorphism class: the upper triangle of the
/// canonically relabeled adjacency matrix packed row-major, most significant
/// bit first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode {
    size: u16,
    bits: Vec<u64>,
}

impl CanonicalCode {
    fn from_order(rows: &[u64], order: &[usize]) -> Self {
        let n = order.len();
        let pairs = n * n.saturating_sub(1) / 2;
        let mut bits = vec![0u64; pairs.div_ceil(64)];
        let mut b = 0;
        for i in 0..n {
            let row = rows[order[i]];
            for &vj in &order[i + 1..] {
                if row >> vj & 1 == 1 {
                    bits[b / 64] |= 1 << (63 - b % 64);
                }
                b += 1;
            }
        }
        CanonicalCode { size: n as u16, bits }
    }

    pub fn size(&self) -> usize {
        self.size as usize
    }

    pub fn words(&self) -> &[u64] {
        &self.bits
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The canonically labeled representative of the class.
    pub fn to_graph(&self) -> Graph {
        let n = self.size();
        let mut g = Graph::new(n);
        let mut b = 0;
        for i in 0..n {
            for j in i + 1..n {
                if self.bits[b / 64] >> (63 - b % 64) & 1 == 1 {
                    g.add_edge(i, j);
                }
                b += 1;
            }
        }
        g
    }

    /// Hex string of the packed bit stream (`ceil(pairs / 8)` bytes).
    pub fn to_hex(&self) -> String {
        let n = self.size();
        let pairs = n * n.saturating_sub(1) / 2;
        let nbytes = pairs.div_ceil(8);
        (0..nbytes)
            .map(|k| {
                let word = self.bits[k / 8];
                format!("{:02x}", (word >> (56 - 8 * (k % 8))) & 0xff)
            })
            .collect()
    }

    pub fn from_hex(size: usize, hex: &str) -> Result<Self> {
        let pairs = size * size.saturating_sub(1) / 2;
        let nbytes = pairs.div_ceil(8);
        if hex.len() != 2 * nbytes {
            return Err(Error::InvalidInput(format!(
                "code for {size} vertices needs {} hex digits, got {}",
                2 * nbytes,
                hex.len()
            )));
        }
        let mut bits = vec![0u64; pairs.div_ceil(64)];
        for k in 0..nbytes {
            let byte = u8::from_str_radix(&hex[2 * k..2 * k + 2], 16)
                .map_err(|_| Error::InvalidInput(format!("bad hex digits in code {hex:?}")))?;
            bits[k / 8] |= (byte as u64) << (56 - 8 * (k % 8));
        }
        let tail = pairs % 64;
        if tail != 0 && bits.last().unwrap() & ((1u64 << (64 - tail)) - 1) != 0 {
            return Err(Error::InvalidInput(format!("padding bits set in code {hex:?}")));
        }
        Ok(CanonicalCode {
            size: size as u16,
            bits,
        })
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalCode({}:{})", self.size, self.to_hex())
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{}:{}", self.size, self.to_hex()))
    }
}

impl<'de> Deserialize<'de> for CanonicalCode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let (size, hex) = s
            .split_once(':')
            .ok_or_else(|| serde::de::Error::custom("expected <size>:<hex>"))?;
        let size = size.parse().map_err(serde::de::Error::custom)?;
        CanonicalCode::from_hex(size, hex).map_err(serde::de::Error::custom)
    }
}

/// Result of a canonical labeling search.
#[derive(Clone, Debug)]
pub struct Labeling {
    pub code: CanonicalCode,
    /// `order[i]` is the vertex receiving canonical label `i`.
    pub order: Vec<usize>,
    /// Automorphisms discovered during the search (as vertex maps).
    pub generators: Vec<Vec<usize>>,
}

impl Labeling {
    /// Canonical label of each vertex.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.order.len()];
        for (i, &v) in self.order.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }
}

fn refine(rows: &[u64], cells: &mut Vec<u64>, sig: &mut Vec<u8>) {
    let n = rows.len();
    loop {
        let k = cells.len();
        if k == n {
            return;
        }
        let mut next = Vec::with_capacity(n);
        for &cell in cells.iter() {
            if cell.count_ones() == 1 {
                next.push(cell);
                continue;
            }
            let members: Vec<usize> = bits(cell).collect();
            sig.clear();
            for &v in &members {
                sig.extend(cells.iter().map(|&c| (rows[v] & c).count_ones() as u8));
            }
            let mut idx: Vec<usize> = (0..members.len()).collect();
            idx.sort_by(|&a, &b| sig[a * k..(a + 1) * k].cmp(&sig[b * k..(b + 1) * k]));
            let mut current = 0u64;
            let mut prev: Option<usize> = None;
            for &i in &idx {
                if let Some(p) = prev {
                    if sig[p * k..(p + 1) * k] != sig[i * k..(i + 1) * k] {
                        next.push(current);
                        current = 0;
                    }
                }
                current |= 1 << members[i];
                prev = Some(i);
            }
            next.push(current);
        }
        if next.len() == k {
            return;
        }
        *cells = next;
    }
}

struct Search<'a> {
    rows: &'a [u64],
    first: Option<(CanonicalCode, Vec<usize>)>,
    best: Option<(CanonicalCode, Vec<usize>)>,
    generators: Vec<Vec<usize>>,
    sig: Vec<u8>,
}

impl Search<'_> {
    fn node(&mut self, mut cells: Vec<u64>, prefix: &mut Vec<usize>) {
        let mut sig = std::mem::take(&mut self.sig);
        refine(self.rows, &mut cells, &mut sig);
        self.sig = sig;
        if cells.len() == self.rows.len() {
            self.leaf(&cells);
            return;
        }
        let ti = cells.iter().position(|c| c.count_ones() > 1).unwrap();
        let target = cells[ti];
        let mut explored: Vec<usize> = Vec::new();
        for x in bits(target) {
            if !explored.is_empty() && self.equivalent_to_any(x, &explored, prefix) {
                continue;
            }
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..ti]);
            child.push(1 << x);
            child.push(target & !(1 << x));
            child.extend_from_slice(&cells[ti + 1..]);
            prefix.push(x);
            self.node(child, prefix);
            prefix.pop();
            explored.push(x);
        }
    }

    fn equivalent_to_any(&self, x: usize, explored: &[usize], prefix: &[usize]) -> bool {
        let n = self.rows.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut v: usize) -> usize {
            while p[v] != v {
                p[v] = p[p[v]];
                v = p[v];
            }
            v
        }
        let mut any = false;
        for g in &self.generators {
            if prefix.iter().all(|&p| g[p] == p) {
                any = true;
                for v in 0..n {
                    let (a, b) = (find(&mut parent, v), find(&mut parent, g[v]));
                    if a != b {
                        parent[a] = b;
                    }
                }
            }
        }
        if !any {
            return false;
        }
        let rx = find(&mut parent, x);
        explored.iter().any(|&y| find(&mut parent, y) == rx)
    }

    fn leaf(&mut self, cells: &[u64]) {
        let order: Vec<usize> = cells.iter().map(|c| c.trailing_zeros() as usize).collect();
        let code = CanonicalCode::from_order(self.rows, &order);
        let Some((first_code, first_order)) = &self.first else {
            self.first = Some((code.clone(), order.clone()));
            self.best = Some((code, order));
            return;
        };
        let (best_code, best_order) = self.best.as_ref().unwrap();
        let partner = if &code == first_code {
            Some(first_order)
        } else if &code == best_code {
            Some(best_order)
        } else {
            None
        };
        if let Some(other) = partner {
            let mut map = vec![0; order.len()];
            for (i, &v) in order.iter().enumerate() {
                map[v] = other[i];
            }
            if map.iter().enumerate().any(|(i, &m)| i != m) {
                self.generators.push(map);
            }
        } else if &code < best_code {
            self.best = Some((code, order));
        }
    }
}

fn label_with_cells(g: &Graph, cells: Vec<u64>) -> Labeling {
    let n = g.order();
    assert!(n <= MAX_CANON_VERTICES, "canonical labeling supports at most {MAX_CANON_VERTICES} vertices");
    let rows = g.rows();
    if n == 0 {
        return Labeling {
            code: CanonicalCode::from_order(&rows, &[]),
            order: vec![],
            generators: vec![],
        };
    }
    let mut search = Search {
        rows: &rows,
        first: None,
        best: None,
        generators: Vec::new(),
        sig: Vec::new(),
    };
    search.node(cells, &mut Vec::new());
    let (code, order) = search.best.unwrap();
    Labeling {
        code,
        order,
        generators: search.generators,
    }
}

fn all_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn canonical_labeling(g: &Graph) -> Labeling {
    let n = g.order();
    let cells = if n == 0 { vec![] } else { vec![all_mask(n)] };
    label_with_cells(g, cells)
}

/// Canonical labeling with vertices pre-partitioned into ordered colour classes.
/// Empty classes are ignored.
pub fn colored_labeling(g: &Graph, colors: &[u64]) -> Labeling {
    let cells: Vec<u64> = colors.iter().copied().filter(|&c| c != 0).collect();
    debug_assert_eq!(cells.iter().fold(0, |a, c| a | c), all_mask(g.order()));
    label_with_cells(g, cells)
}

/// Equal codes iff the graphs are isomorphic.
pub fn canonical_code(g: &Graph) -> CanonicalCode {
    canonical_labeling(g).code
}

/// Canonical code of the rooted graph `(g, root)`; the root always receives label 0,
/// so two rooted graphs share a code iff some isomorphism maps root to root.
pub fn rooted_code(g: &Graph, root: usize) -> CanonicalCode {
    rooted_labeling(g, root).code
}

fn rooted_labeling(g: &Graph, root: usize) -> Labeling {
    let n = g.order();
    let rest = all_mask(n) & !(1 << root);
    colored_labeling(g, &[1 << root, rest])
}

/// The graph relabeled into its canonical form.
pub fn canonical_form(g: &Graph) -> Graph {
    canonical_code(g).to_graph()
}

/// Partition of the vertices into automorphism orbits.
///
/// Orbit ids are dense and ordered by the smallest canonical label in each orbit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrbitPartition {
    orbit_id: Vec<usize>,
    count: usize,
}

impl OrbitPartition {
    pub fn orbit_of(&self, v: usize) -> usize {
        self.orbit_id[v]
    }

    pub fn ids(&self) -> &[usize] {
        &self.orbit_id
    }

    pub fn num_orbits(&self) -> usize {
        self.count
    }

    pub fn members(&self, orbit: usize) -> Vec<usize> {
        (0..self.orbit_id.len()).filter(|&v| self.orbit_id[v] == orbit).collect()
    }

    pub fn is_rigid(&self) -> bool {
        self.count == self.orbit_id.len()
    }
}

pub fn automorphism_orbits(g: &Graph) -> OrbitPartition {
    let n = g.order();
    let lab = canonical_labeling(g);
    let pos = lab.positions();

    // Orbits of the discovered automorphisms are sub-orbits of the true ones.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for gen in &lab.generators {
        for v in 0..n {
            let (a, b) = (find(&mut parent, v), find(&mut parent, gen[v]));
            if a != b {
                parent[a] = b;
            }
        }
    }
    // Merge sub-orbits whose representatives are equivalent as roots.
    let mut reps: Vec<(usize, CanonicalCode)> = Vec::new();
    let mut rep_of_root = vec![usize::MAX; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if rep_of_root[r] == usize::MAX {
            let code = rooted_code(g, v);
            let k = match reps.iter().position(|(_, c)| *c == code) {
                Some(k) => k,
                None => {
                    reps.push((v, code));
                    reps.len() - 1
                }
            };
            rep_of_root[r] = k;
        }
    }
    let raw: Vec<usize> = (0..n).map(|v| rep_of_root[find(&mut parent, v)]).collect();
    let mut min_pos = vec![usize::MAX; reps.len()];
    for v in 0..n {
        min_pos[raw[v]] = min_pos[raw[v]].min(pos[v]);
    }
    let mut by_pos: Vec<usize> = (0..reps.len()).collect();
    by_pos.sort_by_key(|&k| min_pos[k]);
    let mut rank = vec![0; reps.len()];
    for (r, &k) in by_pos.iter().enumerate() {
        rank[k] = r;
    }
    OrbitPartition {
        orbit_id: raw.iter().map(|&k| rank[k]).collect(),
        count: reps.len(),
    }
}

pub fn is_rigid(g: &Graph) -> bool {
    automorphism_orbits(g).is_rigid()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeled_paths_share_codes() {
        let a = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let b = Graph::from_edges(3, &[(1, 0), (0, 2)]).unwrap();
        assert_eq!(canonical_code(&a), canonical_code(&b));
        assert_ne!(canonical_code(&a), canonical_code(&Graph::complete(3)));
    }

    #[test]
    fn code_hex_round_trip() {
        let g = Graph::petersen();
        let code = canonical_code(&g);
        let back = CanonicalCode::from_hex(code.size(), &code.to_hex()).unwrap();
        assert_eq!(back, code);
        assert_eq!(canonical_code(&back.to_graph()), code);
        assert_eq!(code.edge_count(), 15);
    }

    #[test]
    fn orbits_of_small_graphs() {
        let c5 = automorphism_orbits(&Graph::cycle(5));
        assert_eq!(c5.num_orbits(), 1);
        let star = automorphism_orbits(&Graph::star(4));
        assert_eq!(star.num_orbits(), 2);
        assert_eq!(star.members(star.orbit_of(0)), vec![0]);
        assert_eq!(star.members(star.orbit_of(1)), vec![1, 2, 3]);
        // Leaves have smaller canonical labels, so their orbit comes first.
        assert_eq!(star.orbit_of(1), 0);
        assert!(!star.is_rigid());
    }

    #[test]
    fn symmetric_graphs_terminate() {
        for n in [16, 24, 32] {
            assert_eq!(automorphism_orbits(&Graph::complete(n)).num_orbits(), 1);
            assert_eq!(automorphism_orbits(&Graph::new(n)).num_orbits(), 1);
            assert_eq!(canonical_code(&Graph::cycle(n)).edge_count(), n);
        }
        assert_eq!(automorphism_orbits(&Graph::petersen()).num_orbits(), 1);
    }

    #[test]
    fn rooted_codes_distinguish_orbits() {
        let p3 = Graph::path(3);
        assert_eq!(rooted_code(&p3, 0), rooted_code(&p3, 2));
        assert_ne!(rooted_code(&p3, 0), rooted_code(&p3, 1));
    }
}
