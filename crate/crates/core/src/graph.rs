//! Labeled simple undirected graphs with word-packed adjacency rows.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Largest vertex count accepted by the subset-enumeration paths.
pub const MAX_ENUM_VERTICES: usize = 32;

/// A simple undirected graph on vertices `0..n`.
///
/// Each vertex owns a row of `words` 64-bit words holding its neighbourhood.
/// The adjacency is kept symmetric with an empty diagonal by every mutator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            adj: vec![0; n * words],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Builds a graph from per-vertex neighbourhood masks (`n <= 64`).
    pub fn from_rows(rows: &[u64]) -> Self {
        let n = rows.len();
        assert!(n <= 64, "from_rows supports at most 64 vertices");
        let mut g = Graph::new(n);
        for (u, &row) in rows.iter().enumerate() {
            let mut bits = row & !(1u64 << u);
            while bits != 0 {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                if v < n {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 1..n {
            g.add_edge(u - 1, u);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    /// Star with centre `0` and `n - 1` leaves.
    pub fn star(n: usize) -> Self {
        let mut g = Graph::new(n);
        for v in 1..n {
            g.add_edge(0, v);
        }
        g
    }

    pub fn petersen() -> Self {
        let mut g = Graph::new(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5);
            g.add_edge(i, i + 5);
            g.add_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    /// Adds `uv`; panics on self-loops or out-of-range ids.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        self.try_add_edge(u, v).expect("invalid edge");
    }

    pub fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidInput(format!(
                "edge {u}-{v} out of range for {} vertices",
                self.n
            )));
        }
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
        }
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u * self.words + v / 64] &= !(1 << (v % 64));
        self.adj[v * self.words + u / 64] &= !(1 << (u % 64));
    }

    /// Neighbourhood of `v` as a bitmask. Only valid for graphs with at most 64 vertices.
    #[inline]
    pub fn row(&self, v: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.adj[v * self.words]
    }

    pub fn rows(&self) -> Vec<u64> {
        (0..self.n).map(|v| self.row(v)).collect()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v * self.words..(v + 1) * self.words]
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adj[v * self.words..(v + 1) * self.words];
        row.iter().enumerate().flat_map(|(wi, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    None
                } else {
                    let b = bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    Some(wi * 64 + b)
                }
            })
        })
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// Subgraph induced by `vertices`; new vertex `i` is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::new(vertices.len());
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// The graph with `x` removed; vertices above `x` shift down by one.
    pub fn delete_vertex(&self, x: usize) -> Graph {
        let keep: Vec<usize> = (0..self.n).filter(|&v| v != x).collect();
        self.induced(&keep)
    }

    /// Relabels so that new vertex `i` is old vertex `order[i]`.
    pub fn permuted(&self, order: &[usize]) -> Graph {
        assert_eq!(order.len(), self.n);
        self.induced(order)
    }

    /// Copy with one new vertex, numbered `n`, adjacent to `neighbours`.
    pub fn with_vertex(&self, neighbours: &[usize]) -> Graph {
        let mut g = Graph::new(self.n + 1);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for &u in neighbours {
            g.add_edge(u, self.n);
        }
        g
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::new(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Breadth-first distances from `source`; unreachable vertices get `None`.
    pub fn distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[source] = Some(0);
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let d = dist[u].unwrap();
            for w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn distance(&self, u: usize, v: usize) -> Option<usize> {
        self.distances(u)[v]
    }

    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.distances(0).iter().all(Option::is_some)
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen[s] {
                continue;
            }
            let mut comp: Vec<usize> = self
                .distances(s)
                .iter()
                .enumerate()
                .filter_map(|(v, d)| d.map(|_| v))
                .collect();
            comp.sort_unstable();
            for &v in &comp {
                seen[v] = true;
            }
            out.push(comp);
        }
        out
    }

    /// Maximum distance from `v` to any vertex.
    pub fn eccentricity(&self, v: usize) -> Result<usize> {
        if v >= self.n {
            return Err(Error::InvalidInput(format!("vertex {v} out of range")));
        }
        self.distances(v)
            .into_iter()
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
            .ok_or_else(|| Error::Disconnected("eccentricity is undefined".into()))
    }

    /// Vertices whose removal increases the number of components.
    pub fn articulation_points(&self) -> Vec<usize> {
        let base = self.components().len();
        (0..self.n)
            .filter(|&x| self.n > 1 && self.delete_vertex(x).components().len() > base)
            .collect()
    }

    /// Maximum number of internally vertex-disjoint `s`-`t` paths for non-adjacent `s != t`,
    /// which equals the size of a minimum `s`-`t` vertex separator.
    pub fn local_vertex_connectivity(&self, s: usize, t: usize) -> usize {
        assert!(s != t && !self.has_edge(s, t));
        // Split every vertex x into x_in = 2x and x_out = 2x + 1 joined by a unit arc.
        let nodes = 2 * self.n;
        let mut cap = vec![0u8; nodes * nodes];
        for x in 0..self.n {
            cap[(2 * x) * nodes + 2 * x + 1] = 1;
            for y in self.neighbors(x) {
                cap[(2 * x + 1) * nodes + 2 * y] = 1;
            }
        }
        let source = 2 * s + 1;
        let sink = 2 * t;
        let mut flow = 0;
        loop {
            let mut parent = vec![usize::MAX; nodes];
            parent[source] = source;
            let mut queue = VecDeque::from([source]);
            while let Some(u) = queue.pop_front() {
                if u == sink {
                    break;
                }
                for w in 0..nodes {
                    if parent[w] == usize::MAX && cap[u * nodes + w] > 0 {
                        parent[w] = u;
                        queue.push_back(w);
                    }
                }
            }
            if parent[sink] == usize::MAX {
                return flow;
            }
            let mut w = sink;
            while w != source {
                let u = parent[w];
                cap[u * nodes + w] -= 1;
                cap[w * nodes + u] += 1;
                w = u;
            }
            flow += 1;
        }
    }

    /// Largest `k` such that the graph is `k`-vertex-connected; `K_n` has connectivity `n - 1`.
    pub fn vertex_connectivity(&self) -> usize {
        if self.n <= 1 {
            return 0;
        }
        if !self.is_connected() {
            return 0;
        }
        let mut best = self.n - 1;
        for s in 0..self.n {
            for t in s + 1..self.n {
                if !self.has_edge(s, t) {
                    best = best.min(self.local_vertex_connectivity(s, t));
                }
            }
        }
        best
    }

    /// Parses the `n m` / `u v` edge-list format with 0-based ids.
    pub fn parse_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .enumerate()
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::InvalidInput("empty edge list".into()))?;
        let nums = parse_pair(header, 0)?;
        let (n, m) = nums;
        let mut g = Graph::new(n);
        let mut count = 0;
        for (lineno, line) in lines {
            let (u, v) = parse_pair(line, lineno)?;
            if g.has_edge_checked(u, v) {
                return Err(Error::InvalidInput(format!("duplicate edge {u}-{v} on line {}", lineno + 1)));
            }
            g.try_add_edge(u, v)?;
            count += 1;
        }
        if count != m {
            return Err(Error::InvalidInput(format!("header declares {m} edges, found {count}")));
        }
        Ok(g)
    }

    fn has_edge_checked(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.has_edge(u, v)
    }

    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edge_count());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace().map(|t| {
        t.parse::<usize>()
            .map_err(|_| Error::InvalidInput(format!("bad integer {t:?} on line {}", lineno + 1)))
    });
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a?, b?)),
        _ => Err(Error::InvalidInput(format!("expected two integers on line {}", lineno + 1))),
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges().collect::<Vec<_>>())
    }
}

/// Iterates the set bits of a mask, lowest first.
#[inline]
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

pub(crate) fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}
