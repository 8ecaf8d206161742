//! Deterministic orderings of connected graph classes and rooted graphlet classes.
//!
//! Graph classes are ordered by size, then edge count ascending, then canonical
//! code descending. Each class contributes one graphlet per automorphism orbit,
//! in orbit order, so graphlet indices respect the class order. For catalogs
//! reaching size 5 the standard orbit numbering 0-72 is attached after a
//! structural validation against the shipped table.

use std::collections::HashMap;
use std::ops::Range;
use std::sync::{OnceLock, RwLock};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{automorphism_orbits, canonical_code, rooted_code, CanonicalCode, OrbitPartition};
use crate::error::{Error, Result};
use crate::gdd;
use crate::generate::{generate_levels, known_class_count, Family};
use crate::graph::{bits, Graph};

/// Largest graphlet size a catalog may cover.
pub const MAX_CATALOG_SIZE: usize = 9;

const STANDARD_ORBITS: &str = include_str!("../data/standard_orbits.txt");
const MEMO_SHARDS: usize = 64;

/// Index of a rooted graphlet class in the catalog order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GraphletId(pub usize);

impl GraphletId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug)]
pub struct GraphClass {
    pub gamma: usize,
    pub code: CanonicalCode,
    /// Canonically labeled representative.
    pub graph: Graph,
    pub size: usize,
    pub edges: usize,
    pub orbits: OrbitPartition,
    /// Graphlet ids of this class, one per orbit.
    pub graphlets: Range<usize>,
}

impl GraphClass {
    pub fn is_rigid(&self) -> bool {
        self.orbits.is_rigid()
    }

    pub fn is_tree(&self) -> bool {
        self.edges + 1 == self.size
    }

    pub fn is_path(&self) -> bool {
        self.is_tree() && (0..self.size).all(|v| self.graph.degree(v) <= 2)
    }
}

#[derive(Clone, Debug)]
pub struct Graphlet {
    pub id: GraphletId,
    /// Index of the underlying graph class.
    pub gamma: usize,
    /// Representative root: the smallest canonical label in the orbit.
    pub root: usize,
    pub orbit_size: usize,
    pub root_degree: usize,
    pub root_eccentricity: usize,
    pub rooted: CanonicalCode,
}

pub struct Catalog {
    max_size: usize,
    classes: Vec<GraphClass>,
    graphlets: Vec<Graphlet>,
    class_lookup: HashMap<CanonicalCode, usize>,
    rooted_lookup: HashMap<CanonicalCode, GraphletId>,
    /// Graphlet id ranges by size (index = size).
    size_graphlets: Vec<Range<usize>>,
    size_classes: Vec<Range<usize>>,
    root_counts: Vec<OnceLock<Vec<(GraphletId, u64)>>>,
    memo: Vec<RwLock<HashMap<(u8, u64), u32>>>,
    przulj: Option<Vec<usize>>,
}

impl std::fmt::Debug for Catalog {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Catalog")
            .field("max_size", &self.max_size)
            .field("classes", &self.classes.len())
            .field("graphlets", &self.graphlets.len())
            .finish()
    }
}

fn in_size_order(a: &CanonicalCode, b: &CanonicalCode) -> std::cmp::Ordering {
    a.edge_count().cmp(&b.edge_count()).then_with(|| b.cmp(a))
}

impl Catalog {
    /// Builds the catalog of all connected classes on `2..=max_size` vertices.
    pub fn build(max_size: usize) -> Result<Catalog> {
        check_size(max_size)?;
        let levels = generate_levels(max_size, Family::Connected);
        let codes: Vec<Vec<CanonicalCode>> = levels.into_iter().skip(1).collect();
        Catalog::from_codes(max_size, codes)
    }

    fn from_codes(max_size: usize, mut by_size: Vec<Vec<CanonicalCode>>) -> Result<Catalog> {
        for codes in &mut by_size {
            codes.sort_by(in_size_order);
        }
        let flat: Vec<CanonicalCode> = by_size.into_iter().flatten().collect();
        let prepared: Vec<(Graph, OrbitPartition, Vec<(usize, usize, usize, CanonicalCode)>)> = flat
            .par_iter()
            .map(|code| {
                let graph = code.to_graph();
                let orbits = automorphism_orbits(&graph);
                let roots = (0..orbits.num_orbits())
                    .map(|o| {
                        let members = orbits.members(o);
                        let root = members[0];
                        let ecc = graph.eccentricity(root).expect("catalog classes are connected");
                        (root, members.len(), ecc, rooted_code(&graph, root))
                    })
                    .collect();
                (graph, orbits, roots)
            })
            .collect();

        let mut classes = Vec::with_capacity(flat.len());
        let mut graphlets = Vec::new();
        let mut size_graphlets = vec![0..0; max_size + 1];
        let mut size_classes = vec![0..0; max_size + 1];
        for (gamma, (code, (graph, orbits, roots))) in flat.into_iter().zip(prepared).enumerate() {
            let size = code.size();
            let start = graphlets.len();
            for (root, orbit_size, ecc, rooted) in roots {
                graphlets.push(Graphlet {
                    id: GraphletId(graphlets.len()),
                    gamma,
                    root,
                    orbit_size,
                    root_degree: graph.degree(root),
                    root_eccentricity: ecc,
                    rooted,
                });
            }
            if size_classes[size].is_empty() {
                size_classes[size] = gamma..gamma;
                size_graphlets[size] = start..start;
            }
            size_classes[size].end = gamma + 1;
            size_graphlets[size].end = graphlets.len();
            classes.push(GraphClass {
                gamma,
                edges: code.edge_count(),
                size,
                code,
                graph,
                orbits,
                graphlets: start..graphlets.len(),
            });
        }

        let class_lookup = classes.iter().map(|c| (c.code.clone(), c.gamma)).collect();
        let rooted_lookup = graphlets.iter().map(|g| (g.rooted.clone(), g.id)).collect();
        let mut catalog = Catalog {
            max_size,
            root_counts: (0..graphlets.len()).map(|_| OnceLock::new()).collect(),
            memo: (0..MEMO_SHARDS).map(|_| RwLock::new(HashMap::new())).collect(),
            classes,
            graphlets,
            class_lookup,
            rooted_lookup,
            size_graphlets,
            size_classes,
            przulj: None,
        };
        for s in 2..=max_size {
            let expected = known_class_count(s, Family::Connected).unwrap();
            if catalog.size_classes[s].len() as u64 != expected {
                return Err(Error::Integrity(format!(
                    "catalog has {} classes of size {s}, expected {expected}",
                    catalog.size_classes[s].len()
                )));
            }
        }
        if max_size >= 5 {
            catalog.przulj = Some(catalog.load_przulj()?);
        }
        Ok(catalog)
    }

    /// Process-wide catalog for `max_size`, built on first use.
    pub fn shared(max_size: usize) -> Result<&'static Catalog> {
        static SHARED: [OnceLock<Catalog>; MAX_CATALOG_SIZE + 1] = [const { OnceLock::new() }; MAX_CATALOG_SIZE + 1];
        check_size(max_size)?;
        if let Some(c) = SHARED[max_size].get() {
            return Ok(c);
        }
        let built = Catalog::build(max_size)?;
        Ok(SHARED[max_size].get_or_init(|| built))
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    pub fn classes(&self) -> &[GraphClass] {
        &self.classes
    }

    pub fn class(&self, gamma: usize) -> &GraphClass {
        &self.classes[gamma]
    }

    pub fn graphlets(&self) -> &[Graphlet] {
        &self.graphlets
    }

    pub fn graphlet(&self, id: GraphletId) -> &Graphlet {
        &self.graphlets[id.0]
    }

    pub fn num_graphlets(&self) -> usize {
        self.graphlets.len()
    }

    /// The underlying-graph map: graphlet index to class index.
    pub fn underlying(&self, id: GraphletId) -> usize {
        self.graphlets[id.0].gamma
    }

    pub fn underlying_class(&self, id: GraphletId) -> &GraphClass {
        &self.classes[self.graphlets[id.0].gamma]
    }

    /// Underlying graph is a path and the root is one of its ends.
    pub fn is_path_end(&self, id: GraphletId) -> bool {
        self.underlying_class(id).is_path() && self.graphlets[id.0].root_degree == 1
    }

    /// Underlying graph is a tree and the root is one of its leaves.
    pub fn is_trunked_tree(&self, id: GraphletId) -> bool {
        self.underlying_class(id).is_tree() && self.graphlets[id.0].root_degree == 1
    }

    pub fn graphlet_size(&self, id: GraphletId) -> usize {
        self.underlying_class(id).size
    }

    /// Graphlet ids of a given size (empty outside `2..=max_size`).
    pub fn graphlets_of_size(&self, size: usize) -> Range<usize> {
        self.size_graphlets.get(size).cloned().unwrap_or(0..0)
    }

    pub fn classes_of_size(&self, size: usize) -> Range<usize> {
        self.size_classes.get(size).cloned().unwrap_or(0..0)
    }

    /// Graphlet ids covering sizes `min..=max`.
    pub fn graphlet_range(&self, min: usize, max: usize) -> Range<usize> {
        if min > max {
            return 0..0;
        }
        self.graphlets_of_size(min).start..self.graphlets_of_size(max).end
    }

    pub fn class_of_code(&self, code: &CanonicalCode) -> Option<usize> {
        self.class_lookup.get(code).copied()
    }

    pub fn graphlet_of_rooted(&self, code: &CanonicalCode) -> Option<GraphletId> {
        self.rooted_lookup.get(code).copied()
    }

    /// Class index of a connected graph.
    pub fn classify(&self, g: &Graph) -> Result<usize> {
        self.check_classifiable(g)?;
        Ok(self.class_of_code(&canonical_code(g)).expect("catalog is complete"))
    }

    /// Graphlet index of the rooted graph `(g, root)`.
    pub fn classify_rooted(&self, g: &Graph, root: usize) -> Result<GraphletId> {
        self.check_classifiable(g)?;
        if root >= g.order() {
            return Err(Error::InvalidInput(format!("root {root} out of range")));
        }
        Ok(self
            .graphlet_of_rooted(&rooted_code(g, root))
            .expect("catalog is complete"))
    }

    fn check_classifiable(&self, g: &Graph) -> Result<()> {
        let n = g.order();
        if n < 2 || n > self.max_size {
            return Err(Error::SizeBound(format!(
                "graph on {n} vertices outside catalog range 2..={}",
                self.max_size
            )));
        }
        if !g.is_connected() {
            return Err(Error::Disconnected("graphlets are connected".into()));
        }
        Ok(())
    }

    /// Classifies the subgraph induced by `mask` rooted at `root`, memoized on the
    /// labeled adjacency of the subset.
    pub(crate) fn classify_subset(&self, rows: &[u64], root: usize, mask: u64) -> GraphletId {
        let mut members = [0usize; MAX_CATALOG_SIZE];
        members[0] = root;
        let mut k = 1;
        for v in bits(mask & !(1 << root)) {
            members[k] = v;
            k += 1;
        }
        let mut key = 0u64;
        for i in 0..k {
            let row = rows[members[i]];
            for &vj in &members[i + 1..k] {
                key = (key << 1) | (row >> vj & 1);
            }
        }
        let shard = ((key ^ (key >> 23) ^ (key >> 41)).wrapping_mul(0x9e37_79b9_7f4a_7c15) >> 58) as usize % MEMO_SHARDS;
        let memo_key = (k as u8, key);
        if let Some(&id) = self.memo[shard].read().unwrap().get(&memo_key) {
            return GraphletId(id as usize);
        }
        let mut sub = Graph::new(k);
        for i in 0..k {
            for j in i + 1..k {
                if rows[members[i]] >> members[j] & 1 == 1 {
                    sub.add_edge(i, j);
                }
            }
        }
        let id = self
            .graphlet_of_rooted(&rooted_code(&sub, 0))
            .expect("connected subsets within the size bound are catalogued");
        self.memo[shard].write().unwrap().insert(memo_key, id.0 as u32);
        id
    }

    /// Sparse row of root-level containment counts for graphlet `j`: for every
    /// graphlet `i` with `|g_i| <= |g_j|`, the number of vertex subsets of `U(g_j)`
    /// containing the root that induce `U(g_i)` with the root in the orbit of `g_i`.
    pub fn root_count_row(&self, j: GraphletId) -> &[(GraphletId, u64)] {
        self.root_counts[j.0].get_or_init(|| {
            let gl = &self.graphlets[j.0];
            let class = &self.classes[gl.gamma];
            let row = gdd::rooted_counts(&class.graph, gl.root, 2, class.size, self);
            let start = self.graphlets_of_size(2).start;
            row.into_iter()
                .enumerate()
                .filter(|&(_, c)| c > 0)
                .map(|(k, c)| (GraphletId(start + k), c))
                .collect()
        })
    }

    pub fn root_counts_within(&self, j: GraphletId, i: GraphletId) -> Result<u64> {
        if j.0 >= self.graphlets.len() || i.0 >= self.graphlets.len() {
            return Err(Error::InvalidInput(format!("graphlet index out of range ({} or {})", j.0, i.0)));
        }
        if self.graphlet_size(i) > self.graphlet_size(j) {
            return Err(Error::SizeBound(format!(
                "graphlet {} is larger than graphlet {}",
                i.0, j.0
            )));
        }
        Ok(self
            .root_count_row(j)
            .iter()
            .find(|(id, _)| *id == i)
            .map_or(0, |&(_, c)| c))
    }

    /// Standard orbit number (0-72) of a graphlet on at most 5 vertices.
    pub fn przulj_id(&self, id: GraphletId) -> Option<usize> {
        self.przulj.as_ref().and_then(|t| t.get(id.0).copied())
    }

    pub fn from_przulj(&self, orbit: usize) -> Option<GraphletId> {
        self.przulj
            .as_ref()
            .and_then(|t| t.iter().position(|&o| o == orbit))
            .map(GraphletId)
    }

    pub fn has_przulj(&self) -> bool {
        self.przulj.is_some()
    }

    fn load_przulj(&self) -> Result<Vec<usize>> {
        let bad = |line: usize, msg: String| Error::Integrity(format!("orbit table line {line}: {msg}"));
        let mut table = vec![usize::MAX; self.graphlet_range(2, 5).end];
        let mut graph_class: HashMap<usize, usize> = HashMap::new();
        let mut last_graph = 0usize;
        for (lineno, line) in STANDARD_ORBITS.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let lineno = lineno + 1;
            let (head, edges) = line
                .split_once('|')
                .ok_or_else(|| bad(lineno, "missing edge list".into()))?;
            let f: Vec<usize> = head
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| bad(lineno, format!("{e}")))?;
            let [orbit, gid, size, nedges, root_degree, orbit_size, root] = f[..] else {
                return Err(bad(lineno, "expected 7 header fields".into()));
            };
            let mut g = Graph::new(size);
            for e in edges.split_whitespace() {
                let (u, v) = e
                    .split_once('-')
                    .and_then(|(u, v)| Some((u.parse().ok()?, v.parse().ok()?)))
                    .ok_or_else(|| bad(lineno, format!("bad edge {e}")))?;
                g.try_add_edge(u, v).map_err(|e| bad(lineno, e.to_string()))?;
            }
            if g.edge_count() != nedges || g.degree(root) != root_degree {
                return Err(bad(lineno, "edge count or root degree mismatch".into()));
            }
            if gid < last_graph {
                return Err(bad(lineno, "graph ids must be non-decreasing".into()));
            }
            last_graph = gid;
            let id = self.classify_rooted(&g, root)?;
            let gl = self.graphlet(id);
            if gl.orbit_size != orbit_size {
                return Err(bad(lineno, format!("orbit size {} != declared {orbit_size}", gl.orbit_size)));
            }
            if *graph_class.entry(gid).or_insert(gl.gamma) != gl.gamma {
                return Err(bad(lineno, format!("orbits of G{gid} fall into different classes")));
            }
            if table[id.0] != usize::MAX {
                return Err(bad(lineno, format!("graphlet {} assigned twice", id.0)));
            }
            table[id.0] = orbit;
        }
        let mut seen: Vec<usize> = table.clone();
        seen.sort_unstable();
        if seen != (0..table.len()).collect::<Vec<_>>() {
            return Err(Error::Integrity("orbit table is not a bijection onto 0..=72".into()));
        }
        let distinct: std::collections::HashSet<usize> = graph_class.values().copied().collect();
        if graph_class.len() != 30 || distinct.len() != 30 {
            return Err(Error::Integrity("orbit table must cover 30 distinct graphs".into()));
        }
        Ok(table)
    }

    pub fn export(&self) -> CatalogExport {
        CatalogExport {
            max_size: self.max_size,
            classes: self
                .classes
                .iter()
                .map(|c| ClassExport {
                    gamma: c.gamma,
                    theta: c.graphlets.clone().collect(),
                    code: c.code.to_hex(),
                    size: c.size,
                    edges: c.edges,
                    orbit_sizes: c.graphlets.clone().map(|i| self.graphlets[i].orbit_size).collect(),
                    przulj_id: self
                        .przulj
                        .as_ref()
                        .filter(|_| c.size <= 5)
                        .map(|t| c.graphlets.clone().map(|i| t[i]).collect()),
                })
                .collect(),
        }
    }

    /// Rebuilds a catalog from its export, recomputing and cross-checking every
    /// derived field.
    pub fn from_export(export: &CatalogExport) -> Result<Catalog> {
        check_size(export.max_size)?;
        let mut by_size = vec![Vec::new(); export.max_size - 1];
        for c in &export.classes {
            if c.size < 2 || c.size > export.max_size {
                return Err(Error::Integrity(format!("class {} has size {} out of range", c.gamma, c.size)));
            }
            by_size[c.size - 2].push(CanonicalCode::from_hex(c.size, &c.code)?);
        }
        for codes in &by_size {
            for code in codes {
                if canonical_code(&code.to_graph()) != *code {
                    return Err(Error::Integrity("exported code is not canonical".into()));
                }
            }
        }
        let catalog = Catalog::from_codes(export.max_size, by_size)?;
        if catalog.export() != *export {
            return Err(Error::Integrity("catalog export does not match its rebuild".into()));
        }
        Ok(catalog)
    }
}

fn check_size(max_size: usize) -> Result<()> {
    if !(2..=MAX_CATALOG_SIZE).contains(&max_size) {
        return Err(Error::SizeBound(format!(
            "catalog size {max_size} outside 2..={MAX_CATALOG_SIZE}"
        )));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassExport {
    pub gamma: usize,
    pub theta: Vec<usize>,
    pub code: String,
    pub size: usize,
    pub edges: usize,
    pub orbit_sizes: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub przulj_id: Option<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogExport {
    pub max_size: usize,
    pub classes: Vec<ClassExport>,
}
