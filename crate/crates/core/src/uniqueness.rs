//! Vertices with equal graphlet degree sequences in non-isomorphic graphs.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::canon::{automorphism_orbits, canonical_code, rooted_code, CanonicalCode};
use crate::catalog::Catalog;
use crate::error::{Error, Result};
use crate::gdd::{gdd_unchecked, rooted_census};
use crate::generate::{generate, known_class_count, Family};
use crate::graph::Graph;

/// Largest order searched exhaustively.
pub const MAX_SEARCH_VERTICES: usize = 7;

/// A path ending in a triangle and the same path ending in a fork, with the
/// far path end as the distinguished vertex of both.
#[derive(Clone, Debug, Serialize)]
pub struct SameGdsPair {
    pub triangle: Graph,
    pub fork: Graph,
    pub vertex: usize,
}

/// Builds the triangle/fork pair on `n >= 4` vertices and checks with the
/// catalog-free census that vertex 0 has the same `(<= n-1)`-gds in both.
pub fn same_gds_pair(n: usize) -> Result<SameGdsPair> {
    if n < 4 {
        return Err(Error::InvalidInput(format!("the triangle/fork pair needs n >= 4, got {n}")));
    }
    if n > 16 {
        return Err(Error::Scale(format!("pair verification covers n <= 16, got {n}")));
    }
    let (pair, _) = triangle_fork(n);
    let a = rooted_census(&pair.triangle, 0, n - 1);
    let b = rooted_census(&pair.fork, 0, n - 1);
    if a != b {
        return Err(Error::Integrity(format!("triangle/fork endpoints differ at n = {n}")));
    }
    Ok(pair)
}

fn triangle_fork(n: usize) -> (SameGdsPair, [CanonicalCode; 2]) {
    let end = n - 3;
    let mut fork = Graph::path(n - 2).with_vertex(&[end]).with_vertex(&[end]);
    let mut triangle = fork.clone();
    triangle.add_edge(n - 2, n - 1);
    fork.remove_edge(n - 2, n - 1);
    let codes = [rooted_code(&triangle, 0), rooted_code(&fork, 0)];
    (
        SameGdsPair {
            triangle,
            fork,
            vertex: 0,
        },
        codes,
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    VertexGds,
    WholeGdd,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollisionRecord {
    pub first: CanonicalCode,
    pub second: CanonicalCode,
    /// Colliding vertices in the canonical labelings; absent for whole-gdd
    /// collisions.
    pub first_vertex: Option<usize>,
    pub second_vertex: Option<usize>,
    /// The shared row, or the shared sorted rows.
    pub rows: Vec<Vec<u64>>,
    pub is_triangle_fork_instance: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchOptions {
    pub n: usize,
    pub mode: SearchMode,
    /// Largest graphlet size compared.
    pub max_size: usize,
    pub include_disconnected: bool,
}

/// All collisions among graphs on `n` vertices, sorted by codes and vertices.
pub fn collision_search(opts: &SearchOptions) -> Result<Vec<CollisionRecord>> {
    let n = opts.n;
    let family = if opts.include_disconnected { Family::All } else { Family::Connected };
    if n > MAX_SEARCH_VERTICES {
        return Err(Error::Scale(format!(
            "refusing n = {n}: {} graph classes exceed the exhaustive limit of {MAX_SEARCH_VERTICES} vertices",
            known_class_count(n, family).map_or("too many".to_string(), |c| c.to_string())
        )));
    }
    if n < 3 || opts.max_size < 2 || opts.max_size >= n {
        return Err(Error::SizeBound(format!("need n >= 3 and 2 <= max size <= n-1 (n = {n}, max size = {})", opts.max_size)));
    }
    let c = Catalog::shared(opts.max_size)?;
    let tf = (n >= 4).then(|| triangle_fork(n).1);

    let graphs = generate(n, family);
    type Key = Vec<Vec<u64>>;
    let entries: Vec<(usize, Option<usize>, Key)> = graphs
        .par_iter()
        .enumerate()
        .flat_map_iter(|(gi, g)| {
            let d = gdd_unchecked(g, 2, opts.max_size, c);
            match opts.mode {
                SearchMode::WholeGdd => vec![(gi, None, d.sorted_rows())],
                SearchMode::VertexGds => {
                    let orbits = automorphism_orbits(g);
                    (0..orbits.num_orbits())
                        .map(|o| {
                            let v = orbits.members(o)[0];
                            (gi, Some(v), vec![d.row(v).to_vec()])
                        })
                        .collect()
                }
            }
        })
        .collect();

    let mut buckets: HashMap<&Key, Vec<usize>> = HashMap::new();
    for (idx, (_, _, key)) in entries.iter().enumerate() {
        buckets.entry(key).or_default().push(idx);
    }
    let codes: Vec<CanonicalCode> = graphs.iter().map(canonical_code).collect();
    let mut records = Vec::new();
    for members in buckets.values() {
        for (a, &ia) in members.iter().enumerate() {
            for &ib in &members[a + 1..] {
                let (ga, va, key) = &entries[ia];
                let (gb, vb, _) = &entries[ib];
                if ga == gb {
                    continue;
                }
                let ((ga, va), (gb, vb)) = if codes[*ga] <= codes[*gb] { ((*ga, *va), (*gb, *vb)) } else { ((*gb, *vb), (*ga, *va)) };
                let is_tf = match (va, vb, &tf) {
                    (Some(x), Some(y), Some(tf)) => {
                        let pair = [rooted_code(&graphs[ga], x), rooted_code(&graphs[gb], y)];
                        (pair[0] == tf[0] && pair[1] == tf[1]) || (pair[0] == tf[1] && pair[1] == tf[0])
                    }
                    _ => false,
                };
                records.push(CollisionRecord {
                    first: codes[ga].clone(),
                    second: codes[gb].clone(),
                    first_vertex: va,
                    second_vertex: vb,
                    rows: key.clone(),
                    is_triangle_fork_instance: is_tf,
                });
            }
        }
    }
    records.sort_by(|x, y| {
        (&x.first, &x.second, x.first_vertex, x.second_vertex).cmp(&(&y.first, &y.second, y.first_vertex, y.second_vertex))
    });
    Ok(records)
}

/// Number of triangle/fork collisions and of all others.
pub fn summarize(records: &[CollisionRecord]) -> BTreeMap<&'static str, usize> {
    let tf = records.iter().filter(|r| r.is_triangle_fork_instance).count();
    BTreeMap::from([("triangle_fork", tf), ("other", records.len() - tf)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paw_and_star() {
        let p = same_gds_pair(4).unwrap();
        assert_eq!(p.triangle.edge_count(), 4);
        assert_eq!(p.fork, Graph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap());
        assert_ne!(canonical_code(&p.triangle), canonical_code(&p.fork));
        assert!(same_gds_pair(3).is_err());
    }

    #[test]
    fn three_vertices_collide_on_degree() {
        let opts = SearchOptions {
            n: 3,
            mode: SearchMode::VertexGds,
            max_size: 2,
            include_disconnected: false,
        };
        // sizes up to 2 only see degrees: the P3 middle meets a K3 vertex
        let found = collision_search(&opts).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].rows, vec![vec![2]]);
        assert!(!found[0].is_triangle_fork_instance);
        let whole = SearchOptions {
            mode: SearchMode::WholeGdd,
            ..opts
        };
        assert!(collision_search(&whole).unwrap().is_empty());
    }

    #[test]
    fn refuses_large_orders() {
        let opts = SearchOptions {
            n: 8,
            mode: SearchMode::WholeGdd,
            max_size: 4,
            include_disconnected: false,
        };
        assert!(matches!(collision_search(&opts), Err(Error::Scale(m)) if m.contains("11117")));
    }
}
