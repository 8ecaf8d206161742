//! Vertex connectivity read off a single gdd block.
//!
//! A connected graph on `n` vertices is k-vertex-connected iff every vertex
//! touches exactly `C(n-1, k-1)` graphlets of size `n-k+1`. The vertices
//! meeting that count are either all of them or at most `k-1` vertices that
//! lie in every `(k-1)`-cut.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gdd::GddMatrix;
use crate::graph::binomial;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    KConnected,
    Articulation { vertex: usize },
    MultipleArticulations,
    CutCore { vertices: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    pub n: usize,
    pub k: usize,
    pub verdict: Verdict,
    /// Row sums of the size-`(n-k+1)` block.
    pub per_vertex_sums: Vec<u64>,
    /// Vertices whose sum equals `C(n-1, k-1)`.
    pub full_vertices: Vec<usize>,
}

fn block_sums(d: &GddMatrix, n: usize, k: usize) -> Result<(Vec<u64>, u64)> {
    if k < 2 || k >= n {
        return Err(Error::SizeBound(format!("k = {k} outside 2..{n}")));
    }
    let size = n - k + 1;
    if d.n() != n || d.min_size() != size || d.max_size() != size {
        return Err(Error::SizeBound(format!(
            "expected the size-{size} block of a {n}-vertex gdd, got sizes {}..={} on {} rows",
            d.min_size(),
            d.max_size(),
            d.n()
        )));
    }
    Ok((d.row_sums(), binomial((n - 1) as u64, (k - 1) as u64)))
}

/// True iff every vertex touches `C(n-1, k-1)` graphlets of size `n-k+1`.
pub fn k_connectivity_from_gdd(d: &GddMatrix, n: usize, k: usize) -> Result<bool> {
    let (sums, target) = block_sums(d, n, k)?;
    Ok(sums.iter().all(|&s| s == target))
}

fn full_vertices(d: &GddMatrix, n: usize, k: usize) -> Result<(Vec<u64>, Vec<usize>)> {
    let (sums, target) = block_sums(d, n, k)?;
    let full = (0..n).filter(|&v| sums[v] == target).collect();
    Ok((sums, full))
}

/// Classifies a connected graph from its size-`(n-1)` block.
pub fn articulation_analysis(d: &GddMatrix, n: usize) -> Result<ConnectivityReport> {
    let (sums, full) = full_vertices(d, n, 2)?;
    let verdict = match full.len() {
        0 => Verdict::MultipleArticulations,
        1 => Verdict::Articulation { vertex: full[0] },
        p if p == n => Verdict::KConnected,
        p => {
            return Err(Error::Integrity(format!(
                "{p} of {n} vertices touch n-1 graphlets of size n-1; a valid gdd allows 0, 1 or all"
            )))
        }
    };
    Ok(ConnectivityReport {
        n,
        k: 2,
        verdict,
        per_vertex_sums: sums,
        full_vertices: full,
    })
}

/// Vertices of a `(k-1)`-connected graph lying in every `(k-1)`-cut, or all
/// vertices when the graph is k-connected.
pub fn cut_core_vertices(d: &GddMatrix, n: usize, k: usize) -> Result<Vec<usize>> {
    Ok(cut_core_report(d, n, k)?.full_vertices)
}

pub fn cut_core_report(d: &GddMatrix, n: usize, k: usize) -> Result<ConnectivityReport> {
    let (sums, full) = full_vertices(d, n, k)?;
    let p = full.len();
    if p >= k && p < n {
        return Err(Error::Integrity(format!(
            "{p} vertices reach C(n-1, k-1); a valid gdd allows at most {} or all {n}",
            k - 1
        )));
    }
    let verdict = if p == n {
        Verdict::KConnected
    } else {
        Verdict::CutCore {
            vertices: full.clone(),
        }
    };
    Ok(ConnectivityReport {
        n,
        k,
        verdict,
        per_vertex_sums: sums,
        full_vertices: full,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use crate::gdd::compute_gdd_sizes;
    use crate::graph::Graph;

    #[test]
    fn small_verdicts() {
        let c = Catalog::build(4).unwrap();
        let block = |g: &Graph, k: usize| compute_gdd_sizes(g, g.order() - k + 1, g.order() - k + 1, &c).unwrap();

        assert!(k_connectivity_from_gdd(&block(&Graph::cycle(4), 2), 4, 2).unwrap());
        assert!(!k_connectivity_from_gdd(&block(&Graph::path(3), 2), 3, 2).unwrap());
        assert!(k_connectivity_from_gdd(&block(&Graph::complete(5), 4), 5, 4).unwrap());

        let p3 = articulation_analysis(&block(&Graph::path(3), 2), 3).unwrap();
        assert_eq!(p3.verdict, Verdict::Articulation { vertex: 1 });
        let c5 = articulation_analysis(&block(&Graph::cycle(5), 2), 5).unwrap();
        assert_eq!(c5.verdict, Verdict::KConnected);
        assert_eq!(c5.per_vertex_sums, vec![4; 5]);
        let p4 = articulation_analysis(&block(&Graph::path(4), 2), 4).unwrap();
        assert_eq!(p4.verdict, Verdict::MultipleArticulations);
    }

    #[test]
    fn wrong_block_is_rejected() {
        let c = Catalog::build(3).unwrap();
        let d = compute_gdd_sizes(&Graph::cycle(4), 2, 2, &c).unwrap();
        assert!(articulation_analysis(&d, 4).is_err());
    }

    #[test]
    fn impossible_cardinality_is_an_integrity_error() {
        let c = Catalog::build(3).unwrap();
        // four rows over the size-3 block, two of which reach 3
        let d = GddMatrix::from_rows(vec![vec![3, 0, 0], vec![0, 3, 0], vec![1, 0, 0], vec![1, 0, 0]], 3, 3, &c).unwrap();
        assert!(matches!(articulation_analysis(&d, 4), Err(Error::Integrity(_))));
    }
}
