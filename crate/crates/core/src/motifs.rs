//! Whole-graph induced subgraph counts derived from a gdd.

use std::collections::HashMap;
use std::ops::Range;

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{Catalog, GraphletId};
use crate::error::{Error, Result};
use crate::gdd::{compute_gdd, GddMatrix};
use crate::generate::{generate, Family};
use crate::graph::Graph;

/// Induced occurrence counts of every connected class of sizes
/// `min_size..=max_size`, in class order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct MotifVector {
    pub min_size: usize,
    pub max_size: usize,
    /// Class indices covered.
    pub classes: Range<usize>,
    pub counts: Vec<u64>,
}

impl MotifVector {
    pub fn get(&self, gamma: usize) -> u64 {
        if self.classes.contains(&gamma) {
            self.counts[gamma - self.classes.start]
        } else {
            0
        }
    }
}

/// Sums each column over all vertices, merges rootings of the same graph and
/// divides by the graph's order.
pub fn motifs_from_gdd(d: &GddMatrix, c: &Catalog) -> Result<MotifVector> {
    let classes = c.classes_of_size(d.min_size()).start..c.classes_of_size(d.max_size()).end;
    let mut counts = vec![0u64; classes.len()];
    for row in d.rows() {
        for (off, &x) in row.iter().enumerate() {
            let gamma = c.underlying(GraphletId(d.cols().start + off));
            counts[gamma - classes.start] += x;
        }
    }
    for (off, total) in counts.iter_mut().enumerate() {
        let size = c.class(classes.start + off).size as u64;
        if *total % size != 0 {
            return Err(Error::Integrity(format!(
                "class {} total {total} is not divisible by its order {size}",
                classes.start + off
            )));
        }
        *total /= size;
    }
    Ok(MotifVector {
        min_size: d.min_size(),
        max_size: d.max_size(),
        classes,
        counts,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DistinguishingPair {
    pub first: Graph,
    pub second: Graph,
    pub motifs: MotifVector,
}

fn motif_table(n: usize, max_size: usize, c: &Catalog) -> Result<Vec<(Graph, MotifVector, Vec<Vec<u64>>)>> {
    if n > 8 {
        return Err(Error::Scale(format!("exhaustive pair search covers n <= 8, got {n}")));
    }
    if max_size < 2 || max_size >= n || max_size > c.max_size() {
        return Err(Error::SizeBound(format!("max size {max_size} outside 2..{n}")));
    }
    generate(n, Family::Connected)
        .into_par_iter()
        .map(|g| {
            let d = compute_gdd(&g, max_size, c)?;
            let m = motifs_from_gdd(&d, c)?;
            Ok((g, m, d.sorted_rows()))
        })
        .collect()
}

/// One pair per motif vector that is shared by graphs with different gdd row
/// multisets, in order of first appearance among the generated classes.
pub fn distinguishing_pairs(n: usize, max_size: usize, c: &Catalog) -> Result<Vec<DistinguishingPair>> {
    let table = motif_table(n, max_size, c)?;
    let mut first_seen: HashMap<&MotifVector, usize> = HashMap::new();
    let mut order = Vec::new();
    let mut buckets: Vec<Vec<usize>> = Vec::new();
    for (idx, (_, m, _)) in table.iter().enumerate() {
        let b = *first_seen.entry(m).or_insert_with(|| {
            buckets.push(Vec::new());
            buckets.len() - 1
        });
        if buckets[b].is_empty() {
            order.push(b);
        }
        buckets[b].push(idx);
    }
    let mut pairs = Vec::new();
    for b in order {
        let members = &buckets[b];
        let a = members[0];
        if let Some(&other) = members.iter().find(|&&i| table[i].2 != table[a].2) {
            pairs.push(DistinguishingPair {
                first: table[a].0.clone(),
                second: table[other].0.clone(),
                motifs: table[a].1.clone(),
            });
        }
    }
    Ok(pairs)
}

/// A pair of connected `n`-vertex graphs with equal motif vectors but different
/// gdd row multisets, if one exists.
pub fn find_distinguishing_pair(n: usize, max_size: usize, c: &Catalog) -> Result<Option<DistinguishingPair>> {
    Ok(distinguishing_pairs(n, max_size, c)?.into_iter().next())
}
