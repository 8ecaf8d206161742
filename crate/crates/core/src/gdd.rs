//! Graphlet degree sequences by rooted connected-subset enumeration.
//!
//! A vertex `v` touches the graphlet `g_i` once for every vertex subset
//! `S ∋ v` such that `H[S]` is connected, isomorphic to `U(g_i)`, with `v` in
//! the root orbit. Subsets are grown from `v` by an exclusion-set expansion
//! that visits every connected subset containing `v` exactly once.

use std::collections::BTreeMap;
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{rooted_code, CanonicalCode};
use crate::catalog::{Catalog, GraphletId};
use crate::error::{Error, Result};
use crate::graph::{binomial, bits, Graph, MAX_ENUM_VERTICES};

/// Per-vertex graphlet counts over a contiguous range of graphlet sizes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GddMatrix {
    n: usize,
    min_size: usize,
    max_size: usize,
    cols: Range<usize>,
    counts: Vec<u64>,
}

impl GddMatrix {
    /// Builds a matrix from explicit rows, one entry per graphlet of sizes
    /// `min_size..=max_size` in catalog order.
    pub fn from_rows(rows: Vec<Vec<u64>>, min_size: usize, max_size: usize, c: &Catalog) -> Result<GddMatrix> {
        if min_size < 2 || min_size > max_size || max_size > c.max_size() {
            return Err(Error::SizeBound(format!(
                "sizes {min_size}..={max_size} outside catalog range 2..={}",
                c.max_size()
            )));
        }
        let cols = c.graphlet_range(min_size, max_size);
        let n = rows.len();
        let mut counts = Vec::with_capacity(n * cols.len());
        for (v, row) in rows.into_iter().enumerate() {
            if row.len() != cols.len() {
                return Err(Error::InvalidInput(format!(
                    "row {v} has {} entries, expected {}",
                    row.len(),
                    cols.len()
                )));
            }
            counts.extend(row);
        }
        Ok(GddMatrix {
            n,
            min_size,
            max_size,
            cols,
            counts,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn min_size(&self) -> usize {
        self.min_size
    }

    pub fn max_size(&self) -> usize {
        self.max_size
    }

    /// Graphlet indices covered, in column order.
    pub fn cols(&self) -> Range<usize> {
        self.cols.clone()
    }

    pub fn num_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn row(&self, v: usize) -> &[u64] {
        let w = self.cols.len();
        &self.counts[v * w..(v + 1) * w]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> + '_ {
        (0..self.n).map(|v| self.row(v))
    }

    /// Count for graphlet `id`; zero when `id` lies outside the covered sizes.
    pub fn get(&self, v: usize, id: GraphletId) -> u64 {
        if self.cols.contains(&id.0) {
            self.row(v)[id.0 - self.cols.start]
        } else {
            0
        }
    }

    pub fn covers(&self, id: GraphletId) -> bool {
        self.cols.contains(&id.0)
    }

    /// Columns of sizes `min..=max` as a new matrix.
    pub fn restrict(&self, min: usize, max: usize, c: &Catalog) -> Result<GddMatrix> {
        if min < self.min_size || max > self.max_size || min > max {
            return Err(Error::SizeBound(format!(
                "sizes {min}..={max} not covered by a matrix over {}..={}",
                self.min_size, self.max_size
            )));
        }
        let cols = c.graphlet_range(min, max);
        let (a, b) = (cols.start - self.cols.start, cols.end - self.cols.start);
        let counts = (0..self.n).flat_map(|v| self.row(v)[a..b].iter().copied()).collect();
        Ok(GddMatrix {
            n: self.n,
            min_size: min,
            max_size: max,
            cols,
            counts,
        })
    }

    /// Exact-size block.
    pub fn block(&self, size: usize, c: &Catalog) -> Result<GddMatrix> {
        self.restrict(size, size, c)
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.rows().map(|r| r.iter().sum()).collect()
    }

    /// Rows sorted lexicographically: the matrix up to vertex relabeling.
    pub fn sorted_rows(&self) -> Vec<Vec<u64>> {
        let mut rows: Vec<Vec<u64>> = self.rows().map(<[u64]>::to_vec).collect();
        rows.sort_unstable();
        rows
    }

    pub fn max_entry(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Writes CSV with a header of graphlet indices (or standard orbit ids).
    pub fn to_csv(&self, c: &Catalog, przulj: bool) -> Result<String> {
        if przulj && !(c.has_przulj() && self.max_size <= 5) {
            return Err(Error::InvalidInput("standard orbit ids exist only for sizes up to 5".into()));
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut header = vec!["vertex".to_string()];
        for i in self.cols() {
            header.push(match przulj {
                true => format!("o{}", c.przulj_id(GraphletId(i)).expect("checked above")),
                false => format!("g{i}"),
            });
        }
        w.write_record(&header).map_err(csv_err)?;
        for v in 0..self.n {
            let mut rec = vec![v.to_string()];
            rec.extend(self.row(v).iter().map(u64::to_string));
            w.write_record(&rec).map_err(csv_err)?;
        }
        Ok(String::from_utf8(w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))?).expect("csv is UTF-8"))
    }

    /// Reads the CSV written by [`GddMatrix::to_csv`]; lines starting with `#` are ignored.
    pub fn from_csv(text: &str, c: &Catalog) -> Result<GddMatrix> {
        let mut r = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let header = r.headers().map_err(csv_err)?.clone();
        let mut ids = Vec::new();
        for h in header.iter().skip(1) {
            let id = if let Some(o) = h.strip_prefix('o') {
                let o: usize = o.parse().map_err(|_| Error::InvalidInput(format!("bad column {h}")))?;
                c.from_przulj(o)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown orbit id {o}")))?
                    .0
            } else {
                h.strip_prefix('g')
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| Error::InvalidInput(format!("bad column {h}")))?
            };
            ids.push(id);
        }
        let (first, last) = match (ids.iter().min(), ids.iter().max()) {
            (Some(&a), Some(&b)) if b < c.num_graphlets() => (a, b),
            _ => return Err(Error::InvalidInput("no graphlet columns in range".into())),
        };
        let min = c.graphlet_size(GraphletId(first));
        let max = c.graphlet_size(GraphletId(last));
        if c.graphlet_range(min, max) != (first..last + 1) {
            return Err(Error::InvalidInput("columns must cover whole sizes".into()));
        }
        let range_start = first;
        let mut rows = Vec::new();
        for (line, rec) in r.records().enumerate() {
            let rec = rec.map_err(csv_err)?;
            let mut row = vec![0u64; ids.len()];
            if rec.len() != ids.len() + 1 {
                return Err(Error::InvalidInput(format!("data row {line} has {} fields", rec.len())));
            }
            for (k, field) in rec.iter().skip(1).enumerate() {
                let val: u64 = field
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("data row {line}: bad count {field:?}")))?;
                let slot = ids[k]
                    .checked_sub(range_start)
                    .filter(|&s| s < row.len())
                    .ok_or_else(|| Error::InvalidInput(format!("column {} out of range", ids[k])))?;
                row[slot] = val;
            }
            rows.push(row);
        }
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != ids.len() {
            return Err(Error::InvalidInput("duplicate graphlet column".into()));
        }
        GddMatrix::from_rows(rows, min, max, c)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidInput(format!("csv: {e}"))
}

fn expand(
    rows: &[u64],
    sub: u64,
    size: usize,
    ext: u64,
    forbid: u64,
    max_size: usize,
    emit: &mut impl FnMut(u64, usize),
) {
    let mut ext = ext;
    let mut forbid = forbid;
    while ext != 0 {
        let w = ext.trailing_zeros() as usize;
        let bit = 1u64 << w;
        ext &= !bit;
        let grown = sub | bit;
        emit(grown, size + 1);
        if size + 1 < max_size {
            let next = (ext | rows[w]) & !grown & !forbid;
            expand(rows, grown, size + 1, next, forbid, max_size, emit);
        }
        forbid |= bit;
    }
}

/// Calls `emit(mask, size)` once for every connected vertex set of size
/// `2..=max_size` that contains `root`.
pub(crate) fn for_each_rooted_subset(rows: &[u64], root: usize, max_size: usize, mut emit: impl FnMut(u64, usize)) {
    if max_size < 2 {
        return;
    }
    let start = 1u64 << root;
    expand(rows, start, 1, rows[root], 0, max_size, &mut emit);
}

/// Counts for graphlets of sizes `min..=max` at `root`, indexed from the first
/// graphlet of size `min`. No preconditions beyond `max <= c.max_size()`.
pub(crate) fn rooted_counts(g: &Graph, root: usize, min: usize, max: usize, c: &Catalog) -> Vec<u64> {
    let rows = g.rows();
    rooted_counts_rows(&rows, root, min, max, c)
}

fn rooted_counts_rows(rows: &[u64], root: usize, min: usize, max: usize, c: &Catalog) -> Vec<u64> {
    let cols = c.graphlet_range(min, max);
    let mut counts = vec![0u64; cols.len()];
    for_each_rooted_subset(rows, root, max, |mask, size| {
        if size >= min {
            let id = c.classify_subset(rows, root, mask);
            counts[id.0 - cols.start] += 1;
        }
    });
    counts
}

/// Sizes `min..=max` for every vertex, without connectivity or size checks.
pub(crate) fn gdd_unchecked(g: &Graph, min: usize, max: usize, c: &Catalog) -> GddMatrix {
    let rows = g.rows();
    let per_vertex: Vec<Vec<u64>> = (0..g.order())
        .into_par_iter()
        .map(|v| rooted_counts_rows(&rows, v, min, max, c))
        .collect();
    GddMatrix {
        n: g.order(),
        min_size: min,
        max_size: max,
        cols: c.graphlet_range(min, max),
        counts: per_vertex.into_iter().flatten().collect(),
    }
}

fn check_gdd_input(g: &Graph, min: usize, max: usize, c: &Catalog) -> Result<()> {
    let n = g.order();
    if n > MAX_ENUM_VERTICES {
        return Err(Error::SizeBound(format!("{n} vertices exceeds the enumeration cap {MAX_ENUM_VERTICES}")));
    }
    if !g.is_connected() {
        return Err(Error::Disconnected("graphlet degree sequences need a connected graph".into()));
    }
    let hi = (n.saturating_sub(1)).min(c.max_size());
    if min < 2 || min > max || max > hi {
        return Err(Error::SizeBound(format!(
            "graphlet sizes {min}..={max} outside 2..={hi} for {n} vertices and catalog size {}",
            c.max_size()
        )));
    }
    Ok(())
}

/// The `(<= max_size)`-gdd of a connected graph.
pub fn compute_gdd(g: &Graph, max_size: usize, c: &Catalog) -> Result<GddMatrix> {
    compute_gdd_sizes(g, 2, max_size, c)
}

/// Exact counts for graphlet sizes `min..=max` only.
pub fn compute_gdd_sizes(g: &Graph, min: usize, max: usize, c: &Catalog) -> Result<GddMatrix> {
    check_gdd_input(g, min, max, c)?;
    Ok(gdd_unchecked(g, min, max, c))
}

/// One gds row by brute force: every vertex subset containing `v` is tested for
/// connectivity and classified from scratch.
pub fn oracle_gds(g: &Graph, v: usize, max_size: usize, c: &Catalog) -> Result<Vec<u64>> {
    check_gdd_input(g, 2, max_size, c)?;
    let n = g.order();
    if n > 16 {
        return Err(Error::Scale(format!("the subset oracle is limited to 16 vertices, got {n}")));
    }
    if v >= n {
        return Err(Error::InvalidInput(format!("vertex {v} out of range")));
    }
    let cols = c.graphlet_range(2, max_size);
    let mut row = vec![0u64; cols.len()];
    let others: Vec<usize> = (0..n).filter(|&u| u != v).collect();
    for mask in 1u32..(1u32 << others.len()) {
        let k = mask.count_ones() as usize + 1;
        if k > max_size {
            continue;
        }
        let mut vertices = vec![v];
        vertices.extend((0..others.len()).filter(|&b| mask >> b & 1 == 1).map(|b| others[b]));
        let sub = g.induced(&vertices);
        if !sub.is_connected() {
            continue;
        }
        let id = c.classify_rooted(&sub, 0)?;
        row[id.0 - cols.start] += 1;
    }
    Ok(row)
}

/// Derives the `(<= n-k)`-gdd of a k-vertex-connected graph from its exact
/// size-`(n-k+1)` block.
pub fn project_gdd(d: &GddMatrix, n: usize, k: usize, c: &Catalog) -> Result<GddMatrix> {
    if k < 2 || n < k + 2 {
        return Err(Error::SizeBound(format!("projection needs k >= 2 and n >= k + 2 (n = {n}, k = {k})")));
    }
    let src = n - k + 1;
    if src > c.max_size() {
        return Err(Error::SizeBound(format!("size-{src} graphlets exceed catalog size {}", c.max_size())));
    }
    if d.n() != n || d.min_size() != src || d.max_size() != src {
        return Err(Error::SizeBound(format!(
            "expected the exact size-{src} block of a {n}-vertex graph, got sizes {}..={} on {} rows",
            d.min_size(),
            d.max_size(),
            d.n()
        )));
    }
    let target = c.graphlet_range(2, n - k);
    let mut counts = Vec::with_capacity(n * target.len());
    for v in 0..n {
        let mut acc = vec![0u64; target.len()];
        for (off, &dv) in d.row(v).iter().enumerate() {
            if dv == 0 {
                continue;
            }
            for &(i, cnt) in c.root_count_row(GraphletId(d.cols.start + off)) {
                if target.contains(&i.0) {
                    let slot = &mut acc[i.0 - target.start];
                    *slot = dv
                        .checked_mul(cnt)
                        .and_then(|x| slot.checked_add(x))
                        .ok_or(Error::Overflow)?;
                }
            }
        }
        for (off, a) in acc.iter_mut().enumerate() {
            let size = c.graphlet_size(GraphletId(target.start + off));
            let div = binomial((n - size) as u64, (k - 1) as u64);
            if *a % div != 0 {
                return Err(Error::ConnectivityHypothesis(format!(
                    "row {v}, graphlet {}: {} is not divisible by {div}",
                    target.start + off,
                    a
                )));
            }
            *a /= div;
        }
        counts.extend(acc);
    }
    Ok(GddMatrix {
        n,
        min_size: 2,
        max_size: n - k,
        cols: target,
        counts,
    })
}

/// Change of one gds row when a vertex is deleted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeletionDelta {
    pub v: usize,
    pub x: usize,
    pub distance: usize,
    /// Decrease per graphlet, indexed like the columns of a `(<= max_size)`-gdd.
    pub delta: Vec<u64>,
    /// Graphlets whose count dropped.
    pub decreased: Vec<GraphletId>,
    /// Every decreased graphlet has root eccentricity at least `distance`.
    pub eccentricity_at_least: bool,
    /// Every decreased graphlet has root eccentricity exactly `distance`.
    pub eccentricity_exact: bool,
}

pub fn deletion_delta(g: &Graph, v: usize, x: usize, max_size: usize, c: &Catalog) -> Result<DeletionDelta> {
    let n = g.order();
    if v >= n || x >= n || v == x {
        return Err(Error::InvalidInput(format!("need distinct vertices below {n}, got {v} and {x}")));
    }
    check_gdd_input(g, 2, max_size.min(2), c)?;
    if max_size < 2 || max_size > c.max_size() {
        return Err(Error::SizeBound(format!("max size {max_size} outside 2..={}", c.max_size())));
    }
    let h = g.delete_vertex(x);
    if !h.is_connected() {
        return Err(Error::Disconnected(format!(
            "deleting {x} disconnects the graph; use articulation analysis"
        )));
    }
    let before = rooted_counts(g, v, 2, max_size, c);
    let after = rooted_counts(&h, if v > x { v - 1 } else { v }, 2, max_size, c);
    let distance = g.distance(v, x).expect("connected");
    let mut delta = Vec::with_capacity(before.len());
    let mut decreased = Vec::new();
    for (i, (b, a)) in before.iter().zip(&after).enumerate() {
        let d = b.checked_sub(*a).ok_or_else(|| {
            Error::Integrity(format!("count of graphlet {i} increased after deleting a vertex"))
        })?;
        if d > 0 {
            decreased.push(GraphletId(i));
        }
        delta.push(d);
    }
    let ecc = |id: &GraphletId| c.graphlet(*id).root_eccentricity;
    Ok(DeletionDelta {
        v,
        x,
        distance,
        eccentricity_at_least: decreased.iter().all(|id| ecc(id) >= distance),
        eccentricity_exact: decreased.iter().all(|id| ecc(id) == distance),
        delta,
        decreased,
    })
}

/// Catalog-free gds: rooted canonical code of every connected subset of size
/// `2..=max_size` containing `root`, with multiplicities.
pub fn rooted_census(g: &Graph, root: usize, max_size: usize) -> BTreeMap<CanonicalCode, u64> {
    let rows = g.rows();
    let mut census = BTreeMap::new();
    for_each_rooted_subset(&rows, root, max_size, |mask, _| {
        let mut vertices = vec![root];
        vertices.extend(bits(mask & !(1 << root)));
        *census.entry(rooted_code(&g.induced(&vertices), 0)).or_insert(0) += 1;
    });
    census
}
