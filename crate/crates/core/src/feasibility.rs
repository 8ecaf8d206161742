//! Size-2 and size-3 graphlet counts: local identities, cheap necessary
//! conditions, and an exhaustive realizability decision for small matrices.

use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{Catalog, GraphletId};
use crate::error::{Error, Result};
use crate::gdd::gdd_unchecked;
use crate::generate::{generate, Family};
use crate::graph::{binomial, Graph, MAX_ENUM_VERTICES};

/// Largest order decided by exhaustive search.
pub const MAX_DECIDE_VERTICES: usize = 8;

/// Per-vertex counts of edges, P3 ends and triangles, with an optional P3
/// middle column.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gds3Matrix {
    /// `[edge, p3_end, triangle]` per vertex.
    pub rows: Vec<[u64; 3]>,
    pub p3_mid: Option<Vec<u64>>,
}

impl Gds3Matrix {
    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Counts of any graph, computed directly from neighbourhoods.
    pub fn of_graph(g: &Graph) -> Gds3Matrix {
        let rows = (0..g.order())
            .map(|v| {
                let nv = g.row(v);
                let closed = nv | 1 << v;
                let (mut end, mut tri2) = (0u64, 0u64);
                for u in g.neighbors(v) {
                    end += (g.row(u) & !closed).count_ones() as u64;
                    tri2 += (g.row(u) & nv).count_ones() as u64;
                }
                [nv.count_ones() as u64, end, tri2 / 2]
            })
            .collect();
        Gds3Matrix { rows, p3_mid: None }
    }

    pub fn with_mid(mut self) -> Gds3Matrix {
        self.p3_mid = Some(self.rows.iter().map(|&[d, _, t]| binomial(d, 2) - t).collect());
        self
    }

    /// Rows sorted: the matrix up to relabeling.
    pub fn sorted_rows(&self) -> Vec<[u64; 3]> {
        let mut r = self.rows.clone();
        r.sort_unstable();
        r
    }

    /// Reads 3 columns (edge, P3 end, triangle) or 4 columns in graphlet
    /// order (edge, P3 end, P3 middle, triangle). Blank lines, `#` comments and
    /// a non-numeric header line are skipped.
    pub fn from_csv(text: &str) -> Result<Gds3Matrix> {
        let mut r = csv::ReaderBuilder::new()
            .has_headers(false)
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .flexible(true)
            .from_reader(text.as_bytes());
        let mut rows = Vec::new();
        let mut mid = Vec::new();
        let mut width = None;
        for (line, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| Error::InvalidInput(format!("csv: {e}")))?;
            let vals: std::result::Result<Vec<u64>, _> = rec.iter().map(str::parse).collect();
            let vals = match vals {
                Ok(v) => v,
                Err(_) if line == 0 && rows.is_empty() => continue,
                Err(_) => return Err(Error::InvalidInput(format!("row {line}: non-numeric field"))),
            };
            if *width.get_or_insert(vals.len()) != vals.len() || !(3..=4).contains(&vals.len()) {
                return Err(Error::InvalidInput(format!("row {line}: expected a consistent 3 or 4 columns")));
            }
            if vals.len() == 3 {
                rows.push([vals[0], vals[1], vals[2]]);
            } else {
                rows.push([vals[0], vals[1], vals[3]]);
                mid.push(vals[2]);
            }
        }
        if rows.is_empty() {
            return Err(Error::InvalidInput("empty matrix".into()));
        }
        Ok(Gds3Matrix {
            rows,
            p3_mid: (width == Some(4)).then_some(mid),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (v, [d, e, t]) in self.rows.iter().enumerate() {
            match &self.p3_mid {
                Some(m) => out.push_str(&format!("{d},{e},{},{t}\n", m[v])),
                None => out.push_str(&format!("{d},{e},{t}\n")),
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", content = "reason", rename_all = "snake_case")]
pub enum FilterOutcome {
    Pass,
    Fail(String),
}

/// Erdős–Gallai test for a graphical degree sequence.
pub fn is_graphical(degrees: &[u64]) -> bool {
    let mut d: Vec<u64> = degrees.to_vec();
    d.sort_unstable_by(|a, b| b.cmp(a));
    if d.iter().sum::<u64>() % 2 == 1 || d.first().is_some_and(|&x| x >= d.len() as u64) {
        return false;
    }
    let mut lhs = 0;
    for k in 1..=d.len() {
        lhs += d[k - 1];
        let rhs = (k * (k - 1)) as u64 + d[k..].iter().map(|&x| x.min(k as u64)).sum::<u64>();
        if lhs > rhs {
            return false;
        }
    }
    true
}

/// Necessary conditions only; passing does not imply realizability.
pub fn filter_candidate(m: &Gds3Matrix) -> FilterOutcome {
    let degrees: Vec<u64> = m.rows.iter().map(|r| r[0]).collect();
    if !is_graphical(&degrees) {
        return FilterOutcome::Fail("edge column is not a graphical degree sequence".into());
    }
    let tri: u64 = m.rows.iter().map(|r| r[2]).sum();
    if !tri.is_multiple_of(3) {
        return FilterOutcome::Fail(format!("triangle column sums to {tri}, not a multiple of 3"));
    }
    if m.rows.iter().map(|r| r[1]).sum::<u64>() % 2 != 0 {
        return FilterOutcome::Fail("P3 end column has an odd sum".into());
    }
    for (v, &[d, _, t]) in m.rows.iter().enumerate() {
        if t > binomial(d, 2) {
            return FilterOutcome::Fail(format!("vertex {v}: {t} triangles exceed C({d}, 2)"));
        }
        if let Some(mid) = &m.p3_mid {
            if mid[v] != binomial(d, 2) - t {
                return FilterOutcome::Fail(format!("vertex {v}: P3 middle count {} != C({d}, 2) - {t}", mid[v]));
            }
        }
    }
    FilterOutcome::Pass
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Realizability {
    Witness { graph: Graph },
    No { reason: String },
}

/// Decides whether some graph on `n <= 8` vertices has the given counts up to
/// vertex relabeling, by filtering and then scanning every graph class.
pub fn decide_realizability(m: &Gds3Matrix) -> Result<Realizability> {
    let n = m.n();
    if n > MAX_DECIDE_VERTICES {
        return Err(Error::Scale(format!(
            "undecided at this scale: exhaustive search covers n <= {MAX_DECIDE_VERTICES}, got {n}"
        )));
    }
    if let FilterOutcome::Fail(reason) = filter_candidate(m) {
        return Ok(Realizability::No { reason });
    }
    let target = m.sorted_rows();
    let witness = generate(n, Family::All)
        .into_par_iter()
        .find_first(|g| Gds3Matrix::of_graph(g).sorted_rows() == target);
    Ok(match witness {
        Some(graph) => Realizability::Witness { graph },
        None => Realizability::No {
            reason: format!("no graph on {n} vertices realizes the matrix"),
        },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalIdentityReport {
    /// First vertex whose degree identity fails.
    pub first_violation: Option<usize>,
    pub edge_triangle_total: u64,
    pub triangle_column_total: u64,
}

impl LocalIdentityReport {
    pub fn passed(&self) -> bool {
        self.first_violation.is_none() && self.edge_triangle_total == self.triangle_column_total
    }
}

/// Checks the engine's size-2/3 counts against
/// `deg(v) = Σ_{u ∈ N(v)} deg(u) - #end(v) - 2 #tri(v)` and against the
/// edge-triangle double count.
pub fn verify_local_identities(g: &Graph) -> Result<LocalIdentityReport> {
    let n = g.order();
    if !(2..=MAX_ENUM_VERTICES).contains(&n) {
        return Err(Error::SizeBound(format!("local identities need 2..={MAX_ENUM_VERTICES} vertices")));
    }
    let c = Catalog::shared(3)?;
    let d = gdd_unchecked(g, 2, 3, c);
    let (edge, end, tri) = (GraphletId(0), GraphletId(1), GraphletId(3));
    let first_violation = (0..n).find(|&v| {
        let around: u64 = g.neighbors(v).map(|u| d.get(u, edge)).sum();
        d.get(v, edge) as i128 != around as i128 - d.get(v, end) as i128 - 2 * d.get(v, tri) as i128
    });
    let edge_triangle_total = g.edges().map(|(u, v)| (g.row(u) & g.row(v)).count_ones() as u64).sum();
    let triangle_column_total = (0..n).map(|v| d.get(v, tri)).sum();
    Ok(LocalIdentityReport {
        first_violation,
        edge_triangle_total,
        triangle_column_total,
    })
}
