//! Reconstruction from graphlet degree distributions: the deck of a
//! 2-connected graph, trees, and 2-connected graphs with a rigid card.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::canon::{canonical_code, is_rigid, rooted_code, CanonicalCode};
use crate::catalog::{Catalog, GraphletId};
use crate::connectivity::{articulation_analysis, Verdict};
use crate::error::{Error, Result};
use crate::gdd::{compute_gdd, compute_gdd_sizes, project_gdd, GddMatrix};
use crate::graph::Graph;

/// Multiset of vertex-deleted subgraphs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Deck {
    pub n: usize,
    pub cards: BTreeMap<CanonicalCode, u64>,
}

impl Deck {
    /// The deck computed directly from the graph.
    pub fn of_graph(h: &Graph) -> Deck {
        let mut cards = BTreeMap::new();
        for v in 0..h.order() {
            *cards.entry(canonical_code(&h.delete_vertex(v))).or_insert(0) += 1;
        }
        Deck { n: h.order(), cards }
    }

    pub fn total(&self) -> u64 {
        self.cards.values().sum()
    }
}

fn check_block(d: &GddMatrix, n: usize) -> Result<()> {
    if d.n() != n || d.max_size() + 1 != n {
        return Err(Error::SizeBound(format!(
            "expected graphlets up to size {} on {n} rows, got up to {} on {} rows",
            n.saturating_sub(1),
            d.max_size(),
            d.n()
        )));
    }
    Ok(())
}

/// Deck of a 2-connected graph from the size-`(n-1)` columns of its gdd.
pub fn deck_from_gdd(d: &GddMatrix, n: usize, c: &Catalog) -> Result<Deck> {
    check_block(d, n)?;
    let mut totals: BTreeMap<usize, u64> = BTreeMap::new();
    for row in d.rows() {
        for id in c.graphlets_of_size(n - 1) {
            let x = row[id - d.cols().start];
            if x > 0 {
                *totals.entry(c.underlying(GraphletId(id))).or_insert(0) += x;
            }
        }
    }
    let mut cards = BTreeMap::new();
    for (gamma, total) in totals {
        if total % (n as u64 - 1) != 0 {
            return Err(Error::ConnectivityHypothesis(format!(
                "class {gamma} total {total} is not divisible by n-1 = {}",
                n - 1
            )));
        }
        cards.insert(c.class(gamma).code.clone(), total / (n as u64 - 1));
    }
    let deck = Deck { n, cards };
    if deck.total() != n as u64 {
        return Err(Error::ConnectivityHypothesis(format!(
            "deck has {} cards, expected {n}",
            deck.total()
        )));
    }
    Ok(deck)
}

/// Rebuilds a tree from its `(<= n-1)`-gdd. The returned tree has the chosen
/// center as vertex 0.
pub fn reconstruct_tree(d: &GddMatrix, n: usize, c: &Catalog) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("tree reconstruction needs n >= 3, got {n}")));
    }
    check_block(d, n)?;
    if d.min_size() != 2 {
        return Err(Error::SizeBound("tree reconstruction needs every size from 2".into()));
    }
    let base = d.cols().start;
    let lp = |v: usize| {
        d.row(v)
            .iter()
            .enumerate()
            .filter(|&(off, &x)| x > 0 && c.is_path_end(GraphletId(base + off)))
            .map(|(off, _)| c.graphlet_size(GraphletId(base + off)))
            .max()
    };
    // Paths longer than n-1 are invisible, so path ends can tie with the
    // center; the higher degree wins such ties.
    let mut center = None;
    for v in 0..n {
        let l = lp(v).ok_or_else(|| Error::InvalidInput(format!("row {v} touches no path end")))?;
        let key = (l, std::cmp::Reverse(d.get(v, GraphletId(0))));
        if center.is_none_or(|(_, best)| key < best) {
            center = Some((v, key));
        }
    }
    let center = center.expect("n >= 3").0;

    let mut residual: Vec<u64> = d.row(center).to_vec();
    let mut edges = Vec::new();
    let mut next_vertex = 1;
    while let Some(off) = (0..residual.len())
        .rev()
        .find(|&off| residual[off] > 0 && c.is_trunked_tree(GraphletId(base + off)))
    {
        let id = GraphletId(base + off);
        let gl = c.graphlet(id);
        let class = c.class(gl.gamma);
        if next_vertex + class.size - 1 > n {
            return Err(Error::InvalidInput("branches exceed the vertex count; not a tree gdd".into()));
        }
        let mut map = vec![0; class.size];
        for u in (0..class.size).filter(|&u| u != gl.root) {
            map[u] = next_vertex;
            next_vertex += 1;
        }
        edges.extend(class.graph.edges().map(|(a, b)| (map[a], map[b])));
        for &(i, cnt) in c.root_count_row(id) {
            let slot = residual
                .get_mut(i.0 - base)
                .ok_or_else(|| Error::InvalidInput("branch larger than the covered sizes".into()))?;
            *slot = slot
                .checked_sub(cnt)
                .ok_or_else(|| Error::InvalidInput(format!("residual of graphlet {} went negative", i.0)))?;
        }
    }
    if next_vertex != n {
        return Err(Error::InvalidInput(format!(
            "rebuilt {next_vertex} vertices from a gdd on {n} rows; not a tree gdd"
        )));
    }
    let t = Graph::from_edges(n, &edges)?;
    if compute_gdd(&t, n - 1, c)?.sorted_rows() != d.sorted_rows() {
        return Err(Error::InvalidInput("rebuilt tree does not reproduce the gdd".into()));
    }
    Ok(t)
}

/// Orbit data of one rigid size-`(n-1)` class, read from the matrix.
struct StarData {
    k: u64,
    /// Graphlet touched by each row, if any.
    orbit: Vec<Option<GraphletId>>,
    value: Vec<u64>,
}

fn star_data(d: &GddMatrix, gamma: usize, c: &Catalog) -> Option<StarData> {
    let class = c.class(gamma);
    let mut orbit = Vec::with_capacity(d.n());
    let mut value = Vec::with_capacity(d.n());
    for w in 0..d.n() {
        let mut hits = class
            .graphlets
            .clone()
            .map(GraphletId)
            .filter(|&id| d.get(w, id) > 0);
        let first = hits.next();
        if hits.next().is_some() {
            return None;
        }
        orbit.push(first);
        value.push(first.map_or(0, |id| d.get(w, id)));
    }
    let k = *value.iter().max()?;
    if k == 0 || value.iter().any(|&x| x != k && x + 1 != k) {
        return None;
    }
    if value.iter().filter(|&&x| x + 1 == k).count() as u64 != k {
        return None;
    }
    Some(StarData { k, orbit, value })
}

/// Whether the matrix certifies the orbit condition for the rigid class of
/// graphlet `i`: each row touches at most one rooting, all counts are `k` or
/// `k-1`, and exactly `k` rows have `k-1`.
pub fn check_condition_star(d: &GddMatrix, i: GraphletId, c: &Catalog) -> Result<bool> {
    if i.0 >= c.num_graphlets() || !d.covers(i) {
        return Err(Error::InvalidInput(format!("graphlet {} not covered by the matrix", i.0)));
    }
    let class = c.underlying_class(i);
    if class.size + 1 != d.n() {
        return Err(Error::InvalidInput(format!(
            "graphlet {} has size {}, expected {}",
            i.0,
            class.size,
            d.n() - 1
        )));
    }
    if !class.is_rigid() {
        return Err(Error::InvalidInput(format!("graphlet {} is not rigid", i.0)));
    }
    Ok(star_data(d, class.gamma, c).is_some())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Connectivity,
    Rigidity,
    ConditionStar,
    Degrees,
    Verification,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub stage: Stage,
    pub reason: String,
}

/// Hypotheses established from the matrix and the quantities read off it.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub two_connected: bool,
    /// Rigid size-`(n-1)` classes with a nonzero column.
    pub rigid_classes: Vec<usize>,
    /// Rigid classes passing the orbit condition.
    pub qualifying_classes: Vec<usize>,
    pub chosen_class: Option<usize>,
    pub k: Option<u64>,
    pub deleted_row: Option<usize>,
    /// Graphlet touched by each row within the chosen class.
    pub orbit_of_row: Vec<Option<GraphletId>>,
    /// Vertex of the chosen class's canonical graph assigned to each row.
    pub vertex_of_row: Vec<Option<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReconstructionReport {
    pub graph: Option<Graph>,
    pub certificate: Certificate,
    pub failure: Option<Failure>,
}

impl ReconstructionReport {
    fn fail(certificate: Certificate, stage: Stage, reason: impl Into<String>) -> Self {
        ReconstructionReport {
            graph: None,
            certificate,
            failure: Some(Failure {
                stage,
                reason: reason.into(),
            }),
        }
    }
}

/// Reconstructs a 2-connected graph with a rigid card satisfying the orbit
/// condition. Rows keep their labels: on success the rebuilt graph has exactly
/// the input matrix as its gdd.
pub fn reconstruct_asymmetric(d: &GddMatrix, n: usize, c: &Catalog) -> Result<ReconstructionReport> {
    check_block(d, n)?;
    if n < 4 {
        return Err(Error::SizeBound(format!("asymmetric reconstruction needs n >= 4, got {n}")));
    }
    let block = d.block(n - 1, c)?;
    let mut cert = Certificate::default();
    match articulation_analysis(&block, n) {
        Ok(r) if r.verdict == Verdict::KConnected => cert.two_connected = true,
        Ok(r) => return Ok(ReconstructionReport::fail(cert, Stage::Connectivity, format!("{:?}", r.verdict))),
        Err(e) => return Ok(ReconstructionReport::fail(cert, Stage::Connectivity, e.to_string())),
    }

    let present: BTreeSet<usize> = block
        .cols()
        .filter(|&i| (0..n).any(|w| block.get(w, GraphletId(i)) > 0))
        .map(|i| c.underlying(GraphletId(i)))
        .collect();
    cert.rigid_classes = present.into_iter().filter(|&g| c.class(g).is_rigid()).collect();
    if cert.rigid_classes.is_empty() {
        return Ok(ReconstructionReport::fail(cert, Stage::Rigidity, "no qualifying class: no rigid card"));
    }
    let mut chosen = None;
    for &gamma in &cert.rigid_classes {
        if let Some(data) = star_data(d, gamma, c) {
            cert.qualifying_classes.push(gamma);
            if chosen.is_none() {
                chosen = Some((gamma, data));
            }
        }
    }
    let Some((gamma, data)) = chosen else {
        return Ok(ReconstructionReport::fail(cert, Stage::ConditionStar, "no qualifying class: orbit condition fails"));
    };
    cert.chosen_class = Some(gamma);
    cert.k = Some(data.k);
    let v = (0..n).find(|&w| data.value[w] + 1 == data.k).expect("k rows hold k-1");
    cert.deleted_row = Some(v);
    cert.orbit_of_row = data.orbit.clone();

    let class = c.class(gamma);
    let mut vertex_of_row = vec![None; n];
    let mut used = vec![false; n - 1];
    for w in (0..n).filter(|&w| w != v) {
        let Some(id) = data.orbit[w] else {
            return Ok(ReconstructionReport::fail(cert, Stage::ConditionStar, format!("row {w} never touches the card")));
        };
        let x = c.graphlet(id).root;
        if std::mem::replace(&mut used[x], true) {
            return Ok(ReconstructionReport::fail(cert, Stage::ConditionStar, format!("two rows map to card vertex {x}")));
        }
        vertex_of_row[w] = Some(x);
    }
    cert.vertex_of_row = vertex_of_row.clone();

    let degrees = match project_gdd(&block, n, 2, c) {
        Ok(p) => (0..n).map(|w| p.get(w, GraphletId(0))).collect::<Vec<u64>>(),
        Err(e) => return Ok(ReconstructionReport::fail(cert, Stage::Degrees, e.to_string())),
    };
    if d.min_size() == 2 && (0..n).any(|w| d.get(w, GraphletId(0)) != degrees[w]) {
        return Ok(ReconstructionReport::fail(cert, Stage::Degrees, "projected degrees disagree with the edge column"));
    }

    let mut h = Graph::new(n);
    let rows: Vec<usize> = (0..n).filter(|&w| w != v).collect();
    for (a, &wa) in rows.iter().enumerate() {
        for &wb in &rows[a + 1..] {
            if class.graph.has_edge(vertex_of_row[wa].unwrap(), vertex_of_row[wb].unwrap()) {
                h.add_edge(wa, wb);
            }
        }
    }
    for &w in &rows {
        let card_degree = class.graph.degree(vertex_of_row[w].unwrap()) as u64;
        match degrees[w] {
            x if x == card_degree => {}
            x if x == card_degree + 1 => h.add_edge(v, w),
            x => {
                return Ok(ReconstructionReport::fail(
                    cert,
                    Stage::Degrees,
                    format!("row {w} has degree {x} but its card vertex has degree {card_degree}"),
                ))
            }
        }
    }
    if compute_gdd_sizes(&h, d.min_size(), d.max_size(), c)? != *d {
        return Ok(ReconstructionReport::fail(cert, Stage::Verification, "rebuilt graph does not reproduce the gdd"));
    }
    Ok(ReconstructionReport {
        graph: Some(h),
        certificate: cert,
        failure: None,
    })
}

/// Hypotheses of the asymmetric reconstruction checked on the graph itself.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HypothesisScan {
    pub two_connected: bool,
    /// Classes of rigid connected cards, with the vertices producing them.
    pub rigid_cards: BTreeMap<usize, Vec<usize>>,
    /// Rigid card classes satisfying the orbit condition.
    pub qualifying_classes: Vec<usize>,
    /// Qualifying classes whose deletion vertices are pairwise twins.
    pub twin_classes: Vec<usize>,
}

impl HypothesisScan {
    pub fn accepted(&self) -> bool {
        self.two_connected && !self.qualifying_classes.is_empty()
    }

    pub fn rigid_classes(&self) -> Vec<usize> {
        self.rigid_cards.keys().copied().collect()
    }
}

/// Graph-side oracle for the asymmetric reconstruction hypotheses.
pub fn hypothesis_scan(h: &Graph, c: &Catalog) -> Result<HypothesisScan> {
    let n = h.order();
    if n < 3 || n - 1 > c.max_size() {
        return Err(Error::SizeBound(format!("cards of a {n}-vertex graph exceed catalog size {}", c.max_size())));
    }
    let two_connected = h.is_connected() && h.articulation_points().is_empty();
    let mut rigid_cards: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..n {
        let card = h.delete_vertex(v);
        if card.is_connected() && is_rigid(&card) {
            rigid_cards.entry(c.classify(&card)?).or_default().push(v);
        }
    }
    let mut qualifying_classes = Vec::new();
    let mut twin_classes = Vec::new();
    for (&gamma, vs) in &rigid_cards {
        let consistent = (0..n).all(|w| {
            let codes: BTreeSet<CanonicalCode> = vs
                .iter()
                .filter(|&&x| x != w)
                .map(|&x| rooted_code(&h.delete_vertex(x), if w > x { w - 1 } else { w }))
                .collect();
            codes.len() <= 1
        });
        if consistent {
            qualifying_classes.push(gamma);
            let nbrs = |x: usize| h.row(x);
            if vs.len() >= 2 && vs.iter().all(|&x| nbrs(x) == nbrs(vs[0])) {
                twin_classes.push(gamma);
            }
        }
    }
    Ok(HypothesisScan {
        two_connected,
        rigid_cards,
        qualifying_classes,
        twin_classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_decks() {
        let c = Catalog::build(4).unwrap();
        for (g, card) in [
            (Graph::cycle(4), Graph::path(3)),
            (Graph::complete(4), Graph::complete(3)),
            (Graph::cycle(5), Graph::path(4)),
        ] {
            let n = g.order();
            let d = compute_gdd(&g, n - 1, &c).unwrap();
            let deck = deck_from_gdd(&d, n, &c).unwrap();
            assert_eq!(deck.cards.len(), 1);
            assert_eq!(deck.cards[&canonical_code(&card)], n as u64);
            assert_eq!(deck, Deck::of_graph(&g));
        }
    }

    #[test]
    fn path_and_star_trees() {
        let c = Catalog::build(4).unwrap();
        for t in [Graph::path(4), Graph::star(5), Graph::path(5), Graph::path(3)] {
            let n = t.order();
            let d = compute_gdd(&t, n - 1, &c).unwrap();
            let r = reconstruct_tree(&d, n, &c).unwrap();
            assert_eq!(canonical_code(&r), canonical_code(&t));
        }
    }

    #[test]
    fn cycle_has_no_rigid_card() {
        let c = Catalog::build(5).unwrap();
        let d = compute_gdd(&Graph::cycle(6), 5, &c).unwrap();
        let r = reconstruct_asymmetric(&d, 6, &c).unwrap();
        assert_eq!(r.failure.unwrap().stage, Stage::Rigidity);
    }
}
