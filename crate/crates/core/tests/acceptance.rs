//! Exit gate: each criterion runs as its own check and prints one
//! `criterion N ... PASS|FAIL` line. The test fails if any criterion fails.

mod common;

use std::collections::HashMap;
use std::time::{Duration, Instant};

use graphlet_core::feasibility::{FilterOutcome, Realizability};
use graphlet_core::{
    articulation_analysis, canonical_code, collision_search, compute_gdd, compute_gdd_sizes, deck_from_gdd,
    decide_realizability, filter_candidate, find_distinguishing_pair, generate, hypothesis_scan, k_connectivity_from_gdd,
    motifs_from_gdd, oracle_gds, project_gdd, reconstruct_asymmetric, reconstruct_tree, same_gds_pair, verify_local_identities,
    Catalog, Deck, Family, Gds3Matrix, Graph, GraphletId, SearchMode, SearchOptions, Verdict,
};

use common::*;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration) -> std::result::Result<(), String> {
    ensure(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"))
}

fn binom(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn connected_up_to(n: usize) -> impl Iterator<Item = Graph> {
    (2..=n).flat_map(|k| generate(k, Family::Connected))
}

fn c1_oracle_equivalence() -> Check {
    let c = Catalog::shared(5).map_err(|e| e.to_string())?;
    let start = Instant::now();
    let (mut classes, mut compared) = (0, 0);
    for g in (1..=6).flat_map(|k| generate(k, Family::Connected)) {
        let n = g.order();
        classes += 1;
        // One and two vertices have no graphlet of size at most n-1 >= 2.
        if n < 3 {
            continue;
        }
        compared += 1;
        let d = compute_gdd(&g, n - 1, c).map_err(|e| e.to_string())?;
        for v in 0..n {
            let o = oracle_gds(&g, v, n - 1, c).map_err(|e| e.to_string())?;
            ensure(d.row(v) == o.as_slice(), || format!("row {v} of {}", graphlet_core::write_graph6(&g)))?;
        }
    }
    ensure(classes == 143, || format!("{classes} connected classes, expected 143"))?;
    within(start.elapsed(), Duration::from_secs(60))?;
    Ok(format!("{classes} classes, {compared} with graphlets"))
}

fn single_threaded_c1() -> Check {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().map_err(|e| e.to_string())?;
    pool.install(c1_oracle_equivalence)
}

fn c2_bounds() -> Check {
    let c = Catalog::shared(6).map_err(|e| e.to_string())?;
    for n in 3..=7 {
        let d = compute_gdd(&Graph::complete(n), n - 1, c).map_err(|e| e.to_string())?;
        for v in 0..n {
            for id in d.cols() {
                let gl = c.graphlet(GraphletId(id));
                let class = c.class(gl.gamma);
                let bound = binom(n as u64 - 1, class.size as u64 - 1);
                let expected = if class.edges == class.size * (class.size - 1) / 2 { bound } else { 0 };
                ensure(d.get(v, GraphletId(id)) == expected, || format!("K{n} graphlet {id}"))?;
            }
        }
        for g in [Graph::path(n), Graph::cycle(n)] {
            let m = compute_gdd(&g, n - 1, c).map_err(|e| e.to_string())?.max_entry();
            ensure(m == 2, || format!("max entry {m} on a {n}-vertex path or cycle"))?;
        }
    }
    Ok("n = 3..7".into())
}

fn block(g: &Graph, k: usize, c: &Catalog) -> graphlet_core::GddMatrix {
    let s = g.order() - k + 1;
    compute_gdd_sizes(g, s, s, c).unwrap()
}

fn c3_proposition() -> Check {
    let c = Catalog::shared(6).map_err(|e| e.to_string())?;
    let mut checks = 0;
    for g in connected_up_to(7).filter(|g| g.order() >= 3) {
        let n = g.order();
        let kappa = brute_connectivity(&g);
        for k in 2..n {
            let ours = k_connectivity_from_gdd(&block(&g, k, c), n, k).map_err(|e| e.to_string())?;
            ensure(ours == (kappa >= k), || format!("{} at k = {k}", graphlet_core::write_graph6(&g)))?;
            checks += 1;
        }
    }
    Ok(format!("{checks} (graph, k) pairs, 0 mismatches"))
}

fn c4_articulations() -> Check {
    let c = Catalog::shared(6).map_err(|e| e.to_string())?;
    let mut tally = [0usize; 3];
    for g in connected_up_to(7).filter(|g| g.order() >= 3) {
        let n = g.order();
        let report = articulation_analysis(&block(&g, 2, c), n).map_err(|e| e.to_string())?;
        let p = report.full_vertices.len();
        ensure(p <= 1 || p == n, || format!("{p} full vertices"))?;
        let cut = brute_articulations(&g);
        let expected = match cut.len() {
            0 => Verdict::KConnected,
            1 => Verdict::Articulation { vertex: cut[0] },
            _ => Verdict::MultipleArticulations,
        };
        ensure(report.verdict == expected, || graphlet_core::write_graph6(&g))?;
        tally[cut.len().min(2)] += 1;
    }
    Ok(format!("{} 2-connected, {} unique, {} multiple", tally[0], tally[1], tally[2]))
}

fn c5_projection() -> Check {
    let c = Catalog::shared(6).map_err(|e| e.to_string())?;
    let (mut two, mut three) = (0, 0);
    for g in connected_up_to(7).filter(|g| g.order() >= 4) {
        let n = g.order();
        let kappa = g.vertex_connectivity();
        for k in [2, 3] {
            if kappa < k || k > n - 2 {
                continue;
            }
            let src = compute_gdd_sizes(&g, n - k + 1, n - k + 1, c).map_err(|e| e.to_string())?;
            let projected = project_gdd(&src, n, k, c).map_err(|e| e.to_string())?;
            let direct = compute_gdd(&g, n - k, c).map_err(|e| e.to_string())?;
            ensure(projected == direct, || format!("{} at k = {k}", graphlet_core::write_graph6(&g)))?;
            if k == 2 {
                two += 1
            } else {
                three += 1
            }
        }
    }
    Ok(format!("{two} 2-connected, {three} 3-connected"))
}

fn c6_decks() -> Check {
    let c = Catalog::shared(6).map_err(|e| e.to_string())?;
    let mut count = 0;
    for g in connected_up_to(7).filter(|g| g.order() >= 3 && g.vertex_connectivity() >= 2) {
        let n = g.order();
        let deck = deck_from_gdd(&compute_gdd(&g, n - 1, c).map_err(|e| e.to_string())?, n, c).map_err(|e| e.to_string())?;
        ensure(deck == Deck::of_graph(&g), || graphlet_core::write_graph6(&g))?;
        let mut brute: HashMap<Vec<bool>, u64> = HashMap::new();
        for v in 0..n {
            *brute.entry(brute_form(&g.delete_vertex(v))).or_default() += 1;
        }
        let mut a: Vec<u64> = deck.cards.values().copied().collect();
        let mut b: Vec<u64> = brute.values().copied().collect();
        a.sort();
        b.sort();
        ensure(a == b, || graphlet_core::write_graph6(&g))?;
        count += 1;
    }
    Ok(format!("{count} graphs"))
}

fn c7_trees() -> Check {
    let start = Instant::now();
    let c = Catalog::shared(8).map_err(|e| e.to_string())?;
    let mut count = 0;
    for n in 3..=9 {
        for t in generate(n, Family::Trees) {
            let d = compute_gdd(&t, n - 1, c).map_err(|e| e.to_string())?;
            let h = reconstruct_tree(&d, n, c).map_err(|e| e.to_string())?;
            ensure(canonical_code(&h) == canonical_code(&t), || graphlet_core::write_graph6(&t))?;
            count += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(300))?;
    Ok(format!("{count} trees"))
}

fn c8_asymmetric() -> Check {
    let c6 = Catalog::shared(6).map_err(|e| e.to_string())?;
    let mut accepted = 0;
    for g in generate(7, Family::Connected).into_iter().filter(|g| g.vertex_connectivity() >= 2) {
        let scan = hypothesis_scan(&g, c6).map_err(|e| e.to_string())?;
        let report = reconstruct_asymmetric(&compute_gdd(&g, 6, c6).map_err(|e| e.to_string())?, 7, c6)
            .map_err(|e| e.to_string())?;
        let cert = &report.certificate;
        ensure(cert.two_connected == scan.two_connected, || "connectivity disagrees".into())?;
        ensure(cert.rigid_classes == scan.rigid_classes(), || "rigid classes disagree".into())?;
        ensure(cert.qualifying_classes == scan.qualifying_classes, || "qualifying classes disagree".into())?;
        if scan.accepted() {
            let h = report.graph.ok_or_else(|| format!("no graph for {}", graphlet_core::write_graph6(&g)))?;
            ensure(canonical_code(&h) == canonical_code(&g), || graphlet_core::write_graph6(&g))?;
            accepted += 1;
        }
    }
    ensure(accepted > 0, || "no 7-vertex instance".into())?;
    let c7 = Catalog::shared(7).map_err(|e| e.to_string())?;
    let mut r = rng(2024);
    let mut sampled = 0;
    while sampled < 100 {
        let g = random_connected(&mut r, 8, 0.5);
        if g.vertex_connectivity() < 2 || !hypothesis_scan(&g, c7).map_err(|e| e.to_string())?.accepted() {
            continue;
        }
        let d = compute_gdd(&g, 7, c7).map_err(|e| e.to_string())?;
        let report = reconstruct_asymmetric(&d, 8, c7).map_err(|e| e.to_string())?;
        let h = report.graph.ok_or_else(|| format!("no graph for {}", graphlet_core::write_graph6(&g)))?;
        ensure(canonical_code(&h) == canonical_code(&g), || graphlet_core::write_graph6(&g))?;
        sampled += 1;
    }
    Ok(format!("{accepted} of 7 vertices, {sampled} sampled of 8"))
}

fn c9_collisions() -> Check {
    let start = Instant::now();
    for n in 4..=6 {
        let opts = SearchOptions {
            n,
            mode: SearchMode::VertexGds,
            max_size: n - 1,
            include_disconnected: false,
        };
        let found = collision_search(&opts).map_err(|e| e.to_string())?;
        let p = same_gds_pair(n).map_err(|e| e.to_string())?;
        let pair = [canonical_code(&p.triangle), canonical_code(&p.fork)];
        ensure(found.len() == 1, || format!("{} collisions at n = {n}", found.len()))?;
        ensure(found[0].is_triangle_fork_instance, || format!("non triangle/fork collision at n = {n}"))?;
        ensure(pair.contains(&found[0].first) && pair.contains(&found[0].second), || "wrong pair".into())?;
    }
    within(start.elapsed(), Duration::from_secs(600))?;
    Ok("one triangle/fork collision for each n = 4..6".into())
}

fn c10_motifs() -> Check {
    let c5 = Catalog::shared(5).map_err(|e| e.to_string())?;
    let forms = class_forms(c5);
    for g in connected_up_to(6).filter(|g| g.order() >= 3) {
        let n = g.order();
        let m = motifs_from_gdd(&compute_gdd(&g, n - 1, c5).map_err(|e| e.to_string())?, c5).map_err(|e| e.to_string())?;
        let census = induced_census(&g, n - 1);
        for gamma in m.classes.clone() {
            let want = census.get(&forms[gamma]).copied().unwrap_or(0);
            ensure(m.get(gamma) == want, || format!("class {gamma} of {}", graphlet_core::write_graph6(&g)))?;
        }
    }
    let c4 = Catalog::shared(4).map_err(|e| e.to_string())?;
    let pair = find_distinguishing_pair(8, 4, c4).map_err(|e| e.to_string())?.ok_or("no pair at n = 8")?;
    let d1 = compute_gdd(&pair.first, 4, c4).map_err(|e| e.to_string())?;
    let d2 = compute_gdd(&pair.second, 4, c4).map_err(|e| e.to_string())?;
    ensure(motifs_from_gdd(&d1, c4).ok() == motifs_from_gdd(&d2, c4).ok(), || "motifs differ".into())?;
    ensure(d1.sorted_rows() != d2.sorted_rows(), || "row multisets agree".into())?;
    Ok(format!(
        "pair {} / {}",
        graphlet_core::write_graph6(&pair.first),
        graphlet_core::write_graph6(&pair.second)
    ))
}

fn c11_feasibility() -> Check {
    for n in 2..=7 {
        for g in generate(n, Family::All) {
            ensure(verify_local_identities(&g).map_err(|e| e.to_string())?.passed(), || {
                graphlet_core::write_graph6(&g)
            })?;
        }
    }
    let mut r = rng(99);
    for i in 0..1000 {
        let g = random_graph(&mut r, 2 + i % 15, 0.35);
        ensure(verify_local_identities(&g).map_err(|e| e.to_string())?.passed(), || graphlet_core::write_graph6(&g))?;
    }
    let mut decided = 0;
    for g in connected_up_to(6) {
        let m = Gds3Matrix::of_graph(&g);
        ensure(filter_candidate(&m) == FilterOutcome::Pass, || graphlet_core::write_graph6(&g))?;
        match decide_realizability(&m).map_err(|e| e.to_string())? {
            Realizability::Witness { graph } => {
                ensure(Gds3Matrix::of_graph(&graph).sorted_rows() == m.sorted_rows(), || "witness mismatch".into())?
            }
            Realizability::No { reason } => return Err(reason),
        }
        decided += 1;
    }
    Ok(format!("{decided} matrices realized"))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Check); 11] = [
        ("oracle equivalence", single_threaded_c1),
        ("count bounds", c2_bounds),
        ("k-connectivity", c3_proposition),
        ("articulation verdicts", c4_articulations),
        ("projection", c5_projection),
        ("decks", c6_decks),
        ("tree reconstruction", c7_trees),
        ("asymmetric reconstruction", c8_asymmetric),
        ("vertex collisions", c9_collisions),
        ("motifs", c10_motifs),
        ("gds3 feasibility", c11_feasibility),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name} ... PASS ({detail}; {secs:.2}s)", i + 1),
            Err(detail) => {
                println!("criterion {:>2} {name} ... FAIL ({detail}; {secs:.2}s)", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
