use std::fs;
use std::io::{Read, Write};
use std::path::PathBuf;

use graphlet_core::connectivity::cut_core_report;
use graphlet_core::feasibility::{FilterOutcome, Realizability};
use graphlet_core::uniqueness::summarize;
use graphlet_core::{
    articulation_analysis, canonical_code, collision_search, compute_gdd, compute_gdd_sizes, deck_from_gdd, decide_realizability,
    filter_candidate, find_distinguishing_pair, hypothesis_scan, motifs_from_gdd, parse_graph6_lines, project_gdd,
    reconstruct_asymmetric, reconstruct_tree, same_gds_pair, verify_local_identities, write_graph6, Catalog,
    ConnectivityReport, Gds3Matrix, GddMatrix, Graph, GraphletId, SearchMode, SearchOptions, Verdict,
    MAX_CATALOG_SIZE,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cache::{CatalogFile, CatalogStore};
use crate::error::{CliError, CliResult};
use crate::manifest::Recorder;
use crate::{
    CatalogCommand, Cli, CollisionArgs, Command, ConnectivityArgs, DecideArgs, ExportArgs, Format, Gds3Args, GddArgs,
    GraphInput, MatrixArgs, MatrixSource, Mode, MotifsArgs, PairArgs, ProjectArgs, ReportFormat,
};

struct Ctx {
    rec: Recorder,
    store: CatalogStore,
    out: Option<PathBuf>,
}

/// Which part of a gdd a command consumes.
#[derive(Clone, Copy)]
enum Need {
    /// All sizes from 2 to n-1.
    Full,
    /// Only the size-(n-k+1) block.
    Block(usize),
}

fn flags<T: Serialize>(args: &T) -> Value {
    serde_json::to_value(args).unwrap_or(Value::Null)
}

pub fn run(cli: Cli) -> CliResult<()> {
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            return Err(CliError::usage("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .map_err(|e| CliError::usage(e.to_string()))?;
    }
    let (name, f) = match &cli.command {
        Command::Gdd(a) => ("gdd", flags(a)),
        Command::Motifs(a) => ("motifs", flags(a)),
        Command::Connectivity(a) => ("connectivity", flags(a)),
        Command::Deck(a) => ("deck", flags(a)),
        Command::Project(a) => ("project", flags(a)),
        Command::ReconstructTree(a) => ("reconstruct-tree", flags(a)),
        Command::ReconstructAsym(a) => ("reconstruct-asym", flags(a)),
        Command::CheckGds3(a) => ("check-gds3", flags(a)),
        Command::DecideGds3(a) => ("decide-gds3", flags(a)),
        Command::SameGdsPair(a) => ("same-gds-pair", flags(a)),
        Command::CollisionSearch(a) => ("collision-search", flags(a)),
        Command::ScanAsymHypotheses(a) => ("scan-asym-hypotheses", flags(a)),
        Command::Catalog(CatalogCommand::Export(a)) => ("catalog export", flags(a)),
    };
    let mut ctx = Ctx {
        rec: Recorder::new(name, f, cli.timing),
        store: CatalogStore::new(cli.catalog_dir),
        out: cli.out,
    };
    match &cli.command {
        Command::Gdd(a) => gdd(&mut ctx, a),
        Command::Motifs(a) => motifs(&mut ctx, a),
        Command::Connectivity(a) => connectivity(&mut ctx, a),
        Command::Deck(a) => deck(&mut ctx, a),
        Command::Project(a) => project(&mut ctx, a),
        Command::ReconstructTree(a) => reconstruct_tree_cmd(&mut ctx, a),
        Command::ReconstructAsym(a) => reconstruct_asym_cmd(&mut ctx, a),
        Command::CheckGds3(a) => check_gds3(&mut ctx, a),
        Command::DecideGds3(a) => decide_gds3(&mut ctx, a),
        Command::SameGdsPair(a) => same_pair(&mut ctx, a),
        Command::CollisionSearch(a) => collisions(&mut ctx, a),
        Command::ScanAsymHypotheses(a) => scan(&mut ctx, a),
        Command::Catalog(CatalogCommand::Export(a)) => export(&mut ctx, a),
    }
}

impl Ctx {
    fn read(&mut self, path: &str) -> CliResult<String> {
        let mut bytes = Vec::new();
        if path == "-" {
            std::io::stdin().read_to_end(&mut bytes)?;
        } else {
            bytes = fs::read(path).map_err(|e| CliError::input(format!("{path}: {e}")))?;
        }
        self.rec.input(path, &bytes);
        String::from_utf8(bytes).map_err(|_| CliError::input(format!("{path}: not UTF-8")))
    }

    fn graphs(&mut self, path: &str) -> CliResult<Vec<Graph>> {
        let graphs = parse_graph6_lines(&self.read(path)?)?;
        if graphs.is_empty() {
            return Err(CliError::input(format!("{path}: no graphs")));
        }
        Ok(graphs)
    }

    fn one_graph(&mut self, path: &str) -> CliResult<Graph> {
        let mut graphs = self.graphs(path)?;
        if graphs.len() != 1 {
            return Err(CliError::input(format!("{path}: expected one graph, found {}", graphs.len())));
        }
        Ok(graphs.remove(0))
    }

    fn catalog(&mut self, max_size: usize) -> CliResult<&'static Catalog> {
        if !(2..=MAX_CATALOG_SIZE).contains(&max_size) {
            return Err(CliError::input(format!(
                "graphlet size {max_size} outside the supported range 2..={MAX_CATALOG_SIZE}"
            )));
        }
        self.rec.catalog(max_size);
        let manifest = self.rec.finish();
        self.store.get(max_size, || manifest)
    }

    /// Smallest catalog containing every column named in a gdd CSV header.
    fn catalog_for_header(&mut self, text: &str) -> CliResult<&'static Catalog> {
        let header = text
            .lines()
            .find(|l| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
            .ok_or_else(|| CliError::input("empty matrix"))?;
        let mut max_id = 0;
        for col in header.split(',').skip(1).map(str::trim) {
            if col.starts_with('o') {
                return self.catalog(5);
            }
            let id: usize = col
                .strip_prefix('g')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| CliError::input(format!("bad column {col}")))?;
            max_id = max_id.max(id);
        }
        for k in 2..=MAX_CATALOG_SIZE {
            let c = self.catalog(k)?;
            if c.num_graphlets() > max_id {
                return Ok(c);
            }
        }
        Err(CliError::input(format!("column g{max_id} exceeds every supported catalog")))
    }

    fn gdd(&mut self, src: &MatrixSource, need: Need) -> CliResult<(GddMatrix, &'static Catalog)> {
        if let Some(path) = &src.input {
            let g = self.one_graph(path)?;
            let n = g.order();
            return match need {
                Need::Full => {
                    let c = self.catalog(n.saturating_sub(1))?;
                    Ok((compute_gdd(&g, n - 1, c)?, c))
                }
                Need::Block(k) => {
                    let size = block_size(n, k)?;
                    let c = self.catalog(size)?;
                    Ok((compute_gdd_sizes(&g, size, size, c)?, c))
                }
            };
        }
        let path = src.matrix.as_deref().expect("clap requires one source");
        let text = self.read(path)?;
        let c = self.catalog_for_header(&text)?;
        let d = GddMatrix::from_csv(&text, c)?;
        match need {
            Need::Full => Ok((d, c)),
            Need::Block(k) => {
                let size = block_size(d.n(), k)?;
                Ok((d.block(size, c)?, c))
            }
        }
    }

    fn emit(&self, body: &str) -> CliResult<()> {
        match &self.out {
            Some(path) => fs::write(path, body).map_err(|e| CliError::input(format!("{}: {e}", path.display()))),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(body.as_bytes())?;
                out.flush()?;
                Ok(())
            }
        }
    }

    fn emit_json(&self, mut body: Value) -> CliResult<()> {
        body.as_object_mut()
            .expect("artifacts are objects")
            .insert("manifest".into(), serde_json::to_value(self.rec.finish())?);
        self.emit(&(serde_json::to_string_pretty(&body)? + "\n"))
    }

    fn manifest_line(&self) -> CliResult<String> {
        Ok(format!("# manifest {}\n", serde_json::to_string(&self.rec.finish())?))
    }
}

fn block_size(n: usize, k: usize) -> CliResult<usize> {
    if k < 2 || k + 1 > n {
        return Err(CliError::input(format!("k = {k} needs 2 <= k <= n-1 (n = {n})")));
    }
    Ok(n - k + 1)
}

fn column_names(d: &GddMatrix, c: &Catalog, przulj: bool) -> Vec<String> {
    d.cols()
        .map(|i| match przulj.then(|| c.przulj_id(GraphletId(i))).flatten() {
            Some(o) => format!("o{o}"),
            None => format!("g{i}"),
        })
        .collect()
}

fn gdd(ctx: &mut Ctx, a: &GddArgs) -> CliResult<()> {
    if a.przulj && a.max_size > 5 {
        return Err(CliError::usage("--przulj needs --max-size at most 5"));
    }
    let graphs = ctx.graphs(&a.graphs.input)?;
    // Only the size-5 catalog carries the standard orbit numbering.
    let c = ctx.catalog(if a.przulj { 5 } else { a.max_size.max(2) })?;
    let mut tables = Vec::new();
    for g in &graphs {
        tables.push((g, compute_gdd_sizes(g, a.min_size, a.max_size, c)?));
    }
    match a.format {
        Format::Csv => {
            let mut out = ctx.manifest_line()?;
            for (i, (g, d)) in tables.iter().enumerate() {
                if graphs.len() > 1 {
                    out += &format!("# graph {i} {}\n", write_graph6(g));
                }
                out += &d.to_csv(c, a.przulj)?;
            }
            ctx.emit(&out)
        }
        Format::Json => {
            let results: Vec<Value> = tables
                .iter()
                .map(|(g, d)| {
                    json!({
                        "graph": write_graph6(g),
                        "code": canonical_code(g),
                        "min_size": d.min_size(),
                        "max_size": d.max_size(),
                        "columns": column_names(d, c, a.przulj),
                        "rows": d.rows().collect::<Vec<_>>(),
                    })
                })
                .collect();
            ctx.emit_json(json!({ "results": results }))
        }
    }
}

fn motifs(ctx: &mut Ctx, a: &MotifsArgs) -> CliResult<()> {
    let c = ctx.catalog(a.max_size)?;
    if let Some(n) = a.find_pair {
        let pair = find_distinguishing_pair(n, a.max_size, c)?;
        let found = pair.is_some();
        ctx.emit_json(json!({ "pair": pair }))?;
        if !found {
            return Err(CliError::domain(format!(
                "every motif vector on {n} vertices determines the gdd row multiset"
            )));
        }
        return Ok(());
    }
    let path = a.input.as_deref().expect("clap requires --in");
    let mut results = Vec::new();
    for g in ctx.graphs(path)? {
        let m = motifs_from_gdd(&compute_gdd(&g, a.max_size, c)?, c)?;
        results.push(json!({ "graph": write_graph6(&g), "motifs": m }));
    }
    ctx.emit_json(json!({ "results": results }))
}

fn verdict_line(r: &ConnectivityReport) -> String {
    match &r.verdict {
        Verdict::KConnected => format!("{}-connected", r.k),
        Verdict::Articulation { vertex } => format!("unique articulation: vertex {vertex}"),
        Verdict::MultipleArticulations => "multiple articulations".into(),
        Verdict::CutCore { vertices } if vertices.is_empty() => "cut core: none".into(),
        Verdict::CutCore { vertices } => {
            let vs: Vec<String> = vertices.iter().map(usize::to_string).collect();
            format!("cut core: vertices {}", vs.join(" "))
        }
    }
}

fn connectivity(ctx: &mut Ctx, a: &ConnectivityArgs) -> CliResult<()> {
    let (d, _) = ctx.gdd(&a.source, Need::Block(a.k))?;
    let report = match a.k {
        2 => articulation_analysis(&d, d.n())?,
        k => cut_core_report(&d, d.n(), k)?,
    };
    match a.format {
        ReportFormat::Text => {
            let body = ctx.manifest_line()? + &verdict_line(&report) + "\n";
            ctx.emit(&body)
        }
        ReportFormat::Json => ctx.emit_json(json!({ "report": report })),
    }
}

fn deck(ctx: &mut Ctx, a: &MatrixArgs) -> CliResult<()> {
    let (d, c) = ctx.gdd(&a.source, Need::Full)?;
    let deck = deck_from_gdd(&d, d.n(), c)?;
    let cards: Vec<Value> = deck
        .cards
        .iter()
        .map(|(code, count)| json!({ "card": write_graph6(&code.to_graph()), "count": count }))
        .collect();
    ctx.emit_json(json!({ "n": deck.n, "cards": cards }))
}

fn project(ctx: &mut Ctx, a: &ProjectArgs) -> CliResult<()> {
    let (d, c) = ctx.gdd(&a.source, Need::Block(a.k))?;
    let p = project_gdd(&d, d.n(), a.k, c)?;
    let body = ctx.manifest_line()? + &p.to_csv(c, false)?;
    ctx.emit(&body)
}

fn reconstruct_tree_cmd(ctx: &mut Ctx, a: &MatrixArgs) -> CliResult<()> {
    let (d, c) = ctx.gdd(&a.source, Need::Full)?;
    let t = reconstruct_tree(&d, d.n(), c)?;
    ctx.emit_json(json!({ "graph": write_graph6(&t) }))
}

fn reconstruct_asym_cmd(ctx: &mut Ctx, a: &MatrixArgs) -> CliResult<()> {
    let (d, c) = ctx.gdd(&a.source, Need::Full)?;
    let report = reconstruct_asymmetric(&d, d.n(), c)?;
    ctx.emit_json(json!({ "report": report }))?;
    match report.failure {
        Some(f) => Err(CliError::domain(format!("hypotheses not met at {:?}: {}", f.stage, f.reason))),
        None => Ok(()),
    }
}

fn check_gds3(ctx: &mut Ctx, a: &Gds3Args) -> CliResult<()> {
    if let Some(path) = &a.matrix {
        let m = Gds3Matrix::from_csv(&ctx.read(path)?)?;
        let outcome = filter_candidate(&m);
        ctx.emit_json(json!({ "outcome": outcome }))?;
        return match outcome {
            FilterOutcome::Pass => Ok(()),
            FilterOutcome::Fail(reason) => Err(CliError::domain(format!("not realizable: {reason}"))),
        };
    }
    let path = a.input.as_deref().expect("clap requires one source");
    let mut results = Vec::new();
    let mut failures = 0;
    for g in ctx.graphs(path)? {
        let report = verify_local_identities(&g)?;
        failures += !report.passed() as usize;
        results.push(json!({ "graph": write_graph6(&g), "passed": report.passed(), "report": report }));
    }
    ctx.emit_json(json!({ "results": results }))?;
    match failures {
        0 => Ok(()),
        f => Err(CliError::domain(format!("{f} graphs violate the local identities"))),
    }
}

fn decide_gds3(ctx: &mut Ctx, a: &DecideArgs) -> CliResult<()> {
    let m = Gds3Matrix::from_csv(&ctx.read(&a.matrix)?)?;
    let result = decide_realizability(&m)?;
    ctx.emit_json(json!({ "result": result }))?;
    match result {
        Realizability::Witness { .. } => Ok(()),
        Realizability::No { reason } => Err(CliError::domain(format!("not realizable: {reason}"))),
    }
}

fn same_pair(ctx: &mut Ctx, a: &PairArgs) -> CliResult<()> {
    let pair = same_gds_pair(a.n)?;
    ctx.emit_json(json!({ "pair": pair }))
}

fn collisions(ctx: &mut Ctx, a: &CollisionArgs) -> CliResult<()> {
    let opts = SearchOptions {
        n: a.n,
        mode: match a.mode {
            Mode::VertexGds => SearchMode::VertexGds,
            Mode::WholeGdd => SearchMode::WholeGdd,
        },
        max_size: a.max_size.unwrap_or(a.n.saturating_sub(1)),
        include_disconnected: a.include_disconnected,
    };
    let records = collision_search(&opts)?;
    ctx.rec.catalog(opts.max_size);
    let mut out = serde_json::to_string(&json!({ "manifest": ctx.rec.finish(), "summary": summarize(&records) }))? + "\n";
    for r in &records {
        out += &serde_json::to_string(&json!({
            "first": write_graph6(&r.first.to_graph()),
            "second": write_graph6(&r.second.to_graph()),
            "first_vertex": r.first_vertex,
            "second_vertex": r.second_vertex,
            "rows": r.rows,
            "triangle_fork": r.is_triangle_fork_instance,
        }))?;
        out.push('\n');
    }
    ctx.emit(&out)
}

fn scan(ctx: &mut Ctx, a: &GraphInput) -> CliResult<()> {
    let graphs = ctx.graphs(&a.input)?;
    let mut lines = Vec::new();
    for g in &graphs {
        let c = ctx.catalog(g.order().saturating_sub(1))?;
        let s = hypothesis_scan(g, c)?;
        lines.push(serde_json::to_string(&json!({ "graph": write_graph6(g), "accepted": s.accepted(), "scan": s }))?);
    }
    let mut out = serde_json::to_string(&json!({ "manifest": ctx.rec.finish() }))? + "\n";
    for l in lines {
        out += &l;
        out.push('\n');
    }
    ctx.emit(&out)
}

fn export(ctx: &mut Ctx, a: &ExportArgs) -> CliResult<()> {
    let c = ctx.catalog(a.max_size)?;
    let export = c.export();
    let body = serde_json::to_string(&CatalogFile {
        manifest: ctx.rec.finish(),
        catalog: &export,
    })?;
    ctx.emit(&(body + "\n"))
}
