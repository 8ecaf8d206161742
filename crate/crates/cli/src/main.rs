//! `graphlet`: reproducible experiments on graphlet degree distributions.

mod cache;
mod commands;
mod error;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(name = "graphlet", version, about = "Graphlet degree distributions: counting, connectivity, reconstruction")]
pub struct Cli {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true, value_name = "N")]
    pub jobs: Option<usize>,
    /// Record wall time in the manifest.
    #[arg(long, global = true)]
    pub timing: bool,
    /// Catalog cache directory (default: $GRAPHLET_CATALOG_DIR, else no cache).
    #[arg(long, global = true, value_name = "DIR")]
    pub catalog_dir: Option<PathBuf>,
    /// Write the artifact here instead of standard output.
    #[arg(long, short, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Graphlet degree matrix of each input graph.
    Gdd(GddArgs),
    /// Induced subgraph counts, or a search for graphs they fail to separate.
    Motifs(MotifsArgs),
    /// Vertex connectivity verdict from a single gdd block.
    Connectivity(ConnectivityArgs),
    /// Vertex-deleted subgraphs read off a gdd.
    Deck(MatrixArgs),
    /// Smaller graphlet counts projected from the size-(n-k+1) block.
    Project(ProjectArgs),
    /// Rebuild a tree from its gdd.
    ReconstructTree(MatrixArgs),
    /// Rebuild a 2-connected graph with a rigid card from its gdd.
    ReconstructAsym(MatrixArgs),
    /// Necessary conditions on a size-2/3 count matrix, or local identities on graphs.
    CheckGds3(Gds3Args),
    /// Decide whether a size-2/3 count matrix comes from a graph.
    DecideGds3(DecideArgs),
    /// Triangle/fork pair whose far path ends share all counts.
    SameGdsPair(PairArgs),
    /// Exhaustive search for graphs sharing a vertex row or a whole matrix.
    CollisionSearch(CollisionArgs),
    /// Check the asymmetric reconstruction hypotheses directly on graphs.
    ScanAsymHypotheses(GraphInput),
    /// Graphlet catalog operations.
    #[command(subcommand)]
    Catalog(CatalogCommand),
}

#[derive(Args, Debug, Serialize)]
pub struct GraphInput {
    /// Newline-delimited graph6 file, or `-` for standard input.
    #[arg(long = "in", value_name = "FILE")]
    pub input: String,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Args, Debug, Serialize)]
pub struct GddArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graphs: GraphInput,
    #[arg(long, default_value_t = 2)]
    pub min_size: usize,
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Label columns with standard orbit numbers (sizes up to 5 only).
    #[arg(long)]
    pub przulj: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct MotifsArgs {
    /// Graphs to count in.
    #[arg(long = "in", value_name = "FILE", required_unless_present = "find_pair", conflicts_with = "find_pair")]
    pub input: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub max_size: usize,
    /// Search all connected graphs on N vertices for equal counts with different gdds.
    #[arg(long, value_name = "N")]
    pub find_pair: Option<usize>,
}

/// A gdd given either as a graph (computed here) or as a CSV matrix.
#[derive(Args, Debug, Serialize)]
#[group(required = true, multiple = false)]
pub struct MatrixSource {
    /// Graph6 file holding one graph.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<String>,
    /// Gdd CSV as written by `gdd`.
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct MatrixArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: MatrixSource,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Args, Debug, Serialize)]
pub struct ConnectivityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: MatrixSource,
    /// Test k-connectivity; 2 also locates a unique articulation point.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Args, Debug, Serialize)]
pub struct ProjectArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub source: MatrixSource,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
}

#[derive(Args, Debug, Serialize)]
#[group(required = true, multiple = false)]
pub struct Gds3Args {
    /// Count matrix CSV: edge, P3 end, triangle (optionally with P3 middle).
    #[arg(long, value_name = "FILE")]
    pub matrix: Option<String>,
    /// Graph6 graphs whose engine counts are checked against local identities.
    #[arg(long = "in", value_name = "FILE")]
    pub input: Option<String>,
}

#[derive(Args, Debug, Serialize)]
pub struct DecideArgs {
    #[arg(long, value_name = "FILE")]
    pub matrix: String,
}

#[derive(Args, Debug, Serialize)]
pub struct PairArgs {
    #[arg(long)]
    pub n: usize,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    VertexGds,
    WholeGdd,
}

#[derive(Args, Debug, Serialize)]
pub struct CollisionArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value_t = Mode::VertexGds)]
    pub mode: Mode,
    /// Largest graphlet size compared (default n-1).
    #[arg(long)]
    pub max_size: Option<usize>,
    #[arg(long)]
    pub include_disconnected: bool,
}

#[derive(Subcommand, Debug)]
pub enum CatalogCommand {
    /// Write the catalog of graphlets up to a size as JSON.
    Export(ExportArgs),
}

#[derive(Args, Debug, Serialize)]
pub struct ExportArgs {
    #[arg(long)]
    pub max_size: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            let err = CliError::usage(first.trim_start_matches("error: "));
            eprintln!("{err}");
            return ExitCode::from(err.exit_code() as u8);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
