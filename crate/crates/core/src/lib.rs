//! Graphlet degree distributions of small graphs: exact counting, connectivity
//! inference, motif vectors, reconstruction, and exhaustive desk-scale
//! experiments on uniqueness and realizability.
//!
//! ```
//! use graphlet_core::{compute_gdd, Catalog, Graph};
//!
//! let catalog = Catalog::build(4).unwrap();
//! let d = compute_gdd(&Graph::cycle(5), 4, &catalog).unwrap();
//! assert_eq!(&d.row(0)[..4], &[2, 2, 1, 0]);
//! ```

pub mod canon;
pub mod catalog;
pub mod connectivity;
pub mod error;
pub mod feasibility;
pub mod gdd;
pub mod generate;
pub mod graph;
pub mod graph6;
pub mod motifs;
pub mod reconstruct;
pub mod uniqueness;

pub use canon::{automorphism_orbits, canonical_code, is_rigid, rooted_code, CanonicalCode, OrbitPartition};
pub use catalog::{Catalog, CatalogExport, GraphletId, MAX_CATALOG_SIZE};
pub use connectivity::{articulation_analysis, cut_core_vertices, k_connectivity_from_gdd, ConnectivityReport, Verdict};
pub use error::{Error, Result};
pub use feasibility::{decide_realizability, filter_candidate, verify_local_identities, Gds3Matrix};
pub use gdd::{compute_gdd, compute_gdd_sizes, deletion_delta, oracle_gds, project_gdd, DeletionDelta, GddMatrix};
pub use generate::{generate, Family};
pub use graph::Graph;
pub use graph6::{parse_graph6, parse_graph6_lines, write_graph6};
pub use motifs::{find_distinguishing_pair, motifs_from_gdd, MotifVector};
pub use reconstruct::{
    check_condition_star, deck_from_gdd, hypothesis_scan, reconstruct_asymmetric, reconstruct_tree, Deck,
    ReconstructionReport,
};
pub use uniqueness::{collision_search, same_gds_pair, CollisionRecord, SearchMode, SearchOptions};
