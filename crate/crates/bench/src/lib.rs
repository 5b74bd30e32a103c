//! Distance-count benchmark for k-fairest-neighbor search.
//!
//! For each corpus the runner builds one List-of-Clusters index, then for
//! every query pair and every `k = 1..=k_max` runs the combined kFN search
//! and the oracle-assisted double kNN baseline, averaging the number of
//! distance computations. Results are reported as speedups over a linear
//! scan.

pub mod config;
pub mod experiment;
pub mod table;

pub use config::{DatasetSpec, ExperimentConfig};
pub use experiment::{run_corpus, run_experiment, ExperimentReport, ResultRow};
pub use table::{emit_table, parse_csv, summary_line, TableFormat};
