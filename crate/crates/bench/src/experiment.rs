use rayon::prelude::*;

use kfn_core::datasets::{
    clustered_with_queries, load_strings, load_vectors, make_corpus, uniform_with_queries,
    ClusteredSpec, ExperimentCorpus, QuerySource,
};
use kfn_core::{
    double_query_with, linear_scan_kfn, BuildConfig, Error, FnQuery, LcIndex, Result, SearchConfig,
};

use crate::config::{DatasetSpec, ExperimentConfig};

/// One line of the results table. Speedups are scan count divided by the
/// mean distance count; `double` is empty unless queries have two objects.
#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub label: String,
    pub dim: Option<usize>,
    pub scan: u64,
    pub double: Vec<f64>,
    pub combined: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct ExperimentReport {
    pub row: ResultRow,
    /// Mean combined distance count per `k` (index `k - 1`).
    pub combined_mean: Vec<f64>,
    pub double_mean: Vec<f64>,
    /// Raw counts, `[k - 1][query index]`.
    pub combined_counts: Vec<Vec<u64>>,
    pub double_counts: Vec<Vec<u64>>,
    pub build_distance_count: u64,
    pub clusters: usize,
}

pub fn load_corpus(config: &ExperimentConfig) -> Result<ExperimentCorpus> {
    let sources = config.n_pairs + 1;
    match &config.dataset {
        DatasetSpec::Uniform => {
            let (db, q) = uniform_with_queries(config.n, config.dim, sources, config.seed);
            make_corpus("Uniform", db, QuerySource::Generated(q), config.n_pairs)
        }
        DatasetSpec::Clustered => {
            let spec = ClusteredSpec {
                n_centers: config.n / config.per_cluster,
                per_cluster: config.per_cluster,
                dim: config.dim,
                sigma: config.sigma,
            };
            let (db, q) = clustered_with_queries(&spec, sources, config.seed)?;
            make_corpus("Clustered", db, QuerySource::Generated(q), config.n_pairs)
        }
        DatasetSpec::Vectors(path) => {
            let points = load_vectors(path, config.vector_format)?;
            make_corpus(file_label(path), points, QuerySource::FromDatabase, config.n_pairs)
        }
        DatasetSpec::Strings(path) => {
            let points = load_strings(path)?;
            make_corpus(file_label(path), points, QuerySource::FromDatabase, config.n_pairs)
        }
    }
}

fn file_label(path: &std::path::Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let corpus = load_corpus(config)?;
    run_corpus(corpus, config)
}

struct TupleCounts {
    combined: Vec<u64>,
    double: Vec<u64>,
}

/// Runs the protocol on an already loaded corpus.
pub fn run_corpus(corpus: ExperimentCorpus, config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let measure = config.measure()?;
    let m = measure.arity();
    let tuples = corpus.query_tuples(m);
    if tuples.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "not enough query objects for {m}-object queries"
        )));
    }
    let build = BuildConfig {
        bucket_size: config.bucket_size,
        center_rule: config.center_rule,
        seed: None,
    };
    let index = LcIndex::build(corpus.database, &build)?;
    let search = SearchConfig {
        containment: config.containment,
        fast_accept: false,
        reuse_center_distances: config.reuse_center_distances,
    };

    let first = FnQuery::new(tuples[0].clone(), measure.clone())?;
    let scan = linear_scan_kfn(index.points(), &first, 1)?.distance_count;

    let per_tuple: Vec<TupleCounts> = tuples
        .par_iter()
        .map(|objects| -> Result<TupleCounts> {
            let query = FnQuery::new(objects.clone(), measure.clone())?;
            let mut counts = TupleCounts {
                combined: Vec::with_capacity(config.k_max),
                double: Vec::with_capacity(config.k_max),
            };
            for k in 1..=config.k_max {
                let out = index.kfn_search_with(&query, k, &search)?;
                if config.verify {
                    let truth = linear_scan_kfn(index.points(), &query, k)?;
                    if truth.ids() != out.ids() {
                        return Err(Error::Invariant(format!(
                            "combined search disagrees with the scan at k = {k}"
                        )));
                    }
                }
                counts.combined.push(out.distance_count);
                if m == 2 {
                    let d = double_query_with(&index, &objects[0], &objects[1], &measure, k, &search)?;
                    counts.double.push(d.outcome.distance_count);
                }
            }
            Ok(counts)
        })
        .collect::<Result<_>>()?;

    let transpose = |pick: fn(&TupleCounts) -> &Vec<u64>| -> Vec<Vec<u64>> {
        if pick(&per_tuple[0]).is_empty() {
            return Vec::new();
        }
        (0..config.k_max)
            .map(|k| per_tuple.iter().map(|t| pick(t)[k]).collect())
            .collect()
    };
    let combined_counts = transpose(|t| &t.combined);
    let double_counts = transpose(|t| &t.double);
    let mean = |rows: &[Vec<u64>]| -> Vec<f64> {
        rows.iter()
            .map(|r| r.iter().sum::<u64>() as f64 / r.len() as f64)
            .collect()
    };
    let combined_mean = mean(&combined_counts);
    let double_mean = mean(&double_counts);
    let speedups = |means: &[f64]| means.iter().map(|c| scan as f64 / c).collect();

    Ok(ExperimentReport {
        row: ResultRow {
            label: corpus.label,
            dim: corpus.dim,
            scan,
            double: speedups(&double_mean),
            combined: speedups(&combined_mean),
        },
        combined_mean,
        double_mean,
        combined_counts,
        double_counts,
        build_distance_count: index.build_distance_count(),
        clusters: index.clusters().len(),
    })
}
