use std::path::PathBuf;

use kfn_core::datasets::VectorFormat;
use kfn_core::{CenterRule, Containment, Error, ImportanceVector, Result, WeightVector, WowaMeasure};

pub const DESK_SCALE_N: usize = 20_000;
pub const PAPER_SCALE_N: usize = 100_000;

#[derive(Clone, Debug, PartialEq)]
pub enum DatasetSpec {
    Uniform,
    Clustered,
    Vectors(PathBuf),
    Strings(PathBuf),
}

impl DatasetSpec {
    /// Parses `uniform`, `clustered`, `vectors:PATH` or `strings:PATH`.
    pub fn parse(s: &str) -> Result<Self> {
        match s.split_once(':') {
            Some(("vectors", path)) if !path.is_empty() => Ok(Self::Vectors(path.into())),
            Some(("strings", path)) if !path.is_empty() => Ok(Self::Strings(path.into())),
            None if s == "uniform" => Ok(Self::Uniform),
            None if s == "clustered" => Ok(Self::Clustered),
            _ => Err(Error::InvalidArgument(format!(
                "unknown dataset {s:?}; expected uniform, clustered, vectors:PATH or strings:PATH"
            ))),
        }
    }

    pub fn is_synthetic(&self) -> bool {
        matches!(self, Self::Uniform | Self::Clustered)
    }
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    /// Dimensionality of synthetic vectors.
    pub dim: usize,
    /// Size of a synthetic database.
    pub n: usize,
    pub per_cluster: usize,
    pub sigma: f64,
    pub seed: u64,
    pub bucket_size: usize,
    pub center_rule: CenterRule,
    /// Raw rank weights, normalized to sum to one.
    pub weights: Vec<f64>,
    /// Raw importances; uniform when `None`.
    pub importances: Option<Vec<f64>>,
    pub k_max: usize,
    pub containment: Containment,
    pub vector_format: VectorFormat,
    pub n_pairs: usize,
    /// Check every combined result against a linear scan.
    pub verify: bool,
    /// Score centers from their ball-test distances instead of recomputing.
    pub reuse_center_distances: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            dataset: DatasetSpec::Uniform,
            dim: 4,
            n: DESK_SCALE_N,
            per_cluster: 100,
            sigma: 1.0,
            seed: 0,
            bucket_size: kfn_core::lc::DEFAULT_BUCKET_SIZE,
            center_rule: CenterRule::SumOfDistances,
            weights: vec![1.0, 3.0],
            importances: None,
            k_max: 5,
            containment: Containment::Strong,
            vector_format: VectorFormat::Plain,
            n_pairs: 100,
            verify: false,
            reuse_center_distances: false,
        }
    }
}

impl ExperimentConfig {
    pub fn measure(&self) -> Result<WowaMeasure> {
        let w = WeightVector::normalized(&self.weights)?;
        if !w.is_nondecreasing() {
            return Err(Error::InvalidWeights(
                "rank weights must be nondecreasing for an unfairness measure".into(),
            ));
        }
        let p = match &self.importances {
            Some(raw) => ImportanceVector::normalized(raw)?,
            None => ImportanceVector::uniform(w.len())?,
        };
        WowaMeasure::new(p, w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_max == 0 {
            return Err(Error::InvalidArgument("k-max must be at least 1".into()));
        }
        if self.n_pairs == 0 {
            return Err(Error::InvalidArgument("need at least one query pair".into()));
        }
        if self.dataset.is_synthetic() && (self.n == 0 || self.dim == 0) {
            return Err(Error::InvalidArgument("synthetic n and dim must be positive".into()));
        }
        if self.dataset == DatasetSpec::Clustered
            && (self.per_cluster == 0 || self.n % self.per_cluster != 0)
        {
            return Err(Error::InvalidArgument(format!(
                "clustered n ({}) must be a positive multiple of per-cluster ({})",
                self.n, self.per_cluster
            )));
        }
        self.measure().map(|_| ())
    }
}
