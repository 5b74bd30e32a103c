use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use kfn_bench::config::{PAPER_SCALE_N, DESK_SCALE_N};
use kfn_bench::{emit_table, run_experiment, summary_line, DatasetSpec, ExperimentConfig, TableFormat};
use kfn_core::datasets::VectorFormat;
use kfn_core::{CenterRule, Containment};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ContainmentArg {
    Weak,
    Strong,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Markdown,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum CenterArg {
    Sum,
    Min,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum VectorFormatArg {
    Plain,
    Headered,
}

/// Counts distance computations of k-fairest-neighbor search over a
/// List-of-Clusters index against a linear scan and a double kNN baseline.
#[derive(Debug, Parser)]
#[command(name = "kfn-bench", version)]
struct Args {
    /// uniform, clustered, vectors:PATH or strings:PATH (repeatable)
    #[arg(long = "dataset", default_value = "uniform")]
    datasets: Vec<String>,

    /// Dimensions of synthetic vectors, comma separated
    #[arg(long, value_delimiter = ',', default_value = "4")]
    dim: Vec<usize>,

    /// Synthetic database size
    #[arg(long)]
    n: Option<usize>,

    /// Use the full-size synthetic corpora (100000 points)
    #[arg(long)]
    paper_scale: bool,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value_t = kfn_core::lc::DEFAULT_BUCKET_SIZE)]
    bucket_size: usize,

    /// Raw rank weights, normalized to sum to one
    #[arg(long, value_delimiter = ',', default_value = "1,3")]
    weights: Vec<f64>,

    /// Raw per-object importances (uniform when omitted)
    #[arg(long, value_delimiter = ',')]
    p: Option<Vec<f64>>,

    #[arg(long, default_value_t = 5)]
    k_max: usize,

    #[arg(long, value_enum, default_value = "strong")]
    containment: ContainmentArg,

    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,

    /// Check every combined result against a linear scan
    #[arg(long)]
    verify: bool,

    /// Standard deviation of clustered noise
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,

    #[arg(long, default_value_t = 100)]
    per_cluster: usize,

    #[arg(long, default_value_t = 100)]
    pairs: usize,

    /// Center selection: sum or minimum of distances to previous centers
    #[arg(long, value_enum, default_value = "sum")]
    center_rule: CenterArg,

    #[arg(long, value_enum, default_value = "plain")]
    vector_format: VectorFormatArg,

    /// Score cluster centers without recomputing their distances
    #[arg(long)]
    reuse_center_distances: bool,

    /// Append a geometric-mean summary line (markdown only)
    #[arg(long)]
    summary: bool,
}

fn configs(args: &Args) -> kfn_core::Result<Vec<ExperimentConfig>> {
    let n = args
        .n
        .unwrap_or(if args.paper_scale { PAPER_SCALE_N } else { DESK_SCALE_N });
    let base = ExperimentConfig {
        n,
        per_cluster: args.per_cluster,
        sigma: args.sigma,
        seed: args.seed,
        bucket_size: args.bucket_size,
        center_rule: match args.center_rule {
            CenterArg::Sum => CenterRule::SumOfDistances,
            CenterArg::Min => CenterRule::MinDistance,
        },
        weights: args.weights.clone(),
        importances: args.p.clone(),
        k_max: args.k_max,
        containment: match args.containment {
            ContainmentArg::Weak => Containment::Weak,
            ContainmentArg::Strong => Containment::Strong,
        },
        vector_format: match args.vector_format {
            VectorFormatArg::Plain => VectorFormat::Plain,
            VectorFormatArg::Headered => VectorFormat::Headered,
        },
        n_pairs: args.pairs,
        verify: args.verify,
        reuse_center_distances: args.reuse_center_distances,
        ..ExperimentConfig::default()
    };
    let mut out = Vec::new();
    for name in &args.datasets {
        let dataset = DatasetSpec::parse(name)?;
        if dataset.is_synthetic() {
            for &dim in &args.dim {
                out.push(ExperimentConfig {
                    dataset: dataset.clone(),
                    dim,
                    ..base.clone()
                });
            }
        } else {
            out.push(ExperimentConfig {
                dataset,
                ..base.clone()
            });
        }
    }
    for c in &out {
        c.validate()?;
    }
    Ok(out)
}

fn run(args: &Args) -> kfn_core::Result<String> {
    let mut rows = Vec::new();
    for config in configs(args)? {
        rows.push(run_experiment(&config)?.row);
    }
    let format = match args.format {
        FormatArg::Csv => TableFormat::Csv,
        FormatArg::Markdown => TableFormat::Markdown,
    };
    let mut text = emit_table(&rows, format);
    if args.summary && format == TableFormat::Markdown {
        if let Some(line) = summary_line(&rows) {
            text.push('\n');
            text.push_str(&line);
            text.push('\n');
        }
    }
    Ok(text)
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("kfn-bench: {e}");
            ExitCode::FAILURE
        }
    }
}
