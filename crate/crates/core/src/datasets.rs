//! Synthetic generators, text loaders and the query-pairing protocol.
//!
//! Vector files are either *plain* (one whitespace-separated vector per
//! line) or *headered* (a first line `D N`, then `N` rows of `D` reals; any
//! further tokens on the header line are ignored, which admits the SISAP
//! ASCII layout). String files hold one string per line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::metric::{common_form, Form, Point};

/// Number of query source objects for the default 100 consecutive pairs.
pub const QUERY_SOURCES: usize = 101;

const QUERY_STREAM: u64 = 1;

fn unit_vector(rng: &mut ChaCha8Rng, d: usize) -> Vec<f64> {
    (0..d).map(|_| rng.gen::<f64>()).collect()
}

/// `n` points drawn uniformly from `[0, 1)^d`.
pub fn gen_uniform(n: usize, d: usize, seed: u64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Point::vector(unit_vector(&mut rng, d))).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClusteredSpec {
    pub n_centers: usize,
    pub per_cluster: usize,
    pub dim: usize,
    /// Standard deviation of the per-coordinate Gaussian noise.
    pub sigma: f64,
}

impl ClusteredSpec {
    pub fn new(dim: usize) -> Self {
        Self {
            n_centers: 1000,
            per_cluster: 100,
            dim,
            sigma: 1.0,
        }
    }

    pub fn len(&self) -> usize {
        self.n_centers * self.per_cluster
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn check(&self) -> Result<()> {
        if self.n_centers == 0 || self.per_cluster == 0 || self.dim == 0 {
            return Err(Error::InvalidArgument(
                "clustered generator counts must be positive".into(),
            ));
        }
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidArgument("sigma must be positive".into()));
        }
        Ok(())
    }
}

fn jitter(rng: &mut ChaCha8Rng, center: &[f64], sigma: f64) -> Point {
    Point::vector(
        center
            .iter()
            .map(|c| c + sigma * rng.sample::<f64, _>(StandardNormal))
            .collect::<Vec<_>>(),
    )
}

/// Uniform cluster centers, each surrounded by `per_cluster` Gaussian
/// perturbations of itself. Points are emitted cluster by cluster.
pub fn gen_clustered(spec: &ClusteredSpec, seed: u64) -> Result<Vec<Point>> {
    Ok(clustered_with_queries(spec, 0, seed)?.0)
}

/// Database from [`gen_clustered`] plus `n_queries` extra objects drawn from
/// the same process (random center, same noise), on a separate stream.
pub fn clustered_with_queries(
    spec: &ClusteredSpec,
    n_queries: usize,
    seed: u64,
) -> Result<(Vec<Point>, Vec<Point>)> {
    spec.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let centers: Vec<Vec<f64>> = (0..spec.n_centers)
        .map(|_| unit_vector(&mut rng, spec.dim))
        .collect();
    let mut points = Vec::with_capacity(spec.len());
    for c in &centers {
        for _ in 0..spec.per_cluster {
            points.push(jitter(&mut rng, c, spec.sigma));
        }
    }
    let mut qrng = ChaCha8Rng::seed_from_u64(seed);
    qrng.set_stream(QUERY_STREAM);
    let queries = (0..n_queries)
        .map(|_| {
            let c = &centers[qrng.gen_range(0..centers.len())];
            jitter(&mut qrng, c, spec.sigma)
        })
        .collect();
    Ok((points, queries))
}

/// Database from [`gen_uniform`] plus `n_queries` extra uniform objects.
pub fn uniform_with_queries(n: usize, d: usize, n_queries: usize, seed: u64) -> (Vec<Point>, Vec<Point>) {
    let points = gen_uniform(n, d, seed);
    let mut qrng = ChaCha8Rng::seed_from_u64(seed);
    qrng.set_stream(QUERY_STREAM);
    let queries = (0..n_queries)
        .map(|_| Point::vector(unit_vector(&mut qrng, d)))
        .collect();
    (points, queries)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum VectorFormat {
    #[default]
    Plain,
    Headered,
}

fn parse_row(line: &str, line_no: usize) -> Result<Vec<f64>> {
    line.split_whitespace()
        .map(|tok| match tok.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(Error::Parse {
                line: line_no,
                message: format!("invalid number {tok:?}"),
            }),
        })
        .collect()
}

fn parse_count(tok: Option<&str>, what: &str) -> Result<usize> {
    tok.and_then(|t| t.parse().ok()).ok_or_else(|| Error::Parse {
        line: 1,
        message: format!("header needs an integer {what}"),
    })
}

pub fn read_vectors<R: BufRead>(input: R, format: VectorFormat) -> Result<Vec<Point>> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut expected: Option<(usize, usize)> = None;
    if format == VectorFormat::Headered {
        let (_, header) = lines.next().ok_or_else(|| Error::Parse {
            line: 1,
            message: "missing header".into(),
        })?;
        let header = header?;
        let mut tokens = header.split_whitespace();
        let dim = parse_count(tokens.next(), "dimension")?;
        let n = parse_count(tokens.next(), "count")?;
        expected = Some((dim, n));
    }
    let mut points = Vec::new();
    let mut dim = expected.map(|(d, _)| d);
    for (line_no, line) in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let row = parse_row(&line, line_no)?;
        match dim {
            Some(d) if d != row.len() => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected {d} values, found {}", row.len()),
                })
            }
            None => dim = Some(row.len()),
            _ => {}
        }
        if let Some((_, n)) = expected {
            if points.len() == n {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("more than the {n} rows announced in the header"),
                });
            }
        }
        points.push(Point::vector(row));
    }
    if let Some((_, n)) = expected {
        if points.len() != n {
            return Err(Error::Parse {
                line: 1,
                message: format!("header announces {n} rows, found {}", points.len()),
            });
        }
    }
    Ok(points)
}

pub fn load_vectors(path: impl AsRef<Path>, format: VectorFormat) -> Result<Vec<Point>> {
    read_vectors(BufReader::new(File::open(path)?), format)
}

/// Writes vectors with shortest round-trip decimal rendering.
pub fn write_vectors<W: Write>(mut out: W, points: &[Point], format: VectorFormat) -> Result<()> {
    let dim = match common_form(points)? {
        Some(Form::Vector { dim }) => dim,
        Some(Form::Text) => {
            return Err(Error::FormMismatch {
                expected: "vector",
                found: "string",
            })
        }
        None => 0,
    };
    if format == VectorFormat::Headered {
        writeln!(out, "{dim} {}", points.len())?;
    }
    for p in points {
        let coords = p.as_vector().expect("checked above");
        let mut first = true;
        for v in coords {
            if !first {
                out.write_all(b" ")?;
            }
            write!(out, "{v:?}")?;
            first = false;
        }
        writeln!(out)?;
    }
    Ok(())
}

pub fn save_vectors(path: impl AsRef<Path>, points: &[Point], format: VectorFormat) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_vectors(&mut out, points, format)?;
    out.flush()?;
    Ok(())
}

pub fn read_strings<R: BufRead>(input: R) -> Result<Vec<Point>> {
    let mut points = Vec::new();
    for line in input.lines() {
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if !line.is_empty() {
            points.push(Point::text(line));
        }
    }
    Ok(points)
}

pub fn load_strings(path: impl AsRef<Path>) -> Result<Vec<Point>> {
    read_strings(BufReader::new(File::open(path)?))
}

pub fn write_strings<W: Write>(mut out: W, points: &[Point]) -> Result<()> {
    for p in points {
        let s = p.as_text().ok_or(Error::FormMismatch {
            expected: "string",
            found: "vector",
        })?;
        if s.is_empty() || s.contains(['\n', '\r']) {
            return Err(Error::InvalidArgument(format!(
                "string {s:?} cannot be stored one per line"
            )));
        }
        writeln!(out, "{s}")?;
    }
    Ok(())
}

/// Where the query objects of an experiment come from.
#[derive(Clone, Debug)]
pub enum QuerySource {
    /// Take the first `n_pairs + 1` points as queries and drop them from the
    /// database.
    FromDatabase,
    /// Use separately generated objects; the database is left untouched.
    Generated(Vec<Point>),
}

#[derive(Clone, Debug)]
pub struct ExperimentCorpus {
    pub label: String,
    pub database: Vec<Point>,
    /// Consecutive pairs: sources `(1, 2), (2, 3), ...`.
    pub query_pairs: Vec<(Point, Point)>,
    /// The query objects the pairs are drawn from, in order.
    pub query_sources: Vec<Point>,
    pub dim: Option<usize>,
}

impl ExperimentCorpus {
    /// Consecutive windows of `m` query objects, at most as many as there
    /// are pairs. For `m = 2` these are exactly the pairs.
    pub fn query_tuples(&self, m: usize) -> Vec<Vec<Point>> {
        assert!(m >= 1, "tuples need at least one object");
        self.query_sources
            .windows(m)
            .take(self.query_pairs.len())
            .map(<[Point]>::to_vec)
            .collect()
    }
}

pub fn make_corpus(
    label: impl Into<String>,
    points: Vec<Point>,
    source: QuerySource,
    n_pairs: usize,
) -> Result<ExperimentCorpus> {
    if n_pairs == 0 {
        return Err(Error::InvalidArgument("need at least one query pair".into()));
    }
    let needed = n_pairs + 1;
    let (database, sources) = match source {
        QuerySource::FromDatabase => {
            if points.len() <= needed {
                return Err(Error::InvalidArgument(format!(
                    "{} points cannot supply {needed} queries and a database",
                    points.len()
                )));
            }
            let mut database = points;
            let rest = database.split_off(needed);
            (rest, database)
        }
        QuerySource::Generated(queries) => {
            if queries.len() < needed {
                return Err(Error::InvalidArgument(format!(
                    "{} generated queries, need {needed}",
                    queries.len()
                )));
            }
            if points.is_empty() {
                return Err(Error::InvalidArgument("empty database".into()));
            }
            (points, queries)
        }
    };
    let form = common_form(&database)?.expect("database nonempty");
    if let Some(qform) = common_form(&sources)? {
        form.check(qform)?;
    }
    let query_pairs = sources
        .windows(2)
        .take(n_pairs)
        .map(|w| (w[0].clone(), w[1].clone()))
        .collect();
    let dim = match form {
        Form::Vector { dim } => Some(dim),
        Form::Text => None,
    };
    let mut query_sources = sources;
    query_sources.truncate(needed);
    Ok(ExperimentCorpus {
        label: label.into(),
        database,
        query_pairs,
        query_sources,
        dim,
    })
}
