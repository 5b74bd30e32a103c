//! List of Clusters.
//!
//! The index is an ordered list of `(center, covering radius, bucket)`
//! triples. Each bucket holds the points closest to its center that were
//! still unassigned when the cluster was formed, so every point of a later
//! cluster lies strictly outside all earlier balls. A search that finds its
//! query region entirely inside one ball can therefore stop there.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metric::{common_form, DistanceCounter, Form, Point};
use crate::pool::{Hit, KBest, PointId};
use crate::query::{Containment, FnQuery, Radius};

pub const DEFAULT_BUCKET_SIZE: usize = 20;

const PARALLEL_THRESHOLD: usize = 4096;
const FORMAT_TAG: &str = "kfn-lc";
const FORMAT_VERSION: u32 = 1;

/// How the next cluster center is chosen among the unassigned points.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CenterRule {
    /// Maximize the sum of distances to all previous centers.
    #[default]
    SumOfDistances,
    /// Maximize the distance to the closest previous center.
    MinDistance,
}

#[derive(Clone, Debug)]
pub struct BuildConfig {
    pub bucket_size: usize,
    pub center_rule: CenterRule,
    /// When set, the first center is drawn at random with this seed instead
    /// of being the first dataset element.
    pub seed: Option<u64>,
}

impl Default for BuildConfig {
    fn default() -> Self {
        Self {
            bucket_size: DEFAULT_BUCKET_SIZE,
            center_rule: CenterRule::default(),
            seed: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub center: PointId,
    pub covering_radius: f64,
    /// Member ids, center excluded, ascending.
    pub bucket: Vec<PointId>,
}

#[derive(Clone, Debug, Default)]
pub struct SearchConfig {
    pub containment: Containment,
    /// Accept whole buckets without scoring when the ball lies inside the
    /// query region. Only meaningful for fixed-radius searches.
    pub fast_accept: bool,
    /// Score each center from the distances already computed for the ball
    /// tests. When off, a center is scored like any other point and costs
    /// another `m` computations, matching the published cost accounting.
    pub reuse_center_distances: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    /// Best hits, ascending by `(score, id)`.
    pub hits: Vec<Hit>,
    pub distance_count: u64,
    pub halted_early: bool,
    /// Number of clusters whose center was examined.
    pub clusters_visited: usize,
}

impl SearchOutcome {
    pub fn ids(&self) -> Vec<PointId> {
        self.hits.iter().map(|h| h.id).collect()
    }
}

/// A range-search result. `score` is `None` for points accepted without
/// examination.
#[derive(Clone, Debug, PartialEq)]
pub struct RangeHit {
    pub id: PointId,
    pub score: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RangeOutcome {
    /// Hits ascending by id.
    pub hits: Vec<RangeHit>,
    pub distance_count: u64,
    pub halted_early: bool,
}

#[derive(Clone, Debug)]
pub struct LcIndex {
    points: Vec<Point>,
    form: Form,
    clusters: Vec<Cluster>,
    build_distance_count: u64,
}

impl LcIndex {
    pub fn build(points: Vec<Point>, config: &BuildConfig) -> Result<Self> {
        let form = common_form(&points)?
            .ok_or_else(|| Error::InvalidArgument("cannot index an empty dataset".into()))?;
        if config.bucket_size == 0 {
            return Err(Error::InvalidArgument("bucket size must be at least 1".into()));
        }
        let n = points.len();
        let first = match config.seed {
            Some(seed) => ChaCha8Rng::seed_from_u64(seed).gen_range(0..n),
            None => 0,
        };

        let mut clusters = Vec::new();
        let mut build_count = 0u64;
        let mut score = vec![
            match config.center_rule {
                CenterRule::SumOfDistances => 0.0,
                CenterRule::MinDistance => f64::INFINITY,
            };
            n
        ];
        let mut remaining: Vec<PointId> = (0..n).filter(|&i| i != first).collect();
        let mut center = first;

        loop {
            let c = &points[center];
            let dists: Vec<f64> = if remaining.len() >= PARALLEL_THRESHOLD {
                remaining
                    .par_iter()
                    .map(|&o| c.distance_unchecked(&points[o]))
                    .collect()
            } else {
                remaining
                    .iter()
                    .map(|&o| c.distance_unchecked(&points[o]))
                    .collect()
            };
            build_count += dists.len() as u64;

            let radius = if dists.len() <= config.bucket_size {
                dists.iter().copied().fold(0.0, f64::max)
            } else {
                let mut sorted = dists.clone();
                let (_, kth, _) =
                    sorted.select_nth_unstable_by(config.bucket_size - 1, f64::total_cmp);
                *kth
            };

            let mut bucket = Vec::new();
            let mut rest = Vec::with_capacity(remaining.len());
            for (&o, &d) in remaining.iter().zip(&dists) {
                if d <= radius {
                    bucket.push(o);
                } else {
                    score[o] = match config.center_rule {
                        CenterRule::SumOfDistances => score[o] + d,
                        CenterRule::MinDistance => score[o].min(d),
                    };
                    rest.push(o);
                }
            }
            clusters.push(Cluster {
                center,
                covering_radius: radius,
                bucket,
            });

            // rest is ascending by id, so the first maximum wins ties
            let Some(pos) = rest
                .iter()
                .enumerate()
                .fold(None, |best: Option<(usize, f64)>, (i, &o)| match best {
                    Some((_, s)) if score[o] <= s => best,
                    _ => Some((i, score[o])),
                })
                .map(|(i, _)| i)
            else {
                break;
            };
            center = rest.remove(pos);
            remaining = rest;
        }

        Ok(Self {
            points,
            form,
            clusters,
            build_distance_count: build_count,
        })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, id: PointId) -> &Point {
        &self.points[id]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn clusters(&self) -> &[Cluster] {
        &self.clusters
    }

    /// Distance computations spent on construction; never part of query cost.
    pub fn build_distance_count(&self) -> u64 {
        self.build_distance_count
    }

    /// Exact `k` fairest neighbors with the default (strong) containment.
    pub fn kfn_search(&self, query: &FnQuery, k: usize) -> Result<SearchOutcome> {
        self.kfn_search_with(query, k, &SearchConfig::default())
    }

    pub fn kfn_search_with(
        &self,
        query: &FnQuery,
        k: usize,
        config: &SearchConfig,
    ) -> Result<SearchOutcome> {
        if k == 0 {
            return Err(Error::InvalidArgument("k must be at least 1".into()));
        }
        query.check_form(self.form)?;
        let mut query = query.clone();
        query.set_radius(Radius::Unbounded);
        let mut pool = KBest::new(k);
        let mut counter = DistanceCounter::new();
        let mut halted_early = false;
        let mut visited = 0;

        for (i, cluster) in self.clusters.iter().enumerate() {
            visited = i + 1;
            let center = &self.points[cluster.center];
            let x = query.pivot_vector_unchecked(center, &mut counter);
            let center_score = if config.reuse_center_distances {
                query.score_vector(&x)
            } else {
                query.score_vector(&query.pivot_vector_unchecked(center, &mut counter))
            };
            if pool.offer(cluster.center, center_score) {
                query.set_radius(pool.radius());
            }
            let r = cluster.covering_radius;
            if query.ball_overlap(&x, r) {
                for &o in &cluster.bucket {
                    let y = query.pivot_vector_unchecked(&self.points[o], &mut counter);
                    if pool.offer(o, query.score_vector(&y)) {
                        query.set_radius(pool.radius());
                    }
                }
            }
            if query.query_inside_ball(&x, r, config.containment) {
                halted_early = i + 1 < self.clusters.len();
                break;
            }
        }

        Ok(SearchOutcome {
            hits: pool.into_sorted(),
            distance_count: counter.count(),
            halted_early,
            clusters_visited: visited,
        })
    }

    /// Classic k-nearest-neighbor search for one query object.
    pub fn knn_search(&self, q: &Point, k: usize) -> Result<SearchOutcome> {
        self.knn_search_with(q, k, &SearchConfig::default())
    }

    pub fn knn_search_with(
        &self,
        q: &Point,
        k: usize,
        config: &SearchConfig,
    ) -> Result<SearchOutcome> {
        self.kfn_search_with(&FnQuery::single(q.clone())?, k, config)
    }

    /// All points scoring at most the query's (finite) radius.
    pub fn range_search(&self, query: &FnQuery, config: &SearchConfig) -> Result<RangeOutcome> {
        let Radius::Finite(s) = query.radius() else {
            return Err(Error::InvalidArgument(
                "range search needs a finite radius".into(),
            ));
        };
        query.check_form(self.form)?;
        let mut counter = DistanceCounter::new();
        let mut hits = Vec::new();
        let mut halted_early = false;

        for (i, cluster) in self.clusters.iter().enumerate() {
            let center = &self.points[cluster.center];
            let x = query.pivot_vector_unchecked(center, &mut counter);
            let center_score = if config.reuse_center_distances {
                query.score_vector(&x)
            } else {
                query.score_vector(&query.pivot_vector_unchecked(center, &mut counter))
            };
            if center_score <= s {
                hits.push(RangeHit {
                    id: cluster.center,
                    score: Some(center_score),
                });
            }
            let r = cluster.covering_radius;
            if config.fast_accept && query.ball_inside_query(&x, r) {
                hits.extend(cluster.bucket.iter().map(|&id| RangeHit { id, score: None }));
            } else if query.ball_overlap(&x, r) {
                for &o in &cluster.bucket {
                    let y = query.pivot_vector_unchecked(&self.points[o], &mut counter);
                    let score = query.score_vector(&y);
                    if score <= s {
                        hits.push(RangeHit {
                            id: o,
                            score: Some(score),
                        });
                    }
                }
            }
            if query.query_inside_ball(&x, r, config.containment) {
                halted_early = i + 1 < self.clusters.len();
                break;
            }
        }
        hits.sort_by_key(|h| h.id);
        Ok(RangeOutcome {
            hits,
            distance_count: counter.count(),
            halted_early,
        })
    }

    /// Writes the cluster structure as line-oriented text. Points are
    /// referenced by id and not stored.
    ///
    /// ```text
    /// kfn-lc 1
    /// points <n> clusters <c> build_distances <count>
    /// <center id> <covering radius> <member count> <member id>...
    /// ```
    pub fn write_structure<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{FORMAT_TAG} {FORMAT_VERSION}")?;
        writeln!(
            out,
            "points {} clusters {} build_distances {}",
            self.points.len(),
            self.clusters.len(),
            self.build_distance_count
        )?;
        for c in &self.clusters {
            write!(out, "{} {} {}", c.center, c.covering_radius, c.bucket.len())?;
            for id in &c.bucket {
                write!(out, " {id}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }

    /// Reads a structure written by [`LcIndex::write_structure`] and attaches
    /// it to `points`, which must be the dataset it was built from.
    pub fn read_structure<R: BufRead>(input: R, points: Vec<Point>) -> Result<Self> {
        let form = common_form(&points)?
            .ok_or_else(|| Error::InvalidArgument("cannot index an empty dataset".into()))?;
        let mut lines = input.lines().enumerate();
        let mut next_line = |what: &str| -> Result<(usize, String)> {
            match lines.next() {
                Some((i, line)) => Ok((i + 1, line?)),
                None => Err(Error::Parse {
                    line: 0,
                    message: format!("unexpected end of input, expected {what}"),
                }),
            }
        };
        let parse_err = |line: usize, message: String| Error::Parse { line, message };

        let (ln, header) = next_line("header")?;
        if header.trim() != format!("{FORMAT_TAG} {FORMAT_VERSION}") {
            return Err(parse_err(ln, format!("unsupported header {header:?}")));
        }
        let (ln, summary) = next_line("summary")?;
        let fields: Vec<&str> = summary.split_whitespace().collect();
        let [ "points", n, "clusters", c, "build_distances", b ] = fields[..] else {
            return Err(parse_err(ln, format!("malformed summary {summary:?}")));
        };
        let num = |s: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| parse_err(ln, format!("invalid integer {s:?}")))
        };
        let (n, c, build_distance_count) = (num(n)? as usize, num(c)? as usize, num(b)?);
        if n != points.len() {
            return Err(parse_err(
                ln,
                format!("structure covers {n} points, dataset has {}", points.len()),
            ));
        }

        let mut seen = vec![false; n];
        let mut mark = |id: usize, ln: usize| -> Result<()> {
            match seen.get_mut(id) {
                Some(s) if !*s => {
                    *s = true;
                    Ok(())
                }
                Some(_) => Err(parse_err(ln, format!("point {id} assigned twice"))),
                None => Err(parse_err(ln, format!("point id {id} out of range"))),
            }
        };
        let mut clusters = Vec::with_capacity(c);
        for _ in 0..c {
            let (ln, line) = next_line("cluster")?;
            let mut tokens = line.split_whitespace();
            let mut field = |what: &str| {
                tokens
                    .next()
                    .ok_or_else(|| parse_err(ln, format!("missing {what}")))
            };
            let center: usize = field("center")?
                .parse()
                .map_err(|_| parse_err(ln, "invalid center id".into()))?;
            let covering_radius: f64 = field("radius")?
                .parse()
                .map_err(|_| parse_err(ln, "invalid radius".into()))?;
            let len: usize = field("member count")?
                .parse()
                .map_err(|_| parse_err(ln, "invalid member count".into()))?;
            let bucket = (0..len)
                .map(|_| {
                    field("member id")?
                        .parse()
                        .map_err(|_| parse_err(ln, "invalid member id".into()))
                })
                .collect::<Result<Vec<usize>>>()?;
            if tokens.next().is_some() {
                return Err(parse_err(ln, "trailing tokens".into()));
            }
            mark(center, ln)?;
            for &id in &bucket {
                mark(id, ln)?;
            }
            clusters.push(Cluster {
                center,
                covering_radius,
                bucket,
            });
        }
        if !seen.iter().all(|s| *s) {
            return Err(Error::Parse {
                line: 0,
                message: "structure does not cover every point".into(),
            });
        }
        Ok(Self {
            points,
            form,
            clusters,
            build_distance_count,
        })
    }
}
