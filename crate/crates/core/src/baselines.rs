//! Comparison procedures: the exhaustive scan and the oracle-assisted pair
//! of single-object kNN queries.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::lc::{LcIndex, SearchConfig, SearchOutcome};
use crate::metric::{common_form, DistanceCounter, Point};
use crate::owa::{SortOrder, WowaMeasure};
use crate::pool::{Hit, KBest, PointId};
use crate::query::FnQuery;

/// Scores every point. Costs exactly `m * N` distance computations.
pub fn linear_scan_kfn(dataset: &[Point], query: &FnQuery, k: usize) -> Result<SearchOutcome> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if let Some(form) = common_form(dataset)? {
        query.form().check(form)?;
    }
    let mut counter = DistanceCounter::new();
    let mut pool = KBest::new(k);
    for (id, o) in dataset.iter().enumerate() {
        let x = query.pivot_vector_unchecked(o, &mut counter);
        pool.offer(id, query.score_vector(&x));
    }
    Ok(SearchOutcome {
        hits: pool.into_sorted(),
        distance_count: counter.count(),
        halted_early: false,
        clusters_visited: 0,
    })
}

/// Smallest `k` for which a kNN query around `q` returns every target: the
/// largest 1-based rank of a target, ranking by `(distance, id)`.
pub fn oracle_k(dataset: &[Point], q: &Point, targets: &[PointId]) -> Result<usize> {
    if targets.is_empty() {
        return Err(Error::InvalidArgument("target set is empty".into()));
    }
    if let Some(&bad) = targets.iter().find(|&&t| t >= dataset.len()) {
        return Err(Error::InvalidArgument(format!("unknown target id {bad}")));
    }
    if let Some(form) = common_form(dataset)? {
        form.check(q.form())?;
    }
    let keyed: Vec<Hit> = dataset
        .iter()
        .enumerate()
        .map(|(id, o)| Hit {
            id,
            score: q.distance_unchecked(o),
        })
        .collect();
    let worst = targets
        .iter()
        .map(|&t| keyed[t])
        .max_by(|a, b| a.rank_cmp(b))
        .expect("targets nonempty");
    Ok(1 + keyed.iter().filter(|h| h.rank_cmp(&worst).is_lt()).count())
}

/// Result of [`double_query`], with the per-object k values that were used.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleOutcome {
    pub outcome: SearchOutcome,
    pub per_object_k: [usize; 2],
}

/// Two separate kNN searches, one per query object, each with the smallest
/// `k` that still captures the true fairest neighbors; the answer is the
/// `k` best of their intersection. The oracle scan that supplies the true
/// answer is not charged.
pub fn double_query(
    index: &LcIndex,
    q1: &Point,
    q2: &Point,
    measure: &WowaMeasure,
    k: usize,
) -> Result<DoubleOutcome> {
    double_query_with(index, q1, q2, measure, k, &SearchConfig::default())
}

pub fn double_query_with(
    index: &LcIndex,
    q1: &Point,
    q2: &Point,
    measure: &WowaMeasure,
    k: usize,
    config: &SearchConfig,
) -> Result<DoubleOutcome> {
    if measure.arity() != 2 {
        return Err(Error::DimensionMismatch {
            left: 2,
            right: measure.arity(),
        });
    }
    let query = FnQuery::new(vec![q1.clone(), q2.clone()], measure.clone())?;
    let truth = linear_scan_kfn(index.points(), &query, k)?;
    let targets = truth.ids();

    let k1 = oracle_k(index.points(), q1, &targets)?;
    let k2 = oracle_k(index.points(), q2, &targets)?;
    let first = index.knn_search_with(q1, k1, config)?;
    let second = index.knn_search_with(q2, k2, config)?;

    let second_dist: HashMap<PointId, f64> =
        second.hits.iter().map(|h| (h.id, h.score)).collect();
    let mut pool = KBest::new(k);
    let mut common = 0;
    for h in &first.hits {
        if let Some(&d2) = second_dist.get(&h.id) {
            common += 1;
            pool.offer(h.id, measure.eval(&[h.score, d2], SortOrder::Ascending));
        }
    }
    if common < targets.len() {
        return Err(Error::Invariant(format!(
            "intersection holds {common} points, expected at least {}",
            targets.len()
        )));
    }
    let hits = pool.into_sorted();
    if hits.iter().map(|h| h.id).ne(targets.iter().copied()) {
        return Err(Error::Invariant(
            "double query disagrees with the exhaustive answer".into(),
        ));
    }
    Ok(DoubleOutcome {
        outcome: SearchOutcome {
            hits,
            distance_count: first.distance_count + second.distance_count,
            halted_early: first.halted_early && second.halted_early,
            clusters_visited: first.clusters_visited + second.clusters_visited,
        },
        per_object_k: [k1, k2],
    })
}
