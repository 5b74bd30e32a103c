//! Exact k-fairest-neighbor (kFN) search.
//!
//! Given `m` query objects in a metric space and an unfairness measure
//! (a weighted ordered weighted average with nondecreasing rank weights),
//! a kFN query returns the `k` objects whose distance vectors to the query
//! objects aggregate to the smallest values. The search runs over an
//! ordinary List-of-Clusters index; only the overlap and containment tests
//! change.
//!
//! ```
//! use kfn_core::{BuildConfig, FnQuery, LcIndex, Point, WeightVector, WowaMeasure};
//!
//! let data: Vec<Point> = (0..50).map(|i| Point::vector(vec![i as f64])).collect();
//! let index = LcIndex::build(data, &BuildConfig::default()).unwrap();
//!
//! let measure = WowaMeasure::owa(WeightVector::normalized(&[1.0, 3.0]).unwrap()).unwrap();
//! let query = FnQuery::new(
//!     vec![Point::vector(vec![10.0]), Point::vector(vec![20.0])],
//!     measure,
//! )
//! .unwrap();
//! let out = index.kfn_search(&query, 1).unwrap();
//! assert_eq!(out.hits[0].id, 15);
//! ```

pub mod baselines;
pub mod datasets;
pub mod error;
pub mod lc;
pub mod metric;
pub mod owa;
pub mod pool;
pub mod query;

pub use baselines::{double_query, double_query_with, linear_scan_kfn, oracle_k, DoubleOutcome};
pub use error::{Error, Result};
pub use lc::{BuildConfig, CenterRule, Cluster, LcIndex, SearchConfig, SearchOutcome};
pub use metric::{euclidean, levenshtein, DistanceCounter, Form, Point};
pub use owa::{ImportanceVector, SortOrder, WeightVector, WowaMeasure};
pub use pool::{Hit, PointId};
pub use query::{BallRegion, Containment, FnQuery, Radius};
