//! Fairest-neighbor query regions and their predicates against metric balls.
//!
//! A query holds `m` query objects, an unfairness measure and a search
//! radius `s`. In pivot space (one coordinate `d(q_i, o)` per query object)
//! the region `{o : wowa(x_o) <= s}` is a linear ambit. A ball with center
//! `c` and radius `r` is tested through its center-distance vector
//! `x = [d(q_i, c)]`.

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::metric::{common_form, DistanceCounter, Form, Point};
use crate::owa::{SortOrder, WowaMeasure};

/// Distance vector to the query objects; inline for small arities.
pub type PivotVector = SmallVec<[f64; 8]>;

/// Current search radius. `Unbounded` until `k` candidates exist.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Radius {
    Unbounded,
    Finite(f64),
}

impl Radius {
    pub fn admits(self, value: f64) -> bool {
        match self {
            Radius::Unbounded => true,
            Radius::Finite(s) => value <= s,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Radius::Unbounded => f64::INFINITY,
            Radius::Finite(s) => s,
        }
    }
}

/// Which facet bounds the distance from the query to a ball's exterior.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Containment {
    /// Black-box monotone bound `r - wowa(x)`.
    Weak,
    /// Single-facet bound `r - wowa_desc(x)`, never weaker than `Weak`.
    #[default]
    Strong,
}

/// A ball region `B(c, r)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BallRegion {
    pub center: Point,
    pub radius: f64,
}

impl BallRegion {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "ball radius must be nonnegative, got {radius}"
            )));
        }
        Ok(Self { center, radius })
    }
}

#[derive(Clone, Debug)]
pub struct FnQuery {
    queries: Vec<Point>,
    measure: WowaMeasure,
    form: Form,
    radius: Radius,
}

impl FnQuery {
    /// Builds a query; the measure must be an unfairness measure (rank
    /// weights nondecreasing) of arity `queries.len()`.
    pub fn new(queries: Vec<Point>, measure: WowaMeasure) -> Result<Self> {
        let form = common_form(&queries)?
            .ok_or_else(|| Error::InvalidArgument("a query needs at least one object".into()))?;
        if measure.arity() != queries.len() {
            return Err(Error::DimensionMismatch {
                left: queries.len(),
                right: measure.arity(),
            });
        }
        if !measure.is_unfairness() {
            return Err(Error::InvalidWeights(
                "query weights must be nondecreasing".into(),
            ));
        }
        Ok(Self {
            queries,
            measure,
            form,
            radius: Radius::Unbounded,
        })
    }

    /// A single-object query; scores are plain distances.
    pub fn single(q: Point) -> Result<Self> {
        Self::new(vec![q], WowaMeasure::single())
    }

    pub fn queries(&self) -> &[Point] {
        &self.queries
    }

    pub fn measure(&self) -> &WowaMeasure {
        &self.measure
    }

    pub fn arity(&self) -> usize {
        self.queries.len()
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn radius(&self) -> Radius {
        self.radius
    }

    pub fn set_radius(&mut self, radius: Radius) {
        if let Radius::Finite(s) = radius {
            assert!(s >= 0.0, "search radius must be nonnegative");
        }
        self.radius = radius;
    }

    /// Distances from every query object to `o`, counting `m` evaluations.
    pub fn pivot_vector(&self, o: &Point, counter: &mut DistanceCounter) -> Result<PivotVector> {
        self.form.check(o.form())?;
        Ok(self.pivot_vector_unchecked(o, counter))
    }

    #[inline]
    pub(crate) fn pivot_vector_unchecked(
        &self,
        o: &Point,
        counter: &mut DistanceCounter,
    ) -> PivotVector {
        self.queries
            .iter()
            .map(|q| counter.distance_unchecked(q, o))
            .collect()
    }

    /// Unfairness score of `o`; costs exactly `m` distance computations.
    pub fn score(&self, o: &Point, counter: &mut DistanceCounter) -> Result<f64> {
        let x = self.pivot_vector(o, counter)?;
        Ok(self.measure.eval(&x, SortOrder::Ascending))
    }

    #[inline]
    pub(crate) fn score_vector(&self, x: &[f64]) -> f64 {
        self.measure.eval(x, SortOrder::Ascending)
    }

    /// Whether the ball (center distances `x`, radius `r`) may hold a point
    /// scoring at most `s`. Uses the clamped lower bounds `max(0, x_i - r)`.
    pub fn ball_overlap(&self, x: &[f64], r: f64) -> bool {
        let Radius::Finite(s) = self.radius else {
            return true;
        };
        let lower: PivotVector = x.iter().map(|xi| (xi - r).max(0.0)).collect();
        self.measure.eval(&lower, SortOrder::Ascending) <= s
    }

    /// Whether the whole query region lies inside the ball, i.e. every point
    /// outside the ball scores above `s`.
    pub fn query_inside_ball(&self, x: &[f64], r: f64, mode: Containment) -> bool {
        let Radius::Finite(s) = self.radius else {
            return false;
        };
        let facet = match mode {
            Containment::Weak => SortOrder::Ascending,
            Containment::Strong => SortOrder::Descending,
        };
        r - self.measure.eval(x, facet) >= s
    }

    /// Whether the whole ball lies inside the query region (upper corner
    /// `x + r` satisfies the query), so its members qualify unexamined.
    pub fn ball_inside_query(&self, x: &[f64], r: f64) -> bool {
        let upper: PivotVector = x.iter().map(|xi| xi + r).collect();
        self.radius
            .admits(self.measure.eval(&upper, SortOrder::Ascending))
    }

    pub(crate) fn check_form(&self, form: Form) -> Result<()> {
        self.form.check(form)
    }
}
