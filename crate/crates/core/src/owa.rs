//! Ordered weighted averages.
//!
//! [`WowaMeasure`] pairs an importance vector `p` (one entry per criterion,
//! i.e. per query object) with an ordered weight vector `w` (one entry per
//! rank). The rank weights are spread over the importances through the
//! piecewise-linear interpolation function [`phi`]. With uniform `p` the
//! measure is the plain OWA `w · sort_ascending(x)`; with uniform `w` it is
//! the weighted mean `p · x`.
//!
//! A nondecreasing `w` (more weight on the larger distances) gives an
//! unfairness measure, which is what fairest-neighbor queries minimize.

use smallvec::SmallVec;

use crate::error::{Error, Result};

const SUM_TOLERANCE: f64 = 1e-12;

fn check_weights(values: &[f64], what: &str) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidWeights(format!("{what} vector is empty")));
    }
    if let Some(v) = values
        .iter()
        .find(|v| !v.is_finite() || **v < 0.0 || **v > 1.0)
    {
        return Err(Error::InvalidWeights(format!(
            "{what} entry {v} outside [0, 1]"
        )));
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidWeights(format!(
            "{what} entries sum to {sum}, expected 1"
        )));
    }
    Ok(())
}

fn normalize(raw: &[f64], what: &str) -> Result<Vec<f64>> {
    if raw.iter().any(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidWeights(format!(
            "{what} entries must be finite and nonnegative"
        )));
    }
    let sum: f64 = raw.iter().sum();
    if sum <= 0.0 {
        return Err(Error::InvalidWeights(format!("{what} entries sum to zero")));
    }
    Ok(raw.iter().map(|v| v / sum).collect())
}

/// Rank weights `w`: entry `i` applies to the `i`-th smallest argument.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector(Box<[f64]>);

/// Per-criterion importances `p`.
#[derive(Clone, Debug, PartialEq)]
pub struct ImportanceVector(Box<[f64]>);

impl WeightVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_weights(&values, "weight")?;
        Ok(Self(values.into_boxed_slice()))
    }

    /// Scales nonnegative raw weights to sum to one, e.g. `[1, 3]` becomes
    /// `[0.25, 0.75]`.
    pub fn normalized(raw: &[f64]) -> Result<Self> {
        Self::new(normalize(raw, "weight")?)
    }

    pub fn uniform(m: usize) -> Result<Self> {
        Self::normalized(&vec![1.0; m])
    }

    pub fn reversed(&self) -> Self {
        Self(self.0.iter().rev().copied().collect())
    }

    pub fn is_nondecreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl ImportanceVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_weights(&values, "importance")?;
        Ok(Self(values.into_boxed_slice()))
    }

    pub fn normalized(raw: &[f64]) -> Result<Self> {
        Self::new(normalize(raw, "importance")?)
    }

    pub fn uniform(m: usize) -> Result<Self> {
        Self::normalized(&vec![1.0; m])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Knot values `phi(i/m)` for `i = 0..=m`.
fn knots(w: &WeightVector) -> Box<[f64]> {
    let m = w.len();
    let mut out = Vec::with_capacity(m + 1);
    let mut acc = 0.0;
    out.push(0.0);
    for k in 1..=m {
        acc += w.0[m - k];
        out.push(acc);
    }
    out[m] = 1.0;
    out.into_boxed_slice()
}

#[inline]
fn interpolate(knots: &[f64], t: f64) -> f64 {
    let m = knots.len() - 1;
    let pos = t.clamp(0.0, 1.0) * m as f64;
    let i = (pos.floor() as usize).min(m - 1);
    let frac = pos - i as f64;
    knots[i] + frac * (knots[i + 1] - knots[i])
}

/// The interpolation function: `phi(0) = 0`, `phi(i/m)` is the sum of the
/// `i` last entries of `w`, linear in between.
pub fn phi(t: f64, w: &WeightVector) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::InvalidArgument(format!(
            "phi argument {t} outside [0, 1]"
        )));
    }
    Ok(interpolate(&knots(w), t))
}

/// Plain OWA: `w` dotted with `x` sorted ascending.
pub fn owa(x: &[f64], w: &WeightVector) -> Result<f64> {
    if x.len() != w.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: w.len(),
        });
    }
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(sorted.iter().zip(w.as_slice()).map(|(a, b)| a * b).sum())
}

/// Argument ordering used to pick one facet of the WOWA ambit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SortOrder {
    Ascending,
    Descending,
}

/// A weighted ordered weighted average, validated once at construction.
#[derive(Clone, Debug)]
pub struct WowaMeasure {
    p: ImportanceVector,
    w: WeightVector,
    knots: Box<[f64]>,
}

impl WowaMeasure {
    pub fn new(p: ImportanceVector, w: WeightVector) -> Result<Self> {
        if p.len() != w.len() {
            return Err(Error::DimensionMismatch {
                left: p.len(),
                right: w.len(),
            });
        }
        let knots = knots(&w);
        Ok(Self { p, w, knots })
    }

    /// Unweighted OWA (uniform importances).
    pub fn owa(w: WeightVector) -> Result<Self> {
        let p = ImportanceVector::uniform(w.len())?;
        Self::new(p, w)
    }

    /// The single-object measure, where the score is the plain distance.
    pub fn single() -> Self {
        Self::owa(WeightVector(Box::new([1.0]))).expect("unit weight is valid")
    }

    pub fn arity(&self) -> usize {
        self.w.len()
    }

    pub fn importances(&self) -> &ImportanceVector {
        &self.p
    }

    pub fn weights(&self) -> &WeightVector {
        &self.w
    }

    /// Whether this is an unfairness measure (nondecreasing rank weights).
    pub fn is_unfairness(&self) -> bool {
        self.w.is_nondecreasing()
    }

    pub fn phi(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::InvalidArgument(format!(
                "phi argument {t} outside [0, 1]"
            )));
        }
        Ok(interpolate(&self.knots, t))
    }

    fn check_len(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.arity() {
            return Err(Error::DimensionMismatch {
                left: x.len(),
                right: self.arity(),
            });
        }
        Ok(())
    }

    pub fn wowa(&self, x: &[f64]) -> Result<f64> {
        self.check_len(x)?;
        Ok(self.eval(x, SortOrder::Ascending))
    }

    /// Evaluates the facet row selected by sorting `x` in `order`.
    ///
    /// For nondecreasing `w`, the ascending facet is the largest of all `m!`
    /// rows (and equals [`WowaMeasure::wowa`]) while the descending facet is
    /// the smallest.
    pub fn wowa_facet(&self, x: &[f64], order: SortOrder) -> Result<f64> {
        self.check_len(x)?;
        Ok(self.eval(x, order))
    }

    #[inline]
    pub(crate) fn eval(&self, x: &[f64], order: SortOrder) -> f64 {
        debug_assert_eq!(x.len(), self.arity());
        let m = x.len();
        if m == 1 {
            return x[0];
        }
        let mut sigma: SmallVec<[usize; 8]> = (0..m).collect();
        // stable: ties keep original index order
        match order {
            SortOrder::Ascending => sigma.sort_by(|&a, &b| x[a].total_cmp(&x[b])),
            SortOrder::Descending => sigma.sort_by(|&a, &b| x[b].total_cmp(&x[a])),
        }
        let p = self.p.as_slice();
        let mut tail = 0.0;
        let mut phi_tail = 0.0;
        let mut sum = 0.0;
        for &j in sigma.iter().rev() {
            tail += p[j];
            let phi_next = interpolate(&self.knots, tail);
            sum += (phi_next - phi_tail) * x[j];
            phi_tail = phi_next;
        }
        sum
    }
}

/// Free-function form of [`WowaMeasure::wowa`].
pub fn wowa(x: &[f64], measure: &WowaMeasure) -> Result<f64> {
    measure.wowa(x)
}

/// Free-function form of [`WowaMeasure::wowa_facet`].
pub fn wowa_facet(x: &[f64], measure: &WowaMeasure, order: SortOrder) -> Result<f64> {
    measure.wowa_facet(x, order)
}
