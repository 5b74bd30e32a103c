//! Points, the two concrete metrics and distance-computation counting.
//!
//! A dataset is homogeneous: either every point is a real vector of one
//! dimensionality (compared with the Euclidean distance) or every point is a
//! character string (compared with the Levenshtein distance). All distances
//! are reported as `f64`.

use std::fmt;

use crate::error::{Error, Result};

/// A database or query object.
#[derive(Clone, PartialEq)]
pub enum Point {
    Vector(Box<[f64]>),
    Text(Box<str>),
}

/// The shape shared by every point of a homogeneous dataset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Form {
    Vector { dim: usize },
    Text,
}

impl Form {
    fn name(self) -> &'static str {
        match self {
            Form::Vector { .. } => "vector",
            Form::Text => "string",
        }
    }

    /// Checks that `other` can be compared with points of this form.
    pub fn check(self, other: Form) -> Result<()> {
        match (self, other) {
            (Form::Vector { dim: a }, Form::Vector { dim: b }) if a != b => {
                Err(Error::DimensionMismatch { left: a, right: b })
            }
            (Form::Vector { .. }, Form::Vector { .. }) | (Form::Text, Form::Text) => Ok(()),
            _ => Err(Error::FormMismatch {
                expected: self.name(),
                found: other.name(),
            }),
        }
    }
}

impl Point {
    pub fn vector(coords: impl Into<Vec<f64>>) -> Self {
        Point::Vector(coords.into().into_boxed_slice())
    }

    pub fn text(symbols: impl Into<String>) -> Self {
        Point::Text(symbols.into().into_boxed_str())
    }

    pub fn form(&self) -> Form {
        match self {
            Point::Vector(c) => Form::Vector { dim: c.len() },
            Point::Text(_) => Form::Text,
        }
    }

    pub fn as_vector(&self) -> Option<&[f64]> {
        match self {
            Point::Vector(c) => Some(c),
            Point::Text(_) => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Point::Text(s) => Some(s),
            Point::Vector(_) => None,
        }
    }

    /// Metric value between two points of matching form.
    pub fn distance(&self, other: &Point) -> Result<f64> {
        match (self, other) {
            (Point::Vector(a), Point::Vector(b)) => euclidean(a, b),
            (Point::Text(a), Point::Text(b)) => Ok(levenshtein(a, b) as f64),
            _ => Err(Error::FormMismatch {
                expected: self.form().name(),
                found: other.form().name(),
            }),
        }
    }

    /// Distance for points already known to share a form.
    #[inline]
    pub(crate) fn distance_unchecked(&self, other: &Point) -> f64 {
        match (self, other) {
            (Point::Vector(a), Point::Vector(b)) => {
                debug_assert_eq!(a.len(), b.len());
                euclidean_raw(a, b)
            }
            (Point::Text(a), Point::Text(b)) => levenshtein(a, b) as f64,
            _ => unreachable!("dataset forms are validated before searching"),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Vector(c) => f.debug_list().entries(c.iter()).finish(),
            Point::Text(s) => write!(f, "{s:?}"),
        }
    }
}

/// Returns the common form of `points`, or an error if they are mixed or
/// contain non-finite coordinates. `None` for an empty slice.
pub fn common_form(points: &[Point]) -> Result<Option<Form>> {
    let Some(first) = points.first() else {
        return Ok(None);
    };
    let form = first.form();
    for p in points {
        form.check(p.form())?;
        if let Point::Vector(c) = p {
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidArgument(
                    "vector coordinates must be finite".into(),
                ));
            }
        }
    }
    Ok(Some(form))
}

pub fn euclidean(u: &[f64], v: &[f64]) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch {
            left: u.len(),
            right: v.len(),
        });
    }
    Ok(euclidean_raw(u, v))
}

#[inline]
fn euclidean_raw(u: &[f64], v: &[f64]) -> f64 {
    u.iter()
        .zip(v)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt()
}

/// Edit distance with unit-cost insertion, deletion and substitution.
pub fn levenshtein(a: &str, b: &str) -> usize {
    if a.is_ascii() && b.is_ascii() {
        edit_distance(a.as_bytes(), b.as_bytes())
    } else {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        edit_distance(&a, &b)
    }
}

fn edit_distance<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    if b.is_empty() {
        return a.len();
    }
    // single row over the shorter string
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, ca) in a.iter().enumerate() {
        let mut diag = row[0];
        row[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let above = row[j + 1];
            let cost = usize::from(ca != cb);
            row[j + 1] = (diag + cost).min(above + 1).min(row[j] + 1);
            diag = above;
        }
    }
    row[b.len()]
}

/// Number of metric evaluations performed by one query (or one build).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DistanceCounter {
    count: u64,
}

impl DistanceCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn reset(&mut self) {
        self.count = 0;
    }

    /// Evaluates the metric and records one computation.
    pub fn distance(&mut self, u: &Point, v: &Point) -> Result<f64> {
        let d = u.distance(v)?;
        self.count += 1;
        Ok(d)
    }

    #[inline]
    pub(crate) fn distance_unchecked(&mut self, u: &Point, v: &Point) -> f64 {
        self.count += 1;
        u.distance_unchecked(v)
    }
}
