//! Bounded k-best candidate pool ordered by `(score, id)`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::query::Radius;

/// Index of a point within its dataset.
pub type PointId = usize;

/// One ranked result.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Hit {
    pub id: PointId,
    pub score: f64,
}

impl Hit {
    /// Lexicographic `(score, id)` order: lower score first, lower id on ties.
    pub fn rank_cmp(&self, other: &Hit) -> Ordering {
        self.score
            .total_cmp(&other.score)
            .then(self.id.cmp(&other.id))
    }
}

#[derive(Clone, Copy, Debug)]
struct Entry(Hit);

impl PartialEq for Entry {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Entry {}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.rank_cmp(&other.0)
    }
}

/// Keeps the `k` best hits seen so far; the worst kept hit sits on top.
#[derive(Debug)]
pub struct KBest {
    k: usize,
    heap: BinaryHeap<Entry>,
}

impl KBest {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "k must be positive");
        Self {
            k,
            heap: BinaryHeap::with_capacity(k + 1),
        }
    }

    /// Offers a candidate; returns whether it was kept.
    pub fn offer(&mut self, id: PointId, score: f64) -> bool {
        let entry = Entry(Hit { id, score });
        if self.heap.len() < self.k {
            self.heap.push(entry);
            return true;
        }
        let mut worst = self.heap.peek_mut().expect("pool is full");
        if entry < *worst {
            *worst = entry;
            true
        } else {
            false
        }
    }

    /// The k-th best score once the pool is full.
    pub fn radius(&self) -> Radius {
        if self.heap.len() < self.k {
            Radius::Unbounded
        } else {
            Radius::Finite(self.heap.peek().expect("pool is full").0.score)
        }
    }

    pub fn len(&self) -> usize {
        self.heap.len()
    }

    pub fn is_empty(&self) -> bool {
        self.heap.is_empty()
    }

    pub fn into_sorted(self) -> Vec<Hit> {
        self.heap.into_sorted_vec().into_iter().map(|e| e.0).collect()
    }
}
