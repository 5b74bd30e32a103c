#![allow(dead_code)]

use kfn_core::{ImportanceVector, Point, WeightVector, WowaMeasure};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn simplex(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(0.01..1.0)).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|v| v / s).collect()
}

pub fn increasing_simplex(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let mut v = simplex(rng, m);
    v.sort_by(f64::total_cmp);
    v
}

pub fn random_unfairness(rng: &mut ChaCha8Rng, m: usize) -> WowaMeasure {
    WowaMeasure::new(
        ImportanceVector::new(simplex(rng, m)).unwrap(),
        WeightVector::new(increasing_simplex(rng, m)).unwrap(),
    )
    .unwrap()
}

pub fn gini2() -> WowaMeasure {
    WowaMeasure::owa(WeightVector::normalized(&[1.0, 3.0]).unwrap()).unwrap()
}

pub fn random_vectors(rng: &mut ChaCha8Rng, n: usize, d: usize) -> Vec<Point> {
    (0..n)
        .map(|_| Point::vector((0..d).map(|_| rng.gen::<f64>()).collect::<Vec<_>>()))
        .collect()
}

pub fn random_strings(rng: &mut ChaCha8Rng, n: usize, alphabet: &[u8], max_len: usize) -> Vec<Point> {
    (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=max_len);
            let s: String = (0..len)
                .map(|_| alphabet[rng.gen_range(0..alphabet.len())] as char)
                .collect();
            Point::text(s)
        })
        .collect()
}

/// `phi` evaluated straight from its definition: the knot values are
/// partial sums of the reversed weights, joined by straight lines.
pub fn phi_reference(w: &[f64], t: f64) -> f64 {
    let m = w.len();
    let knot = |i: usize| -> f64 { (1..=i).map(|k| w[m - k]).sum() };
    if t >= 1.0 {
        return 1.0;
    }
    let scaled = t * m as f64;
    let i = scaled.floor() as usize;
    let lo = knot(i);
    let hi = knot(i + 1);
    lo + (scaled - i as f64) * (hi - lo)
}

/// The facet row for permutation `sigma` (sigma[j] = criterion at rank j),
/// returned per criterion.
pub fn facet_row(p: &[f64], w: &[f64], sigma: &[usize]) -> Vec<f64> {
    let m = p.len();
    let mut row = vec![0.0; m];
    for j in 0..m {
        let from: f64 = sigma[j..].iter().map(|&i| p[i]).sum();
        let after: f64 = sigma[j + 1..].iter().map(|&i| p[i]).sum();
        row[sigma[j]] = phi_reference(w, from) - phi_reference(w, after);
    }
    row
}

/// WOWA from the definition, with an ascending argsort.
pub fn wowa_reference(p: &[f64], w: &[f64], x: &[f64]) -> f64 {
    let mut sigma: Vec<usize> = (0..x.len()).collect();
    sigma.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap());
    facet_row(p, w, &sigma).iter().zip(x).map(|(a, b)| a * b).sum()
}
