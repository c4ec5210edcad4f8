#![allow(dead_code)]

use fpp::{build_matrix, make_tfn, FuzzyComparisonMatrix, Judgment, LinguisticScale};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn items(n: usize) -> Vec<String> {
    (0..n).map(|k| format!("X{k}")).collect()
}

/// Weights whose consecutive ratios lie in [1.1, 2.0], shuffled.
pub fn random_weights<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let mut w = vec![1.0];
    for _ in 1..n {
        let last = *w.last().unwrap();
        w.push(last / rng.gen_range(1.1..2.0));
    }
    w.shuffle(rng);
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

/// Modally consistent matrix for `w`: each pair is judged in the orientation
/// whose ratio r exceeds 1, with band (r − 1, r, r + 1).
pub fn consistent_matrix(w: &[f64]) -> FuzzyComparisonMatrix {
    let ids = items(w.len());
    let mut js = Vec::new();
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            let (a, b) = if w[i] > w[j] { (i, j) } else { (j, i) };
            let r = w[a] / w[b];
            js.push(Judgment::new(
                ids[a].clone(),
                ids[b].clone(),
                make_tfn(r - 1.0, r, r + 1.0).unwrap(),
            ));
        }
    }
    build_matrix(&ids, js).unwrap()
}

/// Independent linguistic judgments from the default scale, random orientation.
pub fn linguistic_matrix<R: Rng>(rng: &mut R, n: usize) -> FuzzyComparisonMatrix {
    let scale = LinguisticScale::default();
    let ids = items(n);
    let mut js = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let band = scale.entries()[rng.gen_range(0..scale.len())].band;
            let (a, b) = if rng.gen_bool(0.5) { (i, j) } else { (j, i) };
            js.push(Judgment::new(ids[a].clone(), ids[b].clone(), band));
        }
    }
    build_matrix(&ids, js).unwrap()
}

pub fn symmetric_inconsistent() -> FuzzyComparisonMatrix {
    let t = make_tfn(1.0, 2.0, 3.0).unwrap();
    build_matrix(
        &["A", "B", "C"],
        [
            Judgment::new("A", "B", t),
            Judgment::new("B", "C", t),
            Judgment::new("A", "C", t),
        ],
    )
    .unwrap()
}

/// Bands containing the consistent ratios 2, 2, 4.
pub fn compatible() -> FuzzyComparisonMatrix {
    build_matrix(
        &["A", "B", "C"],
        [
            Judgment::new("A", "B", make_tfn(1.0, 2.0, 3.0).unwrap()),
            Judgment::new("B", "C", make_tfn(1.0, 2.0, 3.0).unwrap()),
            Judgment::new("A", "C", make_tfn(3.0, 4.0, 5.0).unwrap()),
        ],
    )
    .unwrap()
}

/// A/B is held at 4–5 while A ≈ C ≈ B within ±10 %.
pub fn incompatible() -> FuzzyComparisonMatrix {
    build_matrix(
        &["A", "B", "C"],
        [
            Judgment::new("A", "B", make_tfn(4.0, 4.5, 5.0).unwrap()),
            Judgment::new("A", "C", make_tfn(0.9, 1.0, 1.1).unwrap()),
            Judgment::new("C", "B", make_tfn(0.9, 1.0, 1.1).unwrap()),
        ],
    )
    .unwrap()
}
