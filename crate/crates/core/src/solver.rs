//! Crisp priorities from a fuzzy comparison matrix.
//!
//! The solver maximizes the consistency index `λ`: the smallest membership
//! degree of any weight ratio `w_i / w_j` in its judgment band, over weights
//! on the probability simplex. For a fixed `λ` the membership conditions
//!
//! ```text
//! (m − l)·λ·w_j − w_i + l·w_j ≤ 0
//! (u − m)·λ·w_j + w_i − u·w_j ≤ 0
//! ```
//!
//! are linear in `w`, so `λ` is found by bisection with a phase-1 simplex
//! probe at each step.

use serde::Serialize;
use thiserror::Error;

use crate::judgments::FuzzyComparisonMatrix;
use crate::simplex::{FeasibilityProblem, Relation, SimplexError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("no convergence: {0}")]
    NotConverged(String),
    #[error("numerical failure in feasibility probe at lambda = {lambda}: {source}")]
    NumericalFailure {
        lambda: f64,
        #[source]
        source: SimplexError,
    },
    #[error("grid oracle supports at most 4 items, got {0}")]
    TooLarge(usize),
    #[error("grid oracle needs at least 100 steps, got {0}")]
    GridTooCoarse(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    /// Bisection stops once the bracket on `λ` is this narrow.
    pub lambda_tolerance: f64,
    /// Lower bound on every weight; stands in for strict positivity.
    pub epsilon_w: f64,
    /// How many times the lower end of the bracket may be doubled.
    pub max_expansions: usize,
    /// Cap on bisection steps.
    pub max_iterations: usize,
}

impl SolverConfig {
    pub const DEFAULT_LAMBDA_TOLERANCE: f64 = 1e-9;
    pub const DEFAULT_EPSILON_W: f64 = 1e-6;

    pub fn with_lambda_tolerance(mut self, tol: f64) -> Self {
        self.lambda_tolerance = tol;
        self
    }

    pub fn with_epsilon_w(mut self, eps: f64) -> Self {
        self.epsilon_w = eps;
        self
    }

    pub fn validate_for(&self, n: usize) -> Result<(), SolveError> {
        if !(self.lambda_tolerance > 0.0 && self.lambda_tolerance.is_finite()) {
            return Err(SolveError::InvalidConfig(format!(
                "lambda tolerance must be positive, got {}",
                self.lambda_tolerance
            )));
        }
        if !(self.epsilon_w > 0.0 && self.epsilon_w * (n as f64) < 1.0) {
            return Err(SolveError::InvalidConfig(format!(
                "epsilon_w must lie in (0, 1/{n}), got {}",
                self.epsilon_w
            )));
        }
        Ok(())
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            lambda_tolerance: Self::DEFAULT_LAMBDA_TOLERANCE,
            epsilon_w: Self::DEFAULT_EPSILON_W,
            max_expansions: 60,
            max_iterations: 200,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrioritizationResult {
    pub weights: Vec<f64>,
    /// Consistency index. Positive when every ratio lands inside its band.
    pub lambda: f64,
    /// Feasibility probes performed.
    pub iterations: usize,
    /// Largest constraint violation of `(weights, lambda)`.
    pub residual: f64,
}

impl PrioritizationResult {
    /// A group with a single member: weight 1, `λ = 1`.
    pub fn singleton() -> Self {
        Self {
            weights: vec![1.0],
            lambda: 1.0,
            iterations: 0,
            residual: 0.0,
        }
    }
}

/// Bounds `(lo, hi)` that `λ` places on the ratio `w_i / w_j` for judgment `(l, m, u)`.
fn ratio_bounds(l: f64, m: f64, u: f64, lambda: f64) -> (f64, f64) {
    (l + (m - l) * lambda, u - (u - m) * lambda)
}

/// Looks for weights on the simplex (each at least `epsilon_w`) meeting every
/// judgment with membership at least `lambda`.
pub fn feasible_at(
    matrix: &FuzzyComparisonMatrix,
    lambda: f64,
    config: &SolverConfig,
) -> Result<Option<Vec<f64>>, SolveError> {
    let n = matrix.len();
    config.validate_for(n)?;
    let eps = config.epsilon_w;

    // shift w = v + eps so the floor becomes v >= 0
    let mut problem = FeasibilityProblem::new(n);
    for (i, j, t) in matrix.judged_pairs() {
        let (lo, hi) = ratio_bounds(t.lower(), t.modal(), t.upper(), lambda);
        // -w_i + lo w_j <= 0
        let mut row = vec![0.0; n];
        row[i] = -1.0;
        row[j] = lo;
        problem.add_row(row, Relation::LessEq, eps * (1.0 - lo));
        // w_i - hi w_j <= 0
        let mut row = vec![0.0; n];
        row[i] = 1.0;
        row[j] = -hi;
        problem.add_row(row, Relation::LessEq, eps * (hi - 1.0));
    }
    problem.add_row(vec![1.0; n], Relation::Equal, 1.0 - eps * n as f64);

    let outcome = problem
        .solve()
        .map_err(|source| SolveError::NumericalFailure { lambda, source })?;
    Ok(outcome
        .point
        .map(|v| v.into_iter().map(|x| x + eps).collect()))
}

/// Largest violation of the membership constraints, the simplex equality
/// and the weight floor at `(weights, lambda)`.
pub fn constraint_residual(
    matrix: &FuzzyComparisonMatrix,
    weights: &[f64],
    lambda: f64,
    epsilon_w: f64,
) -> f64 {
    let mut worst = (weights.iter().sum::<f64>() - 1.0).abs();
    for &w in weights {
        worst = worst.max(epsilon_w - w);
    }
    for (i, j, t) in matrix.judged_pairs() {
        let (lo, hi) = ratio_bounds(t.lower(), t.modal(), t.upper(), lambda);
        worst = worst
            .max(-weights[i] + lo * weights[j])
            .max(weights[i] - hi * weights[j]);
    }
    worst.max(0.0)
}

/// Maximizes the consistency index over the weight simplex.
///
/// The bracket starts at `[-2, 1]`; `λ = 1` is probed first since no
/// judgment can be satisfied beyond its modal value. The lower end is
/// doubled until feasible, then the bracket is bisected down to
/// `lambda_tolerance`. The reported `λ` is the feasible end of the final
/// bracket and the weights are its witness.
pub fn solve(
    matrix: &FuzzyComparisonMatrix,
    config: &SolverConfig,
) -> Result<PrioritizationResult, SolveError> {
    config.validate_for(matrix.len())?;
    let mut probes = 0;
    let mut probe = |lambda: f64| {
        probes += 1;
        feasible_at(matrix, lambda, config)
    };

    if let Some(w) = probe(1.0)? {
        return Ok(finish(matrix, config, w, 1.0, 1));
    }

    let mut lo = -2.0;
    let mut expansions = 0;
    let mut witness = loop {
        if let Some(w) = probe(lo)? {
            break w;
        }
        expansions += 1;
        if expansions > config.max_expansions {
            return Err(SolveError::NotConverged(format!(
                "no feasible lambda down to {lo} after {} expansions",
                config.max_expansions
            )));
        }
        lo *= 2.0;
    };

    let mut hi = 1.0;
    let mut steps = 0;
    while hi - lo > config.lambda_tolerance {
        if steps >= config.max_iterations {
            return Err(SolveError::NotConverged(format!(
                "bracket [{lo}, {hi}] still wider than {} after {steps} bisection steps",
                config.lambda_tolerance
            )));
        }
        steps += 1;
        let mid = 0.5 * (lo + hi);
        match probe(mid)? {
            Some(w) => {
                lo = mid;
                witness = w;
            }
            None => hi = mid,
        }
    }
    Ok(finish(matrix, config, witness, lo, probes))
}

fn finish(
    matrix: &FuzzyComparisonMatrix,
    config: &SolverConfig,
    weights: Vec<f64>,
    lambda: f64,
    iterations: usize,
) -> PrioritizationResult {
    let residual = constraint_residual(matrix, &weights, lambda, config.epsilon_w);
    PrioritizationResult {
        weights,
        lambda,
        iterations,
        residual,
    }
}

/// Smallest membership degree of `w_i / w_j` over all judged pairs.
pub fn min_membership(matrix: &FuzzyComparisonMatrix, weights: &[f64]) -> f64 {
    matrix
        .judged_pairs()
        .map(|(i, j, t)| t.membership(weights[i] / weights[j]))
        .fold(f64::INFINITY, f64::min)
}

/// Best grid point found by [`oracle`].
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub lambda: f64,
    pub weights: Vec<f64>,
}

/// Exhaustive barycentric grid search for the max-min membership.
///
/// Grid point `k` (with `Σ k = grid_steps`) maps to
/// `w = ε + (1 − nε)·k / grid_steps`, so every candidate lies on the
/// simplex above the weight floor. The result never exceeds the true
/// optimum. Cost grows as `grid_steps^(n−1)`; limited to `n ≤ 4`.
pub fn oracle(
    matrix: &FuzzyComparisonMatrix,
    grid_steps: usize,
    epsilon_w: f64,
) -> Result<OracleResult, SolveError> {
    let n = matrix.len();
    if n > 4 {
        return Err(SolveError::TooLarge(n));
    }
    if grid_steps < 100 {
        return Err(SolveError::GridTooCoarse(grid_steps));
    }
    let scale = (1.0 - n as f64 * epsilon_w) / grid_steps as f64;
    let mut counts = vec![0usize; n];
    let mut weights = vec![0.0; n];
    let mut best = OracleResult {
        lambda: f64::NEG_INFINITY,
        weights: vec![1.0 / n as f64; n],
    };
    visit(0, grid_steps, &mut counts, &mut |counts| {
        for (w, &k) in weights.iter_mut().zip(counts) {
            *w = epsilon_w + scale * k as f64;
        }
        let value = min_membership(matrix, &weights);
        if value > best.lambda {
            best.lambda = value;
            best.weights.copy_from_slice(&weights);
        }
    });
    Ok(best)
}

fn visit(pos: usize, remaining: usize, counts: &mut [usize], f: &mut dyn FnMut(&[usize])) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        f(counts);
        return;
    }
    for k in 0..=remaining {
        counts[pos] = k;
        visit(pos + 1, remaining - k, counts, f);
    }
}

/// [`oracle`] with the default weight floor, returning only `λ`.
pub fn oracle_lambda(matrix: &FuzzyComparisonMatrix, grid_steps: usize) -> Result<f64, SolveError> {
    oracle(matrix, grid_steps, SolverConfig::DEFAULT_EPSILON_W).map(|r| r.lambda)
}
