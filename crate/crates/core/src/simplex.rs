//! Phase-1 simplex for small dense linear feasibility problems.
//!
//! Finds `x ≥ 0` satisfying a set of `≤`, `≥` and `=` rows by minimizing the
//! total artificial slack. Pivoting follows Bland's smallest-index rule, so
//! degenerate problems cannot cycle.

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    LessEq,
    GreaterEq,
    Equal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimplexError {
    #[error("row {row} has {got} coefficients, expected {expected}")]
    Dimension {
        row: usize,
        got: usize,
        expected: usize,
    },
    #[error("non-finite value in row {0}")]
    NonFinite(usize),
    #[error("pivot limit of {0} reached")]
    PivotLimit(usize),
    #[error("tableau broke down: {0}")]
    Breakdown(&'static str),
}

/// Artificial-slack optimum at or below which the rows count as satisfiable.
pub const FEASIBILITY_TOLERANCE: f64 = 1e-10;
const PIVOT_TOLERANCE: f64 = 1e-12;

/// Outcome of a phase-1 solve.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseOne {
    /// Witness point when feasible.
    pub point: Option<Vec<f64>>,
    /// Optimal total artificial slack.
    pub infeasibility: f64,
    pub pivots: usize,
}

/// Linear feasibility problem over `num_vars` non-negative variables.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityProblem {
    num_vars: usize,
    rows: Vec<Row>,
}

impl FeasibilityProblem {
    pub fn new(num_vars: usize) -> Self {
        Self {
            num_vars,
            rows: Vec::new(),
        }
    }

    pub fn add_row(&mut self, coeffs: Vec<f64>, relation: Relation, rhs: f64) {
        self.rows.push(Row {
            coeffs,
            relation,
            rhs,
        });
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// Runs phase 1 and reports a feasible point if one exists.
    pub fn solve(&self) -> Result<PhaseOne, SimplexError> {
        for (r, row) in self.rows.iter().enumerate() {
            if row.coeffs.len() != self.num_vars {
                return Err(SimplexError::Dimension {
                    row: r,
                    got: row.coeffs.len(),
                    expected: self.num_vars,
                });
            }
            if !row.rhs.is_finite() || row.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(SimplexError::NonFinite(r));
            }
        }
        Tableau::new(self).run()
    }
}

struct Tableau {
    num_vars: usize,
    num_cols: usize,
    // rows x (num_cols + 1), rhs in the last column
    cells: Vec<Vec<f64>>,
    // reduced costs for the phase-1 objective, objective value in the last slot
    cost: Vec<f64>,
    basis: Vec<usize>,
}

impl Tableau {
    fn new(problem: &FeasibilityProblem) -> Self {
        let n = problem.num_vars;
        let m = problem.rows.len();

        // normalize every row to a non-negative right-hand side
        let normalized: Vec<(Vec<f64>, Relation, f64)> = problem
            .rows
            .iter()
            .map(|row| {
                if row.rhs < 0.0 {
                    let flipped = match row.relation {
                        Relation::LessEq => Relation::GreaterEq,
                        Relation::GreaterEq => Relation::LessEq,
                        Relation::Equal => Relation::Equal,
                    };
                    (row.coeffs.iter().map(|c| -c).collect(), flipped, -row.rhs)
                } else {
                    (row.coeffs.clone(), row.relation, row.rhs)
                }
            })
            .collect();

        let num_slack = normalized
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::Equal)
            .count();
        let num_artificial = normalized
            .iter()
            .filter(|(_, rel, _)| *rel != Relation::LessEq)
            .count();
        let first_artificial = n + num_slack;
        let num_cols = first_artificial + num_artificial;

        let mut cells = vec![vec![0.0; num_cols + 1]; m];
        let mut basis = vec![0; m];
        let mut cost = vec![0.0; num_cols + 1];
        let (mut slack, mut artificial) = (n, first_artificial);
        for (r, (coeffs, relation, rhs)) in normalized.into_iter().enumerate() {
            let row = &mut cells[r];
            row[..n].copy_from_slice(&coeffs);
            row[num_cols] = rhs;
            match relation {
                Relation::LessEq => {
                    row[slack] = 1.0;
                    basis[r] = slack;
                    slack += 1;
                }
                Relation::GreaterEq | Relation::Equal => {
                    if relation == Relation::GreaterEq {
                        row[slack] = -1.0;
                        slack += 1;
                    }
                    row[artificial] = 1.0;
                    basis[r] = artificial;
                    artificial += 1;
                    // price out the artificial column
                    for (c, v) in cost.iter_mut().enumerate() {
                        if c < first_artificial || c == num_cols {
                            *v -= row[c];
                        }
                    }
                }
            }
        }
        // objective slot holds -z
        Self {
            num_vars: n,
            num_cols,
            cells,
            cost,
            basis,
        }
    }

    fn run(mut self) -> Result<PhaseOne, SimplexError> {
        let limit = 50 * (self.num_cols + self.cells.len()).max(100);
        let mut pivots = 0;
        loop {
            // Bland: lowest-index improving column
            let entering = (0..self.num_cols).find(|&c| self.cost[c] < -PIVOT_TOLERANCE);
            let Some(col) = entering else { break };

            let mut leaving: Option<(usize, f64)> = None;
            for (r, row) in self.cells.iter().enumerate() {
                let a = row[col];
                if a > PIVOT_TOLERANCE {
                    let ratio = row[self.num_cols] / a;
                    leaving = match leaving {
                        None => Some((r, ratio)),
                        Some((best, best_ratio)) => {
                            if ratio < best_ratio
                                || (ratio == best_ratio && self.basis[r] < self.basis[best])
                            {
                                Some((r, ratio))
                            } else {
                                Some((best, best_ratio))
                            }
                        }
                    };
                }
            }
            // phase-1 objective is bounded below by zero
            let Some((row, _)) = leaving else {
                return Err(SimplexError::Breakdown("unbounded phase-1 direction"));
            };

            self.pivot(row, col);
            pivots += 1;
            if pivots >= limit {
                return Err(SimplexError::PivotLimit(limit));
            }
            if !self.cost[self.num_cols].is_finite() {
                return Err(SimplexError::Breakdown("non-finite objective"));
            }
        }

        let infeasibility = (-self.cost[self.num_cols]).max(0.0);
        let point = (infeasibility <= FEASIBILITY_TOLERANCE).then(|| {
            let mut x = vec![0.0; self.num_vars];
            for (r, &b) in self.basis.iter().enumerate() {
                if b < self.num_vars {
                    x[b] = self.cells[r][self.num_cols].max(0.0);
                }
            }
            x
        });
        debug_assert!(self.basis.iter().all(|&b| b < self.num_cols));
        Ok(PhaseOne {
            point,
            infeasibility,
            pivots,
        })
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let width = self.num_cols + 1;
        let p = self.cells[row][col];
        for v in self.cells[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.cells[row].clone();
        for (r, other) in self.cells.iter_mut().enumerate() {
            if r == row {
                continue;
            }
            let f = other[col];
            if f != 0.0 {
                for c in 0..width {
                    other[c] -= f * pivot_row[c];
                }
                other[col] = 0.0;
            }
        }
        let f = self.cost[col];
        if f != 0.0 {
            for (c, p) in self.cost.iter_mut().zip(&pivot_row) {
                *c -= f * p;
            }
            self.cost[col] = 0.0;
        }
        self.basis[row] = col;
    }
}
