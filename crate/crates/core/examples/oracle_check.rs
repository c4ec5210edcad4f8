// Cross-checking the solver with the exhaustive grid search.

use fpp::solver::oracle;
use fpp::{build_matrix, make_tfn, solve, Judgment, SolverConfig};

fn main() {
    let cfg = SolverConfig::default();
    // B/A is held at 4–5 while A ≈ C ≈ B: the bands cannot all be met
    let m = build_matrix(
        &["A", "B", "C"],
        [
            Judgment::new("A", "B", make_tfn(4.0, 4.5, 5.0).unwrap()),
            Judgment::new("A", "C", make_tfn(0.9, 1.0, 1.1).unwrap()),
            Judgment::new("C", "B", make_tfn(0.9, 1.0, 1.1).unwrap()),
        ],
    )
    .unwrap();

    let exact = solve(&m, &cfg).unwrap();
    println!("solver  lambda {:+.6}", exact.lambda);
    for steps in [100, 500, 2000] {
        let grid = oracle(&m, steps, cfg.epsilon_w).unwrap();
        println!(
            "grid {steps:>4} lambda {:+.6}  gap {:.1e}",
            grid.lambda,
            exact.lambda - grid.lambda
        );
    }
}
