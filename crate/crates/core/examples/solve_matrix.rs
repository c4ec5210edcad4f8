// Solving one matrix: crisp weights and the consistency index.

use fpp::{build_matrix, make_tfn, solve, Judgment, SolverConfig};

fn main() {
    // every item judged "about twice" the next, and A about twice C as well:
    // no weights can meet all three modes at once
    let t = make_tfn(1.0, 2.0, 3.0).unwrap();
    let m = build_matrix(
        &["A", "B", "C"],
        [
            Judgment::new("A", "B", t),
            Judgment::new("B", "C", t),
            Judgment::new("A", "C", t),
        ],
    )
    .unwrap();

    let r = solve(&m, &SolverConfig::default()).unwrap();
    println!(
        "lambda   = {:.6}  (closed form {:.6})",
        r.lambda,
        (17f64.sqrt() - 3.0) / 2.0
    );
    println!(
        "weights  = {:?}",
        r.weights
            .iter()
            .map(|w| format!("{w:.5}"))
            .collect::<Vec<_>>()
    );
    println!("probes   = {}", r.iterations);
    println!("residual = {:.1e}", r.residual);

    // a looser tolerance needs fewer probes
    let quick = solve(&m, &SolverConfig::default().with_lambda_tolerance(1e-4)).unwrap();
    println!(
        "\ntolerance 1e-4: lambda {:.6} after {} probes",
        quick.lambda, quick.iterations
    );
}
