// Building comparison matrices: linguistic labels, crisp import with a spread
// policy, expert aggregation and diagnostics.

use fpp::{
    aggregate_experts, build_matrix, import_crisp, validate, Judgment, LinguisticScale,
    SpreadPolicy,
};

fn main() {
    let items = ["cost", "speed", "risk"];
    let scale = LinguisticScale::default();
    let label = |s: &str| scale.lookup(s).unwrap();

    // judgments may be given in either orientation
    let first = build_matrix(
        &items,
        [
            Judgment::new("cost", "speed", label("high")),
            Judgment::new("risk", "cost", label("low")),
            Judgment::new("speed", "risk", label("medium")),
        ],
    )
    .unwrap();
    println!("cost/speed = {}", first.judgment("cost", "speed").unwrap());
    println!("speed/cost = {}", first.judgment("speed", "cost").unwrap());

    // a second expert answers with crisp ratios, widened by +/- 1
    let policy = SpreadPolicy::default();
    let second = import_crisp(
        &items,
        &[
            Judgment::new("cost", "speed", 3.0),
            Judgment::new("cost", "risk", 2.0),
            Judgment::new("speed", "risk", 1.5),
        ],
        &policy,
    )
    .unwrap();
    println!("crisp 1.5 -> {}", second.judgment("speed", "risk").unwrap());
    // below a spread of 1 the lower bound is lifted to the floor
    let (band, clipped) = policy.fuzzify(0.5).unwrap();
    println!("crisp 0.5 -> {band} (clipped: {clipped})");

    let group = aggregate_experts(&[first, second]).unwrap();
    println!("\naggregated:");
    for (a, b, t) in group.judged_pairs() {
        println!("  {}/{} = {t}", group.items()[a], group.items()[b]);
    }
    println!("\n{}", validate(&group));
}
