// Composing published local weights into a global ranking without solving.

use fpp::report::{render, run_replay, Format};
use fpp::study::parse_replay;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/paper_localweights.json");
    let file = parse_replay(&std::fs::read(path).unwrap()).unwrap();

    let report = run_replay(&file, false).unwrap();
    print!("{}", render(&report, Format::Table));

    let rescaled = run_replay(&file, true).unwrap();
    let total: f64 = rescaled.global.iter().map(|r| r.global).sum();
    println!("\nwith sibling groups rescaled the global weights sum to {total:.6}");
}
