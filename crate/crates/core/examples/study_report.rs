// Running a bundled study file end to end and rendering the report.

use fpp::report::{render, run_solve, Format, RunOptions};
use fpp::study::parse_study;

fn main() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/data/paper_study.json");
    let study = parse_study(&std::fs::read(path).unwrap()).unwrap();
    println!(
        "{} criteria, {} groups",
        study.hierarchy.criteria_count(),
        study.hierarchy.groups().count()
    );

    let report = run_solve(&study, &RunOptions::default()).unwrap();
    print!("{}", render(&report, Format::Table));

    // the same report as CSV, one row per leaf
    print!("\n{}", render(&report, Format::Csv));
}
