// A two-level criteria tree: solve each group, compose global weights, rank.

use std::collections::BTreeMap;

use fpp::{
    build_matrix, compose, make_tfn, solve_hierarchy, CriterionNode, Judgment, SolverConfig,
};

fn main() {
    let root = CriterionNode::group(
        "G",
        "choose a supplier",
        vec![
            CriterionNode::group(
                "Q",
                "quality",
                vec![
                    CriterionNode::leaf("Q1", "defects"),
                    CriterionNode::leaf("Q2", "audits"),
                ],
            ),
            CriterionNode::group(
                "D",
                "delivery",
                vec![CriterionNode::leaf("D1", "lead time")],
            ),
        ],
    );

    let band = |l, m, u| make_tfn(l, m, u).unwrap();
    let mut matrices = BTreeMap::new();
    matrices.insert(
        "G".to_string(),
        build_matrix(&["Q", "D"], [Judgment::new("Q", "D", band(1.0, 1.5, 2.0))]).unwrap(),
    );
    matrices.insert(
        "Q".to_string(),
        build_matrix(
            &["Q1", "Q2"],
            [Judgment::new("Q2", "Q1", band(2.0, 3.0, 4.0))],
        )
        .unwrap(),
    );
    // "D" has one child and needs no matrix

    let solution = solve_hierarchy(&root, &matrices, &SolverConfig::default()).unwrap();
    for (group, lambda) in &solution.lambda {
        println!("group {group}: lambda {lambda:.4}");
    }

    let ranking = compose(&root, &solution.local, &solution.lambda, false).unwrap();
    for leaf in ranking.by_rank() {
        println!(
            "{}. {:<3} local {:.4}  global {:.4}",
            leaf.rank,
            leaf.id,
            leaf.local.unwrap_or(1.0),
            leaf.global
        );
    }
}
