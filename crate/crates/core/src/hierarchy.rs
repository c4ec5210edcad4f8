//! Criteria trees, local-to-global weight composition and ranking.

use std::collections::{BTreeMap, HashSet};
use std::thread;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::judgments::FuzzyComparisonMatrix;
use crate::solver::{self, PrioritizationResult, SolveError, SolverConfig};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HierarchyError {
    #[error("node id {0:?} appears more than once")]
    DuplicateId(String),
    #[error("group {0:?} has no comparison matrix")]
    MissingMatrix(String),
    #[error("matrix for {parent:?} covers {found:?}, expected children {expected:?}")]
    ChildMismatch {
        parent: String,
        expected: Vec<String>,
        found: Vec<String>,
    },
    #[error("no local weight for {0:?}")]
    MissingWeight(String),
    #[error("no global weight for leaf {0:?}")]
    MissingGlobal(String),
    #[error("solving group {group:?}: {source}")]
    Solve {
        group: String,
        #[source]
        source: SolveError,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionNode {
    pub id: String,
    #[serde(default)]
    pub label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<CriterionNode>,
}

impl CriterionNode {
    pub fn leaf(id: impl Into<String>, label: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            label: label.into(),
            children: Vec::new(),
        }
    }

    pub fn group(
        id: impl Into<String>,
        label: impl Into<String>,
        children: Vec<CriterionNode>,
    ) -> Self {
        Self {
            id: id.into(),
            label: label.into(),
            children,
        }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn child_ids(&self) -> Vec<String> {
        self.children.iter().map(|c| c.id.clone()).collect()
    }

    /// Pre-order traversal including `self`.
    pub fn iter(&self) -> impl Iterator<Item = &CriterionNode> {
        let mut stack = vec![self];
        std::iter::from_fn(move || {
            let node = stack.pop()?;
            stack.extend(node.children.iter().rev());
            Some(node)
        })
    }

    /// Leaves in declaration order.
    pub fn leaves(&self) -> impl Iterator<Item = &CriterionNode> {
        self.iter().filter(|n| n.is_leaf())
    }

    /// Nodes that have children, in declaration order.
    pub fn groups(&self) -> impl Iterator<Item = &CriterionNode> {
        self.iter().filter(|n| !n.is_leaf())
    }

    pub fn find(&self, id: &str) -> Option<&CriterionNode> {
        self.iter().find(|n| n.id == id)
    }

    /// Parent id of every non-root node.
    pub fn parents(&self) -> BTreeMap<String, String> {
        self.groups()
            .flat_map(|g| g.children.iter().map(move |c| (c.id.clone(), g.id.clone())))
            .collect()
    }

    /// Number of nodes below the root.
    pub fn criteria_count(&self) -> usize {
        self.iter().count() - 1
    }

    pub fn check_unique_ids(&self) -> Result<(), HierarchyError> {
        let mut seen = HashSet::new();
        for node in self.iter() {
            if !seen.insert(node.id.as_str()) {
                return Err(HierarchyError::DuplicateId(node.id.clone()));
            }
        }
        Ok(())
    }
}

/// Local weights and per-group results of solving every group in a tree.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HierarchySolution {
    /// Weight of each non-root node within its sibling group.
    pub local: BTreeMap<String, f64>,
    /// Consistency index of each group.
    pub lambda: BTreeMap<String, f64>,
    pub results: BTreeMap<String, PrioritizationResult>,
}

fn solve_group(
    group: &CriterionNode,
    matrices: &BTreeMap<String, FuzzyComparisonMatrix>,
    config: &SolverConfig,
) -> Result<PrioritizationResult, HierarchyError> {
    if group.children.len() == 1 {
        return Ok(PrioritizationResult::singleton());
    }
    let matrix = matrices
        .get(&group.id)
        .ok_or_else(|| HierarchyError::MissingMatrix(group.id.clone()))?;
    let expected = group.child_ids();
    if matrix.items() != expected.as_slice() {
        return Err(HierarchyError::ChildMismatch {
            parent: group.id.clone(),
            expected,
            found: matrix.items().to_vec(),
        });
    }
    solver::solve(matrix, config).map_err(|source| HierarchyError::Solve {
        group: group.id.clone(),
        source,
    })
}

/// Solves the matrix of every group; singleton groups get weight 1 and `λ = 1`.
pub fn solve_hierarchy(
    root: &CriterionNode,
    matrices: &BTreeMap<String, FuzzyComparisonMatrix>,
    config: &SolverConfig,
) -> Result<HierarchySolution, HierarchyError> {
    solve_hierarchy_with(root, matrices, config, false)
}

/// [`solve_hierarchy`], optionally solving groups on separate threads.
pub fn solve_hierarchy_with(
    root: &CriterionNode,
    matrices: &BTreeMap<String, FuzzyComparisonMatrix>,
    config: &SolverConfig,
    parallel: bool,
) -> Result<HierarchySolution, HierarchyError> {
    root.check_unique_ids()?;
    let groups: Vec<&CriterionNode> = root.groups().collect();
    let outcomes: Vec<Result<PrioritizationResult, HierarchyError>> = if parallel {
        thread::scope(|s| {
            let handles: Vec<_> = groups
                .iter()
                .map(|g| s.spawn(move || solve_group(g, matrices, config)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("group solver panicked"))
                .collect()
        })
    } else {
        groups
            .iter()
            .map(|g| solve_group(g, matrices, config))
            .collect()
    };

    let mut solution = HierarchySolution::default();
    for (group, outcome) in groups.into_iter().zip(outcomes) {
        let result = outcome?;
        for (child, &w) in group.children.iter().zip(&result.weights) {
            solution.local.insert(child.id.clone(), w);
        }
        solution.lambda.insert(group.id.clone(), result.lambda);
        solution.results.insert(group.id.clone(), result);
    }
    Ok(solution)
}

/// Global weight of each leaf: the product of local weights on its path.
///
/// The root carries weight 1 unless `local` says otherwise. With
/// `renormalize`, each sibling group is first scaled to sum to 1.
pub fn global_weights(
    local: &BTreeMap<String, f64>,
    root: &CriterionNode,
    renormalize: bool,
) -> Result<BTreeMap<String, f64>, HierarchyError> {
    let mut out = BTreeMap::new();
    let root_weight = local.get(&root.id).copied().unwrap_or(1.0);
    descend(root, root_weight, local, renormalize, &mut out)?;
    Ok(out)
}

fn descend(
    node: &CriterionNode,
    weight: f64,
    local: &BTreeMap<String, f64>,
    renormalize: bool,
    out: &mut BTreeMap<String, f64>,
) -> Result<(), HierarchyError> {
    if node.is_leaf() {
        out.insert(node.id.clone(), weight);
        return Ok(());
    }
    let weights = node
        .children
        .iter()
        .map(|c| {
            local
                .get(&c.id)
                .copied()
                .ok_or_else(|| HierarchyError::MissingWeight(c.id.clone()))
        })
        .collect::<Result<Vec<f64>, _>>()?;
    let divisor = if renormalize {
        weights.iter().sum::<f64>()
    } else {
        1.0
    };
    for (child, w) in node.children.iter().zip(weights) {
        descend(child, weight * w / divisor, local, renormalize, out)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedLeaf {
    pub id: String,
    pub parent: String,
    pub local: Option<f64>,
    pub global: f64,
    pub rank: usize,
}

/// Leaves with global weights and ranks, listed in declaration order.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct GlobalRanking {
    pub entries: Vec<RankedLeaf>,
    pub group_lambda: BTreeMap<String, f64>,
}

impl GlobalRanking {
    pub fn get(&self, id: &str) -> Option<&RankedLeaf> {
        self.entries.iter().find(|e| e.id == id)
    }

    /// Entries sorted by rank.
    pub fn by_rank(&self) -> Vec<&RankedLeaf> {
        let mut v: Vec<&RankedLeaf> = self.entries.iter().collect();
        v.sort_by_key(|e| e.rank);
        v
    }
}

/// Ranks leaves by descending global weight; ties go to the leaf declared first.
pub fn rank(
    globals: &BTreeMap<String, f64>,
    root: &CriterionNode,
) -> Result<GlobalRanking, HierarchyError> {
    let parents = root.parents();
    let mut entries = root
        .leaves()
        .map(|leaf| {
            let global = globals
                .get(&leaf.id)
                .copied()
                .ok_or_else(|| HierarchyError::MissingGlobal(leaf.id.clone()))?;
            Ok(RankedLeaf {
                id: leaf.id.clone(),
                parent: parents.get(&leaf.id).cloned().unwrap_or_default(),
                local: None,
                global,
                rank: 0,
            })
        })
        .collect::<Result<Vec<_>, HierarchyError>>()?;

    let mut order: Vec<usize> = (0..entries.len()).collect();
    // stable, so equal weights keep declaration order
    order.sort_by(|&a, &b| entries[b].global.total_cmp(&entries[a].global));
    for (position, &k) in order.iter().enumerate() {
        entries[k].rank = position + 1;
    }
    Ok(GlobalRanking {
        entries,
        group_lambda: BTreeMap::new(),
    })
}

/// Global weights plus ranking, with local weights and group indices attached.
pub fn compose(
    root: &CriterionNode,
    local: &BTreeMap<String, f64>,
    lambda: &BTreeMap<String, f64>,
    renormalize: bool,
) -> Result<GlobalRanking, HierarchyError> {
    let globals = global_weights(local, root, renormalize)?;
    let mut ranking = rank(&globals, root)?;
    for entry in &mut ranking.entries {
        entry.local = local.get(&entry.id).copied();
    }
    ranking.group_lambda = lambda.clone();
    Ok(ranking)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::judgments::{build_matrix, Judgment};
    use crate::tfn::make_tfn;
    use proptest::prelude::*;

    fn two_level() -> CriterionNode {
        CriterionNode::group(
            "G",
            "goal",
            vec![
                CriterionNode::group(
                    "C1",
                    "one",
                    vec![
                        CriterionNode::leaf("C11", ""),
                        CriterionNode::leaf("C12", ""),
                    ],
                ),
                CriterionNode::group("C2", "two", vec![CriterionNode::leaf("C21", "")]),
            ],
        )
    }

    fn pair(a: &str, b: &str) -> FuzzyComparisonMatrix {
        build_matrix(
            &[a, b],
            [Judgment::new(a, b, make_tfn(2.0, 3.0, 4.0).unwrap())],
        )
        .unwrap()
    }

    fn weights(pairs: &[(&str, f64)]) -> BTreeMap<String, f64> {
        pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect()
    }

    #[test]
    fn traversal_order() {
        let t = two_level();
        let ids: Vec<&str> = t.iter().map(|n| n.id.as_str()).collect();
        assert_eq!(ids, ["G", "C1", "C11", "C12", "C2", "C21"]);
        let leaves: Vec<&str> = t.leaves().map(|n| n.id.as_str()).collect();
        assert_eq!(leaves, ["C11", "C12", "C21"]);
        assert_eq!(t.criteria_count(), 5);
        assert_eq!(t.parents()["C21"], "C2");
    }

    #[test]
    fn duplicate_ids_rejected() {
        let t = CriterionNode::group(
            "G",
            "",
            vec![CriterionNode::leaf("A", ""), CriterionNode::leaf("A", "")],
        );
        assert_eq!(
            t.check_unique_ids(),
            Err(HierarchyError::DuplicateId("A".into()))
        );
    }

    #[test]
    fn solves_each_group_and_singletons() {
        let t = two_level();
        let mut mats = BTreeMap::new();
        mats.insert("G".to_string(), pair("C1", "C2"));
        mats.insert("C1".to_string(), pair("C11", "C12"));
        let sol = solve_hierarchy(&t, &mats, &SolverConfig::default()).unwrap();
        assert_eq!(sol.local.len(), 5);
        assert_eq!(sol.lambda.len(), 3);
        assert_eq!(sol.local["C21"], 1.0);
        assert_eq!(sol.lambda["C2"], 1.0);
        assert!((sol.local["C1"] - 0.75).abs() < 1e-9);

        let par = solve_hierarchy_with(&t, &mats, &SolverConfig::default(), true).unwrap();
        assert_eq!(par, sol);
    }

    #[test]
    fn matrix_errors() {
        let t = two_level();
        let mut mats = BTreeMap::new();
        mats.insert("G".to_string(), pair("C1", "C2"));
        assert_eq!(
            solve_hierarchy(&t, &mats, &SolverConfig::default()),
            Err(HierarchyError::MissingMatrix("C1".into()))
        );
        mats.insert("C1".to_string(), pair("C12", "C11"));
        assert!(matches!(
            solve_hierarchy(&t, &mats, &SolverConfig::default()),
            Err(HierarchyError::ChildMismatch { .. })
        ));
    }

    #[test]
    fn product_rule() {
        let t = two_level();
        let local = weights(&[
            ("C1", 0.112142),
            ("C11", 0.458452),
            ("C12", 0.554126),
            ("C2", 0.9),
            ("C21", 1.0),
        ]);
        let g = global_weights(&local, &t, false).unwrap();
        assert!((g["C11"] - 0.051412).abs() < 1e-6);
        assert_eq!(g["C21"], 0.9);

        let g = global_weights(&local, &t, true).unwrap();
        let total: f64 = g.values().sum();
        assert!((total - 1.0).abs() < 1e-12);

        let mut partial = local.clone();
        partial.remove("C12");
        assert_eq!(
            global_weights(&partial, &t, false),
            Err(HierarchyError::MissingWeight("C12".into()))
        );
    }

    #[test]
    fn single_level_global_equals_local() {
        let t = CriterionNode::group(
            "G",
            "",
            vec![CriterionNode::leaf("A", ""), CriterionNode::leaf("B", "")],
        );
        let local = weights(&[("A", 0.3), ("B", 0.7)]);
        assert_eq!(global_weights(&local, &t, false).unwrap(), local);
    }

    #[test]
    fn ties_and_single_leaf() {
        let t = CriterionNode::group(
            "G",
            "",
            vec![
                CriterionNode::leaf("A", ""),
                CriterionNode::leaf("B", ""),
                CriterionNode::leaf("C", ""),
            ],
        );
        let r = rank(&weights(&[("A", 0.25), ("B", 0.5), ("C", 0.25)]), &t).unwrap();
        let ranks: Vec<usize> = r.entries.iter().map(|e| e.rank).collect();
        assert_eq!(ranks, [2, 1, 3]);

        let t = CriterionNode::group("G", "", vec![CriterionNode::leaf("A", "")]);
        let r = rank(&weights(&[("A", 1.0)]), &t).unwrap();
        assert_eq!(r.entries[0].rank, 1);

        assert_eq!(
            rank(&BTreeMap::new(), &t),
            Err(HierarchyError::MissingGlobal("A".into()))
        );
    }

    #[test]
    fn equal_locals_split_parent_evenly() {
        let t = CriterionNode::group(
            "G",
            "",
            vec![
                CriterionNode::group(
                    "X",
                    "",
                    vec![
                        CriterionNode::leaf("X1", ""),
                        CriterionNode::leaf("X2", ""),
                        CriterionNode::leaf("X3", ""),
                    ],
                ),
                CriterionNode::group(
                    "Y",
                    "",
                    vec![CriterionNode::leaf("Y1", ""), CriterionNode::leaf("Y2", "")],
                ),
            ],
        );
        let local = weights(&[
            ("X", 0.4),
            ("Y", 0.4),
            ("X1", 0.2),
            ("X2", 0.2),
            ("X3", 0.2),
            ("Y1", 0.9),
            ("Y2", 0.9),
        ]);
        let g = global_weights(&local, &t, true).unwrap();
        for id in ["X1", "X2", "X3"] {
            assert!((g[id] - 0.5 / 3.0).abs() < 1e-12);
        }
        for id in ["Y1", "Y2"] {
            assert!((g[id] - 0.25).abs() < 1e-12);
        }
    }

    fn arb_tree_weights() -> impl Strategy<Value = (CriterionNode, BTreeMap<String, f64>)> {
        proptest::collection::vec(1usize..5, 1..5).prop_flat_map(|sizes| {
            let total: usize = sizes.len() + sizes.iter().sum::<usize>();
            proptest::collection::vec(0.01f64..1.0, total).prop_map(move |ws| {
                let mut it = ws.into_iter();
                let mut local = BTreeMap::new();
                let groups = sizes
                    .iter()
                    .enumerate()
                    .map(|(g, &k)| {
                        let gid = format!("C{g}");
                        local.insert(gid.clone(), it.next().unwrap());
                        let kids = (0..k)
                            .map(|c| {
                                let cid = format!("C{g}_{c}");
                                local.insert(cid.clone(), it.next().unwrap());
                                CriterionNode::leaf(cid, "")
                            })
                            .collect();
                        CriterionNode::group(gid, "", kids)
                    })
                    .collect();
                (CriterionNode::group("G", "", groups), local)
            })
        })
    }

    proptest! {
        #[test]
        fn renormalized_globals_sum_to_one((tree, local) in arb_tree_weights()) {
            let g = global_weights(&local, &tree, true).unwrap();
            prop_assert!((g.values().sum::<f64>() - 1.0).abs() < 1e-9);
        }

        #[test]
        fn raising_a_local_weight_never_lowers_rank(
            (tree, local) in arb_tree_weights(), pick in any::<prop::sample::Index>(), bump in 0.0f64..1.0
        ) {
            let leaves: Vec<String> = tree.leaves().map(|l| l.id.clone()).collect();
            let id = &leaves[pick.index(leaves.len())];
            let before = rank(&global_weights(&local, &tree, false).unwrap(), &tree).unwrap();
            let mut raised = local.clone();
            *raised.get_mut(id).unwrap() += bump;
            let after = rank(&global_weights(&raised, &tree, false).unwrap(), &tree).unwrap();
            prop_assert!(after.get(id).unwrap().rank <= before.get(id).unwrap().rank);
        }
    }
}
