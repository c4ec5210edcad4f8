//! Running a study end to end and rendering the result.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::hierarchy::{self, CriterionNode, GlobalRanking, HierarchyError};
use crate::judgments::SpreadPolicy;
use crate::solver::{self, SolveError, SolverConfig};
use crate::study::{ReplayFile, StudyErrors, StudyFile};

/// Grid resolution used by the optional oracle cross-check.
pub const ORACLE_GRID_STEPS: usize = 500;
/// Largest solver/oracle gap accepted by the cross-check.
pub const ORACLE_TOLERANCE: f64 = 5e-3;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Study(#[from] StudyErrors),
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
}

impl RunError {
    /// Process exit code: 2 when a solve failed to converge, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Hierarchy(HierarchyError::Solve {
                source: SolveError::NotConverged(_) | SolveError::NumericalFailure { .. },
                ..
            }) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    NegativeLambda {
        group: String,
        lambda: f64,
    },
    FloorClip {
        group: String,
        i: String,
        j: String,
        crisp: f64,
        floor: f64,
    },
    SingletonGroup {
        group: String,
    },
    OracleMismatch {
        group: String,
        solver: f64,
        oracle: f64,
    },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NegativeLambda { group, lambda } => write!(
                f,
                "NEGATIVE CONSISTENCY INDEX in group {group}: lambda = {lambda:.6}; the fuzzy judgments are strongly inconsistent"
            ),
            Warning::FloorClip { group, i, j, crisp, floor } => write!(
                f,
                "crisp judgment ({i}, {j}) = {crisp} in group {group}: lower bound clipped to floor {floor:.6}"
            ),
            Warning::SingletonGroup { group } => {
                write!(f, "group {group} has a single child; weight 1 and lambda 1 assigned")
            }
            Warning::OracleMismatch { group, solver, oracle } => write!(
                f,
                "group {group}: solver lambda {solver:.6} differs from grid oracle {oracle:.6}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupRow {
    pub id: String,
    pub label: String,
    pub local: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupTable {
    pub id: String,
    pub label: String,
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_lambda: Option<f64>,
    pub rows: Vec<GroupRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GlobalRow {
    pub id: String,
    pub label: String,
    pub group: String,
    pub local: f64,
    pub group_lambda: Option<f64>,
    pub global: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub renormalized: bool,
    pub groups: Vec<GroupTable>,
    pub global: Vec<GlobalRow>,
    pub warnings: Vec<Warning>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Table,
    Machine,
    Csv,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "table" => Ok(Format::Table),
            "machine" => Ok(Format::Machine),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format {other:?} (table, machine, csv)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RunOptions {
    pub config: SolverConfig,
    /// Replaces the study's own spread policy.
    pub policy: Option<SpreadPolicy>,
    pub renormalize: bool,
    /// Cross-check groups of at most three items against the grid oracle.
    pub oracle_check: bool,
    pub parallel: bool,
}

/// Solves every group of a study and assembles the report.
pub fn run_solve(study: &StudyFile, options: &RunOptions) -> Result<Report, RunError> {
    let policy = options.policy.unwrap_or_else(|| study.policy());
    let prepared = study.prepare(&policy)?;
    let solution = hierarchy::solve_hierarchy_with(
        &study.hierarchy,
        &prepared.matrices,
        &options.config,
        options.parallel,
    )?;

    let mut warnings: Vec<Warning> = prepared
        .clipped
        .iter()
        .map(|c| Warning::FloorClip {
            group: c.group.clone(),
            i: c.i.clone(),
            j: c.j.clone(),
            crisp: c.crisp,
            floor: policy.floor(),
        })
        .collect();

    let mut oracle = BTreeMap::new();
    if options.oracle_check {
        for (group, matrix) in prepared.matrices.iter().filter(|(_, m)| m.len() <= 3) {
            let value = solver::oracle(matrix, ORACLE_GRID_STEPS, options.config.epsilon_w)
                .map_err(|source| HierarchyError::Solve {
                    group: group.clone(),
                    source,
                })?
                .lambda;
            let solved = solution.lambda[group];
            if (solved - value).abs() > ORACLE_TOLERANCE {
                warnings.push(Warning::OracleMismatch {
                    group: group.clone(),
                    solver: solved,
                    oracle: value,
                });
            }
            oracle.insert(group.clone(), value);
        }
    }

    let ranking = hierarchy::compose(
        &study.hierarchy,
        &solution.local,
        &solution.lambda,
        options.renormalize,
    )?;
    let mut report = assemble(
        study.name.clone(),
        &study.hierarchy,
        &solution.local,
        &ranking,
        options.renormalize,
        warnings,
    );
    for table in &mut report.groups {
        table.oracle_lambda = oracle.get(&table.id).copied();
    }
    Ok(report)
}

/// Builds a report from local weights given directly.
pub fn run_replay(file: &ReplayFile, renormalize: bool) -> Result<Report, RunError> {
    let local = file.local_weights();
    let ranking = hierarchy::compose(&file.hierarchy, &local, &file.lambdas(), renormalize)?;
    Ok(assemble(
        file.name.clone(),
        &file.hierarchy,
        &local,
        &ranking,
        renormalize,
        Vec::new(),
    ))
}

fn assemble(
    name: Option<String>,
    root: &CriterionNode,
    local: &BTreeMap<String, f64>,
    ranking: &GlobalRanking,
    renormalized: bool,
    mut warnings: Vec<Warning>,
) -> Report {
    let labels: BTreeMap<&str, &str> = root
        .iter()
        .map(|n| (n.id.as_str(), n.label.as_str()))
        .collect();

    let mut groups = Vec::new();
    for group in root.groups() {
        let lambda = ranking.group_lambda.get(&group.id).copied();
        if group.children.len() == 1 {
            warnings.push(Warning::SingletonGroup {
                group: group.id.clone(),
            });
        }
        if let Some(l) = lambda.filter(|l| *l < 0.0) {
            warnings.push(Warning::NegativeLambda {
                group: group.id.clone(),
                lambda: l,
            });
        }
        let weights: Vec<f64> = group
            .children
            .iter()
            .map(|c| local.get(&c.id).copied().unwrap_or(f64::NAN))
            .collect();
        let rows = group
            .children
            .iter()
            .zip(&weights)
            .enumerate()
            .map(|(k, (c, &w))| GroupRow {
                id: c.id.clone(),
                label: c.label.clone(),
                local: w,
                // ties go to the earlier sibling
                rank: 1 + weights
                    .iter()
                    .enumerate()
                    .filter(|&(q, &v)| v > w || (v == w && q < k))
                    .count(),
            })
            .collect();
        groups.push(GroupTable {
            id: group.id.clone(),
            label: group.label.clone(),
            lambda,
            oracle_lambda: None,
            rows,
        });
    }

    let global = ranking
        .entries
        .iter()
        .map(|e| GlobalRow {
            id: e.id.clone(),
            label: labels.get(e.id.as_str()).unwrap_or(&"").to_string(),
            group: e.parent.clone(),
            local: e.local.unwrap_or(1.0),
            group_lambda: ranking.group_lambda.get(&e.parent).copied(),
            global: e.global,
            rank: e.rank,
        })
        .collect();

    Report {
        name,
        renormalized,
        groups,
        global,
        warnings,
    }
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Table => render_table(report),
        Format::Machine => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Csv => render_csv(report),
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn render_csv(report: &Report) -> String {
    let mut out = String::from("leaf,group,local,lambda,global,rank\n");
    for row in &report.global {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            row.id,
            row.group,
            row.local,
            opt(row.group_lambda),
            row.global,
            row.rank
        );
    }
    out
}

fn render_table(report: &Report) -> String {
    let mut out = String::new();
    if let Some(name) = &report.name {
        let _ = writeln!(out, "{name}\n");
    }
    for g in &report.groups {
        let title = if g.label.is_empty() {
            g.id.clone()
        } else {
            format!("{} ({})", g.id, g.label)
        };
        let _ = writeln!(out, "Group {title}");
        let lambda = g
            .lambda
            .map(|l| format!("{l:.6}"))
            .unwrap_or_else(|| "-".into());
        match g.oracle_lambda {
            Some(o) => {
                let _ = writeln!(out, "lambda = {lambda}  (grid oracle {o:.6})");
            }
            None => {
                let _ = writeln!(out, "lambda = {lambda}");
            }
        }
        let width = g
            .rows
            .iter()
            .map(|r| r.label.len())
            .max()
            .unwrap_or(0)
            .max(5);
        let _ = writeln!(
            out,
            "  {:<6} {:<width$} {:>10} {:>5}",
            "Code", "Label", "Weight", "Rank"
        );
        for r in &g.rows {
            let _ = writeln!(
                out,
                "  {:<6} {:<width$} {:>10.6} {:>5}",
                r.id, r.label, r.local, r.rank
            );
        }
        out.push('\n');
    }

    let heading = if report.renormalized {
        "Global weight"
    } else {
        "Normalized weight*"
    };
    let _ = writeln!(out, "Global ranking");
    let width = report
        .global
        .iter()
        .map(|r| r.label.len())
        .max()
        .unwrap_or(0)
        .max(5);
    let _ = writeln!(
        out,
        "  {:<6} {:<6} {:<width$} {:>10} {:>18} {:>5}",
        "Group", "Code", "Label", "Local", heading, "Rank"
    );
    for r in &report.global {
        let _ = writeln!(
            out,
            "  {:<6} {:<6} {:<width$} {:>10.6} {:>18.6} {:>5}",
            r.group, r.id, r.label, r.local, r.global, r.rank
        );
    }
    if !report.renormalized {
        let _ = writeln!(
            out,
            "  * product of local weights along the path; sibling groups are not rescaled"
        );
    }

    if !report.warnings.is_empty() {
        let _ = writeln!(out, "\nWarnings");
        for w in &report.warnings {
            let _ = writeln!(out, "  ! {w}");
        }
    }
    out
}
