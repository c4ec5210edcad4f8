//! Study and replay files.
//!
//! A study is a JSON document holding the criteria tree and, per group, the
//! pairwise judgments over that group's children:
//!
//! ```json
//! {
//!   "name": "example",
//!   "policy": { "spread": 1.0, "floor": 0.111 },
//!   "hierarchy": { "id": "G", "label": "goal", "children": [
//!     { "id": "A", "label": "first" }, { "id": "B", "label": "second" } ] },
//!   "matrices": { "G": [ { "i": "A", "j": "B", "label": "low" } ] }
//! }
//! ```
//!
//! A judgment is one of `{i, j, label}`, `{i, j, l, m, u}` or
//! `{i, j, crisp}`; kinds may not be mixed inside one matrix. `scale`
//! replaces the default linguistic scale. `experts` holds per-expert
//! `matrices` maps that are combined by geometric mean; it cannot be used
//! together with a top-level `matrices`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hierarchy::{CriterionNode, HierarchyError};
use crate::judgments::{
    aggregate_experts, FuzzyComparisonMatrix, Judgment, MatrixError, SpreadPolicy,
};
use crate::tfn::{LinguisticScale, TriangularFuzzyNumber};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StudyError {
    #[error("syntax error at line {line}, column {column} ({path}): {message}")]
    Syntax {
        line: usize,
        column: usize,
        path: String,
        message: String,
    },
    #[error("{path}: unknown id {id:?}")]
    Reference { path: String, id: String },
    #[error("{path}: judgment kinds are mixed within one matrix")]
    MixedJudgmentKinds { path: String },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("hierarchy: {0}")]
    Hierarchy(HierarchyError),
}

/// One or more problems found while reading a file.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct StudyErrors(pub Vec<StudyError>);

impl fmt::Display for StudyErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, e) in self.0.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

impl From<StudyError> for StudyErrors {
    fn from(e: StudyError) -> Self {
        Self(vec![e])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum JudgmentValue {
    Linguistic(String),
    Explicit(TriangularFuzzyNumber),
    Crisp(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JudgmentKind {
    Linguistic,
    Explicit,
    Crisp,
}

impl JudgmentValue {
    pub fn kind(&self) -> JudgmentKind {
        match self {
            JudgmentValue::Linguistic(_) => JudgmentKind::Linguistic,
            JudgmentValue::Explicit(_) => JudgmentKind::Explicit,
            JudgmentValue::Crisp(_) => JudgmentKind::Crisp,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawJudgment", into = "RawJudgment")]
pub struct JudgmentRecord {
    pub i: String,
    pub j: String,
    pub value: JudgmentValue,
}

impl JudgmentRecord {
    pub fn new(i: impl Into<String>, j: impl Into<String>, value: JudgmentValue) -> Self {
        Self {
            i: i.into(),
            j: j.into(),
            value,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawJudgment {
    i: String,
    j: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    l: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    u: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    crisp: Option<f64>,
}

impl TryFrom<RawJudgment> for JudgmentRecord {
    type Error = String;

    fn try_from(raw: RawJudgment) -> Result<Self, String> {
        let value = match (raw.label, raw.l, raw.m, raw.u, raw.crisp) {
            (Some(label), None, None, None, None) => JudgmentValue::Linguistic(label),
            (None, Some(l), Some(m), Some(u), None) => JudgmentValue::Explicit(
                TriangularFuzzyNumber::new(l, m, u).map_err(|e| e.to_string())?,
            ),
            (None, None, None, None, Some(c)) => JudgmentValue::Crisp(c),
            _ => {
                return Err(format!(
                    "judgment ({}, {}) needs exactly one of `label`, `l`/`m`/`u` or `crisp`",
                    raw.i, raw.j
                ))
            }
        };
        Ok(Self {
            i: raw.i,
            j: raw.j,
            value,
        })
    }
}

impl From<JudgmentRecord> for RawJudgment {
    fn from(rec: JudgmentRecord) -> Self {
        let mut raw = RawJudgment {
            i: rec.i,
            j: rec.j,
            label: None,
            l: None,
            m: None,
            u: None,
            crisp: None,
        };
        match rec.value {
            JudgmentValue::Linguistic(s) => raw.label = Some(s),
            JudgmentValue::Explicit(t) => {
                raw.l = Some(t.lower());
                raw.m = Some(t.modal());
                raw.u = Some(t.upper());
            }
            JudgmentValue::Crisp(c) => raw.crisp = Some(c),
        }
        raw
    }
}

pub type MatrixSet = BTreeMap<String, Vec<JudgmentRecord>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpertJudgments {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub matrices: MatrixSet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StudyFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scale: Option<LinguisticScale>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<SpreadPolicy>,
    pub hierarchy: CriterionNode,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub matrices: MatrixSet,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub experts: Vec<ExpertJudgments>,
}

/// A crisp judgment whose lower bound was raised to the floor.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClippedImport {
    pub group: String,
    pub i: String,
    pub j: String,
    pub crisp: f64,
}

/// Matrices ready for the solver, plus any crisp judgments the floor clipped.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PreparedMatrices {
    pub matrices: BTreeMap<String, FuzzyComparisonMatrix>,
    pub clipped: Vec<ClippedImport>,
}

fn from_json<T: serde::de::DeserializeOwned>(bytes: &[u8]) -> Result<T, StudyError> {
    let de = &mut serde_json::Deserializer::from_slice(bytes);
    serde_path_to_error::deserialize(de).map_err(|err| {
        let path = err.path().to_string();
        let inner = err.into_inner();
        StudyError::Syntax {
            line: inner.line(),
            column: inner.column(),
            path,
            message: inner.to_string(),
        }
    })
}

/// Reads and validates a study.
pub fn parse_study(bytes: &[u8]) -> Result<StudyFile, StudyErrors> {
    let study: StudyFile = from_json(bytes)?;
    let errors = study.check();
    if errors.is_empty() {
        Ok(study)
    } else {
        Err(StudyErrors(errors))
    }
}

impl StudyFile {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("study serializes");
        s.push('\n');
        s
    }

    pub fn scale(&self) -> LinguisticScale {
        self.scale.clone().unwrap_or_default()
    }

    pub fn policy(&self) -> SpreadPolicy {
        self.policy.unwrap_or_default()
    }

    /// Judgment sets, one per expert (the top-level `matrices` counts as one).
    pub fn judgment_sets(&self) -> Vec<(String, &MatrixSet)> {
        if self.experts.is_empty() {
            vec![("matrices".to_string(), &self.matrices)]
        } else {
            self.experts
                .iter()
                .enumerate()
                .map(|(k, e)| (format!("experts[{k}].matrices"), &e.matrices))
                .collect()
        }
    }

    /// Every semantic problem in the document.
    pub fn check(&self) -> Vec<StudyError> {
        let mut errors = Vec::new();
        if let Err(e) = self.hierarchy.check_unique_ids() {
            errors.push(StudyError::Hierarchy(e));
            return errors;
        }
        if !self.experts.is_empty() && !self.matrices.is_empty() {
            errors.push(StudyError::Invalid {
                path: "matrices".into(),
                message: "use either top-level `matrices` or `experts`, not both".into(),
            });
        }
        let scale = self.scale();
        for (base, set) in self.judgment_sets() {
            for (group_id, records) in set {
                let path = format!("{base}.{group_id}");
                let Some(group) = self.hierarchy.find(group_id).filter(|g| !g.is_leaf()) else {
                    errors.push(StudyError::Reference {
                        path,
                        id: group_id.clone(),
                    });
                    continue;
                };
                if let Some(first) = records.first() {
                    if records.iter().any(|r| r.value.kind() != first.value.kind()) {
                        errors.push(StudyError::MixedJudgmentKinds { path: path.clone() });
                    }
                }
                let children = group.child_ids();
                for (k, rec) in records.iter().enumerate() {
                    for id in [&rec.i, &rec.j] {
                        if !children.contains(id) {
                            errors.push(StudyError::Reference {
                                path: format!("{path}[{k}]"),
                                id: id.clone(),
                            });
                        }
                    }
                    if let JudgmentValue::Linguistic(label) = &rec.value {
                        if scale.get(label).is_none() {
                            errors.push(StudyError::Reference {
                                path: format!("{path}[{k}].label"),
                                id: label.clone(),
                            });
                        }
                    }
                }
            }
            for group in self.hierarchy.groups().filter(|g| g.children.len() >= 2) {
                if !set.contains_key(&group.id) {
                    errors.push(StudyError::Invalid {
                        path: format!("{base}.{}", group.id),
                        message: format!("group {:?} has no judgments", group.id),
                    });
                }
            }
        }
        if errors.is_empty() {
            if let Err(e) = self.prepare(&self.policy()) {
                errors.extend(e.0);
            }
        }
        errors
    }

    /// Builds every group's matrix, combining experts where present.
    pub fn prepare(&self, policy: &SpreadPolicy) -> Result<PreparedMatrices, StudyErrors> {
        let scale = self.scale();
        let mut prepared = PreparedMatrices::default();
        let mut errors = Vec::new();
        for group in self.hierarchy.groups().filter(|g| g.children.len() >= 2) {
            let children = group.child_ids();
            let mut per_expert = Vec::new();
            for (base, set) in self.judgment_sets() {
                let path = format!("{base}.{}", group.id);
                let Some(records) = set.get(&group.id) else {
                    errors.push(StudyError::Invalid {
                        path,
                        message: format!("group {:?} has no judgments", group.id),
                    });
                    continue;
                };
                let built = convert(records, &scale, policy).and_then(|(bands, clipped)| {
                    let m = FuzzyComparisonMatrix::build(&children, bands)?;
                    Ok((m, clipped))
                });
                match built {
                    Ok((m, clipped)) => {
                        per_expert.push(m);
                        prepared
                            .clipped
                            .extend(clipped.into_iter().map(|(i, j, crisp)| ClippedImport {
                                group: group.id.clone(),
                                i,
                                j,
                                crisp,
                            }));
                    }
                    Err(e) => errors.push(StudyError::Invalid {
                        path,
                        message: e.to_string(),
                    }),
                }
            }
            if per_expert.is_empty() {
                continue;
            }
            match aggregate_experts(&per_expert) {
                Ok(m) => {
                    prepared.matrices.insert(group.id.clone(), m);
                }
                Err(e) => errors.push(StudyError::Invalid {
                    path: group.id.clone(),
                    message: e.to_string(),
                }),
            }
        }
        if errors.is_empty() {
            Ok(prepared)
        } else {
            Err(StudyErrors(errors))
        }
    }
}

type Converted = (
    Vec<Judgment<TriangularFuzzyNumber>>,
    Vec<(String, String, f64)>,
);

fn convert(
    records: &[JudgmentRecord],
    scale: &LinguisticScale,
    policy: &SpreadPolicy,
) -> Result<Converted, MatrixError> {
    let mut bands = Vec::with_capacity(records.len());
    let mut clipped = Vec::new();
    for rec in records {
        let band = match &rec.value {
            JudgmentValue::Linguistic(label) => scale.lookup(label)?,
            JudgmentValue::Explicit(t) => *t,
            JudgmentValue::Crisp(c) => {
                let (jd, was_clipped) =
                    policy.fuzzify_judgment(&Judgment::new(rec.i.clone(), rec.j.clone(), *c))?;
                if was_clipped {
                    clipped.push((rec.i.clone(), rec.j.clone(), *c));
                }
                jd.value
            }
        };
        bands.push(Judgment::new(rec.i.clone(), rec.j.clone(), band));
    }
    Ok((bands, clipped))
}

/// Published local weights of one group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupWeights {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub weights: BTreeMap<String, f64>,
}

/// Local weights supplied directly, bypassing the solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplayFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub hierarchy: CriterionNode,
    pub groups: BTreeMap<String, GroupWeights>,
}

impl ReplayFile {
    /// Local weight of every non-root node.
    pub fn local_weights(&self) -> BTreeMap<String, f64> {
        self.groups
            .values()
            .flat_map(|g| g.weights.iter().map(|(k, v)| (k.clone(), *v)))
            .collect()
    }

    pub fn lambdas(&self) -> BTreeMap<String, f64> {
        self.groups
            .iter()
            .filter_map(|(k, g)| g.lambda.map(|l| (k.clone(), l)))
            .collect()
    }

    pub fn check(&self) -> Vec<StudyError> {
        let mut errors = Vec::new();
        if let Err(e) = self.hierarchy.check_unique_ids() {
            errors.push(StudyError::Hierarchy(e));
            return errors;
        }
        for (group_id, g) in &self.groups {
            let path = format!("groups.{group_id}");
            let Some(group) = self.hierarchy.find(group_id).filter(|n| !n.is_leaf()) else {
                errors.push(StudyError::Reference {
                    path,
                    id: group_id.clone(),
                });
                continue;
            };
            let children = group.child_ids();
            for (id, &w) in &g.weights {
                if !children.contains(id) {
                    errors.push(StudyError::Reference {
                        path: format!("{path}.weights"),
                        id: id.clone(),
                    });
                } else if !(w.is_finite() && w >= 0.0) {
                    errors.push(StudyError::Invalid {
                        path: format!("{path}.weights.{id}"),
                        message: format!("weight must be finite and non-negative, got {w}"),
                    });
                }
            }
        }
        let local = self.local_weights();
        for group in self.hierarchy.groups() {
            for child in &group.children {
                if !local.contains_key(&child.id) {
                    errors.push(StudyError::Hierarchy(HierarchyError::MissingWeight(
                        child.id.clone(),
                    )));
                }
            }
        }
        errors
    }
}

pub fn parse_replay(bytes: &[u8]) -> Result<ReplayFile, StudyErrors> {
    let file: ReplayFile = from_json(bytes)?;
    let errors = file.check();
    if errors.is_empty() {
        Ok(file)
    } else {
        Err(StudyErrors(errors))
    }
}
