//! Fuzzy pairwise comparison matrices: construction, expert aggregation,
//! crisp import and diagnostics.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tfn::{TfnError, TriangularFuzzyNumber};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixError {
    #[error("a comparison matrix needs at least 2 items, got {0}")]
    TooFewItems(usize),
    #[error("item {0:?} is listed twice")]
    DuplicateItem(String),
    #[error("unknown item {0:?}")]
    UnknownItem(String),
    #[error("item {0:?} is compared with itself")]
    SelfComparison(String),
    #[error("pair ({0:?}, {1:?}) is judged more than once")]
    DuplicatePair(String, String),
    #[error("pair ({0:?}, {1:?}) has no judgment")]
    MissingPair(String, String),
    #[error("expert matrices disagree on items: {0:?} vs {1:?}")]
    ShapeMismatch(Vec<String>, Vec<String>),
    #[error("no matrices to aggregate")]
    EmptyInput,
    #[error("crisp value {crisp} for ({i:?}, {j:?}) is not above the floor {floor}")]
    FloorAboveModal {
        i: String,
        j: String,
        crisp: f64,
        floor: f64,
    },
    #[error("crisp value {0} must be positive and finite")]
    NonPositiveCrisp(f64),
    #[error(transparent)]
    Tfn(#[from] TfnError),
}

/// One judgment "item `i` relative to item `j`".
#[derive(Debug, Clone, PartialEq)]
pub struct Judgment<V> {
    pub i: String,
    pub j: String,
    pub value: V,
}

impl<V> Judgment<V> {
    pub fn new(i: impl Into<String>, j: impl Into<String>, value: V) -> Self {
        Self {
            i: i.into(),
            j: j.into(),
            value,
        }
    }
}

/// Complete set of fuzzy judgments over `n` items, one per unordered pair.
///
/// Entry `(i, j)` with `i < j` (declaration order) bounds `w_i / w_j`.
/// Reading `(j, i)` yields the reciprocal band. Each judgment also keeps
/// the orientation it was supplied in; the solver applies the membership
/// function to that orientation, so reordering items does not change the
/// problem.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyComparisonMatrix {
    items: Vec<String>,
    // row-major upper triangle, pair (i, j) at tri_index(n, i, j)
    slots: Vec<Slot>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Slot {
    // band as supplied
    band: TriangularFuzzyNumber,
    // supplied as (j, i) rather than (i, j)
    reversed: bool,
}

fn tri_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

fn check_items(items: &[String]) -> Result<(), MatrixError> {
    if items.len() < 2 {
        return Err(MatrixError::TooFewItems(items.len()));
    }
    for (k, id) in items.iter().enumerate() {
        if items[..k].contains(id) {
            return Err(MatrixError::DuplicateItem(id.clone()));
        }
    }
    Ok(())
}

impl FuzzyComparisonMatrix {
    /// Builds a matrix from judgments given in either orientation.
    ///
    /// A judgment `(j, i, t)` with `j` declared after `i` reads back as
    /// `t⁻¹` at `(i, j)`.
    pub fn build<S, I>(items: &[S], judgments: I) -> Result<Self, MatrixError>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = Judgment<TriangularFuzzyNumber>>,
    {
        let items: Vec<String> = items.iter().map(|s| s.as_ref().to_string()).collect();
        check_items(&items)?;
        let n = items.len();
        let position = |id: &str| {
            items
                .iter()
                .position(|x| x == id)
                .ok_or_else(|| MatrixError::UnknownItem(id.to_string()))
        };

        let mut slots: Vec<Option<Slot>> = vec![None; n * (n - 1) / 2];
        for jd in judgments {
            let a = position(&jd.i)?;
            let b = position(&jd.j)?;
            if a == b {
                return Err(MatrixError::SelfComparison(jd.i));
            }
            let slot = &mut slots[tri_index(n, a.min(b), a.max(b))];
            if slot.is_some() {
                return Err(MatrixError::DuplicatePair(
                    items[a.min(b)].clone(),
                    items[a.max(b)].clone(),
                ));
            }
            *slot = Some(Slot {
                band: jd.value,
                reversed: a > b,
            });
        }

        let mut filled = Vec::with_capacity(slots.len());
        for i in 0..n {
            for j in i + 1..n {
                match slots[tri_index(n, i, j)] {
                    Some(s) => filled.push(s),
                    None => {
                        return Err(MatrixError::MissingPair(items[i].clone(), items[j].clone()))
                    }
                }
            }
        }
        Ok(Self {
            items,
            slots: filled,
        })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[String] {
        &self.items
    }

    /// Band on `w_i / w_j` by position. Panics if `i == j` or out of range.
    pub fn get(&self, i: usize, j: usize) -> TriangularFuzzyNumber {
        assert!(i != j, "no judgment on the diagonal");
        let slot = self.slots[tri_index(self.len(), i.min(j), i.max(j))];
        if (i > j) == slot.reversed {
            slot.band
        } else {
            slot.band.reciprocal()
        }
    }

    /// Band on `w_a / w_b` by item id.
    pub fn judgment(&self, a: &str, b: &str) -> Option<TriangularFuzzyNumber> {
        let i = self.items.iter().position(|x| x == a)?;
        let j = self.items.iter().position(|x| x == b)?;
        (i != j).then(|| self.get(i, j))
    }

    /// Judgments `(i, j, band)` with `i < j`, row by row.
    pub fn upper_triangle(
        &self,
    ) -> impl Iterator<Item = (usize, usize, TriangularFuzzyNumber)> + '_ {
        self.pairs().map(move |(i, j)| (i, j, self.get(i, j)))
    }

    /// Judgments `(a, b, band)` in the orientation they were supplied, row by row.
    pub fn judged_pairs(&self) -> impl Iterator<Item = (usize, usize, TriangularFuzzyNumber)> + '_ {
        self.pairs().zip(&self.slots).map(|((i, j), s)| {
            if s.reversed {
                (j, i, s.band)
            } else {
                (i, j, s.band)
            }
        })
    }

    fn pairs(&self) -> impl Iterator<Item = (usize, usize)> {
        let n = self.len();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }

    /// Same judgments with items reordered: new item `k` is old item `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        assert_eq!(order.len(), self.len());
        let items: Vec<String> = order.iter().map(|&k| self.items[k].clone()).collect();
        let judgments = self
            .judged_pairs()
            .map(|(a, b, t)| Judgment::new(self.items[a].clone(), self.items[b].clone(), t));
        Self::build(&items, judgments).expect("a permutation keeps the matrix complete")
    }

    /// Applies `f` to every band in its supplied orientation.
    pub fn map_bands<F>(&self, mut f: F) -> Result<Self, MatrixError>
    where
        F: FnMut(TriangularFuzzyNumber) -> Result<TriangularFuzzyNumber, TfnError>,
    {
        let slots = self
            .slots
            .iter()
            .map(|s| {
                Ok(Slot {
                    band: f(s.band)?,
                    reversed: s.reversed,
                })
            })
            .collect::<Result<Vec<_>, TfnError>>()?;
        Ok(Self {
            items: self.items.clone(),
            slots,
        })
    }
}

pub fn build_matrix<S, I>(items: &[S], judgments: I) -> Result<FuzzyComparisonMatrix, MatrixError>
where
    S: AsRef<str>,
    I: IntoIterator<Item = Judgment<TriangularFuzzyNumber>>,
{
    FuzzyComparisonMatrix::build(items, judgments)
}

/// Combines several experts' matrices by the component-wise geometric mean.
pub fn aggregate_experts(
    matrices: &[FuzzyComparisonMatrix],
) -> Result<FuzzyComparisonMatrix, MatrixError> {
    let first = matrices.first().ok_or(MatrixError::EmptyInput)?;
    if let Some(other) = matrices.iter().find(|m| m.items != first.items) {
        return Err(MatrixError::ShapeMismatch(
            first.items.clone(),
            other.items.clone(),
        ));
    }
    if matrices.len() == 1 {
        return Ok(first.clone());
    }

    // combine in the first expert's orientation; the geometric mean
    // commutes with taking reciprocals
    let k = matrices.len() as f64;
    let slots = first
        .slots
        .iter()
        .enumerate()
        .map(|(idx, lead)| {
            let oriented: Vec<TriangularFuzzyNumber> = matrices
                .iter()
                .map(|mx| {
                    let s = mx.slots[idx];
                    if s.reversed == lead.reversed {
                        s.band
                    } else {
                        s.band.reciprocal()
                    }
                })
                .collect();
            let geo = |part: fn(&TriangularFuzzyNumber) -> f64| {
                (oriented.iter().map(|t| part(t).ln()).sum::<f64>() / k).exp()
            };
            let band = TriangularFuzzyNumber::new(
                geo(TriangularFuzzyNumber::lower),
                geo(TriangularFuzzyNumber::modal),
                geo(TriangularFuzzyNumber::upper),
            )?;
            Ok(Slot {
                band,
                reversed: lead.reversed,
            })
        })
        .collect::<Result<Vec<_>, MatrixError>>()?;
    Ok(FuzzyComparisonMatrix {
        items: first.items.clone(),
        slots,
    })
}

/// How a crisp ratio is widened into a band: `(max(c − spread, floor), c, c + spread)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPolicy")]
pub struct SpreadPolicy {
    spread: f64,
    floor: f64,
}

#[derive(Deserialize)]
struct RawPolicy {
    spread: f64,
    floor: f64,
}

impl TryFrom<RawPolicy> for SpreadPolicy {
    type Error = String;

    fn try_from(raw: RawPolicy) -> Result<Self, Self::Error> {
        SpreadPolicy::new(raw.spread, raw.floor)
    }
}

impl SpreadPolicy {
    pub const DEFAULT_SPREAD: f64 = 1.0;
    pub const DEFAULT_FLOOR: f64 = 1.0 / 9.0;

    pub fn new(spread: f64, floor: f64) -> Result<Self, String> {
        if !(spread > 0.0 && spread.is_finite()) {
            return Err(format!("spread must be positive, got {spread}"));
        }
        if !(floor > 0.0 && floor < 1.0) {
            return Err(format!("floor must lie in (0, 1), got {floor}"));
        }
        Ok(Self { spread, floor })
    }

    pub fn spread(&self) -> f64 {
        self.spread
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn with_spread(self, spread: f64) -> Result<Self, String> {
        Self::new(spread, self.floor)
    }

    pub fn with_floor(self, floor: f64) -> Result<Self, String> {
        Self::new(self.spread, floor)
    }

    /// Band for crisp value `c`, plus whether the floor clipped the lower bound.
    pub fn fuzzify(&self, crisp: f64) -> Result<(TriangularFuzzyNumber, bool), MatrixError> {
        if !(crisp > 0.0 && crisp.is_finite()) {
            return Err(MatrixError::NonPositiveCrisp(crisp));
        }
        let raw_lower = crisp - self.spread;
        let clipped = raw_lower < self.floor;
        let lower = raw_lower.max(self.floor);
        let band = TriangularFuzzyNumber::new(lower, crisp, crisp + self.spread)?;
        Ok((band, clipped))
    }

    /// [`SpreadPolicy::fuzzify`] for one crisp judgment, naming the pair on failure.
    pub fn fuzzify_judgment(
        &self,
        jd: &Judgment<f64>,
    ) -> Result<(Judgment<TriangularFuzzyNumber>, bool), MatrixError> {
        if jd.value > 0.0 && self.floor >= jd.value {
            return Err(MatrixError::FloorAboveModal {
                i: jd.i.clone(),
                j: jd.j.clone(),
                crisp: jd.value,
                floor: self.floor,
            });
        }
        let (band, clipped) = self.fuzzify(jd.value)?;
        Ok((Judgment::new(jd.i.clone(), jd.j.clone(), band), clipped))
    }
}

impl Default for SpreadPolicy {
    fn default() -> Self {
        Self {
            spread: Self::DEFAULT_SPREAD,
            floor: Self::DEFAULT_FLOOR,
        }
    }
}

/// Builds a matrix from crisp ratios widened by `policy`.
pub fn import_crisp<S: AsRef<str>>(
    items: &[S],
    crisp: &[Judgment<f64>],
    policy: &SpreadPolicy,
) -> Result<FuzzyComparisonMatrix, MatrixError> {
    let bands = crisp
        .iter()
        .map(|jd| policy.fuzzify_judgment(jd).map(|(band, _)| band))
        .collect::<Result<Vec<_>, _>>()?;
    FuzzyComparisonMatrix::build(items, bands)
}

/// Diagnostics for a comparison matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub items: usize,
    pub judgments: usize,
    pub expected_judgments: usize,
    pub complete: bool,
    pub min_width: f64,
    pub max_width: f64,
    pub mean_width: f64,
    /// Largest `|m_ij · m_jk / m_ik − 1|` over triples `i < j < k`; `None` below 3 items.
    pub max_triple_deviation: Option<f64>,
    pub worst_triple: Option<(String, String, String)>,
}

pub fn validate(matrix: &FuzzyComparisonMatrix) -> ValidationReport {
    let n = matrix.len();
    let widths: Vec<f64> = matrix.slots.iter().map(|s| s.band.width()).collect();
    let mut worst: Option<(f64, (usize, usize, usize))> = None;
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let dev = (matrix.get(i, j).modal() * matrix.get(j, k).modal()
                    / matrix.get(i, k).modal()
                    - 1.0)
                    .abs();
                if worst.is_none_or(|(d, _)| dev > d) {
                    worst = Some((dev, (i, j, k)));
                }
            }
        }
    }
    let expected = n * (n - 1) / 2;
    ValidationReport {
        items: n,
        judgments: matrix.slots.len(),
        expected_judgments: expected,
        complete: matrix.slots.len() == expected,
        min_width: widths.iter().copied().fold(f64::INFINITY, f64::min),
        max_width: widths.iter().copied().fold(0.0, f64::max),
        mean_width: widths.iter().sum::<f64>() / widths.len() as f64,
        max_triple_deviation: worst.map(|(d, _)| d),
        worst_triple: worst.map(|(_, (i, j, k))| {
            let it = matrix.items();
            (it[i].clone(), it[j].clone(), it[k].clone())
        }),
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "items: {}  judgments: {}/{} ({})",
            self.items,
            self.judgments,
            self.expected_judgments,
            if self.complete {
                "complete"
            } else {
                "incomplete"
            }
        )?;
        writeln!(
            f,
            "band width: min {:.6}  mean {:.6}  max {:.6}",
            self.min_width, self.mean_width, self.max_width
        )?;
        match (&self.max_triple_deviation, &self.worst_triple) {
            (Some(d), Some((a, b, c))) => {
                writeln!(
                    f,
                    "modal consistency: max triple deviation {d:.6} at ({a}, {b}, {c})"
                )
            }
            _ => writeln!(f, "modal consistency: no triples"),
        }
    }
}
