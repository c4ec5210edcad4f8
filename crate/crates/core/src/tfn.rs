//! Triangular fuzzy judgments and the linguistic scale used to elicit them.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TfnError {
    #[error("fuzzy number bounds must be positive, got l = {0}")]
    NonPositive(f64),
    #[error("fuzzy number must satisfy l < m < u, got ({l}, {m}, {u})")]
    OrderViolation { l: f64, m: f64, u: f64 },
    #[error("unknown linguistic label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate linguistic label {0:?}")]
    DuplicateLabel(String),
    #[error("scale bands must be listed in nondecreasing modal order (label {0:?})")]
    UnorderedScale(String),
}

/// A judgment band `(l, m, u)` on the ratio of two weights.
///
/// Full confidence sits at the modal ratio `m`; confidence decays linearly
/// to zero at `l` and `u`. Bounds are strictly ordered and positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TriangularFuzzyNumber {
    l: f64,
    m: f64,
    u: f64,
}

impl TriangularFuzzyNumber {
    pub fn new(l: f64, m: f64, u: f64) -> Result<Self, TfnError> {
        if !(l < m && m < u) {
            // NaN lands here too
            return Err(TfnError::OrderViolation { l, m, u });
        }
        if l <= 0.0 {
            return Err(TfnError::NonPositive(l));
        }
        if !u.is_finite() {
            return Err(TfnError::OrderViolation { l, m, u });
        }
        Ok(Self { l, m, u })
    }

    pub fn lower(&self) -> f64 {
        self.l
    }

    pub fn modal(&self) -> f64 {
        self.m
    }

    pub fn upper(&self) -> f64 {
        self.u
    }

    /// Band of the inverse ratio: `(1/u, 1/m, 1/l)`.
    pub fn reciprocal(&self) -> Self {
        Self {
            l: 1.0 / self.u,
            m: 1.0 / self.m,
            u: 1.0 / self.l,
        }
    }

    /// Degree to which `ratio` satisfies this judgment.
    ///
    /// The tent is 1 at `m` and 0 at `l` and `u`. Outside `[l, u]` the
    /// linear branches continue below zero instead of clamping, so a
    /// strongly violated judgment reports a negative degree.
    pub fn membership(&self, ratio: f64) -> f64 {
        if ratio <= self.m {
            (ratio - self.l) / (self.m - self.l)
        } else {
            (self.u - ratio) / (self.u - self.m)
        }
    }

    pub fn width(&self) -> f64 {
        self.u - self.l
    }
}

impl<'de> Deserialize<'de> for TriangularFuzzyNumber {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            l: f64,
            m: f64,
            u: f64,
        }
        let raw = Raw::deserialize(de)?;
        Self::new(raw.l, raw.m, raw.u).map_err(serde::de::Error::custom)
    }
}

impl std::fmt::Display for TriangularFuzzyNumber {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.l, self.m, self.u)
    }
}

/// Shorthand for [`TriangularFuzzyNumber::new`].
pub fn make_tfn(l: f64, m: f64, u: f64) -> Result<TriangularFuzzyNumber, TfnError> {
    TriangularFuzzyNumber::new(l, m, u)
}

/// Shorthand for [`TriangularFuzzyNumber::membership`].
pub fn membership_degree(t: &TriangularFuzzyNumber, ratio: f64) -> f64 {
    t.membership(ratio)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleEntry {
    pub label: String,
    #[serde(flatten)]
    pub band: TriangularFuzzyNumber,
}

/// Ordered label → band mapping. Label lookup ignores ASCII case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ScaleEntry>", into = "Vec<ScaleEntry>")]
pub struct LinguisticScale {
    entries: Vec<ScaleEntry>,
}

impl LinguisticScale {
    pub fn new(entries: Vec<ScaleEntry>) -> Result<Self, TfnError> {
        let mut scale = Self {
            entries: Vec::with_capacity(entries.len()),
        };
        for e in entries {
            scale.register(e.label, e.band)?;
        }
        Ok(scale)
    }

    /// Appends a label. Its modal value may not be below the last band's.
    pub fn register(
        &mut self,
        label: impl Into<String>,
        band: TriangularFuzzyNumber,
    ) -> Result<(), TfnError> {
        let label = label.into();
        if self.get(&label).is_some() {
            return Err(TfnError::DuplicateLabel(label));
        }
        if let Some(last) = self.entries.last() {
            if band.modal() < last.band.modal() {
                return Err(TfnError::UnorderedScale(label));
            }
        }
        self.entries.push(ScaleEntry { label, band });
        Ok(())
    }

    pub fn get(&self, label: &str) -> Option<TriangularFuzzyNumber> {
        self.entries
            .iter()
            .find(|e| e.label.eq_ignore_ascii_case(label.trim()))
            .map(|e| e.band)
    }

    pub fn lookup(&self, label: &str) -> Result<TriangularFuzzyNumber, TfnError> {
        self.get(label)
            .ok_or_else(|| TfnError::UnknownLabel(label.to_string()))
    }

    pub fn entries(&self) -> &[ScaleEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

impl Default for LinguisticScale {
    /// Five-label scale from "very low" (1, 2, 3) up to "very high" (5, 6, 7).
    fn default() -> Self {
        let bands = [
            ("very low", 1.0, 2.0, 3.0),
            ("low", 2.0, 3.0, 4.0),
            ("medium", 3.0, 4.0, 5.0),
            ("high", 4.0, 5.0, 6.0),
            ("very high", 5.0, 6.0, 7.0),
        ];
        let entries = bands
            .iter()
            .map(|&(label, l, m, u)| ScaleEntry {
                label: label.to_string(),
                band: TriangularFuzzyNumber { l, m, u },
            })
            .collect();
        Self { entries }
    }
}

impl TryFrom<Vec<ScaleEntry>> for LinguisticScale {
    type Error = TfnError;

    fn try_from(entries: Vec<ScaleEntry>) -> Result<Self, Self::Error> {
        Self::new(entries)
    }
}

impl From<LinguisticScale> for Vec<ScaleEntry> {
    fn from(scale: LinguisticScale) -> Self {
        scale.entries
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tfn(l: f64, m: f64, u: f64) -> TriangularFuzzyNumber {
        make_tfn(l, m, u).unwrap()
    }

    #[test]
    fn construction() {
        assert_eq!(tfn(2.0, 3.0, 4.0).modal(), 3.0);
        assert!(matches!(
            make_tfn(3.0, 2.0, 4.0),
            Err(TfnError::OrderViolation { .. })
        ));
        assert!(matches!(
            make_tfn(2.0, 2.0, 4.0),
            Err(TfnError::OrderViolation { .. })
        ));
        assert_eq!(make_tfn(0.0, 1.0, 2.0), Err(TfnError::NonPositive(0.0)));
        assert_eq!(make_tfn(-1.0, 1.0, 2.0), Err(TfnError::NonPositive(-1.0)));
        assert!(make_tfn(f64::NAN, 1.0, 2.0).is_err());
        assert!(make_tfn(1.0, 2.0, f64::INFINITY).is_err());
    }

    #[test]
    fn label_lookup() {
        let scale = LinguisticScale::default();
        assert_eq!(scale.lookup("very low").unwrap(), tfn(1.0, 2.0, 3.0));
        assert_eq!(scale.lookup("Very High").unwrap(), tfn(5.0, 6.0, 7.0));
        assert!(matches!(
            scale.lookup("equal"),
            Err(TfnError::UnknownLabel(_))
        ));
    }

    #[test]
    fn scale_registration_rules() {
        let mut scale = LinguisticScale::default();
        assert!(matches!(
            scale.register("LOW", tfn(6.0, 7.0, 8.0)),
            Err(TfnError::DuplicateLabel(_))
        ));
        assert!(matches!(
            scale.register("tiny", tfn(0.5, 1.0, 1.5)),
            Err(TfnError::UnorderedScale(_))
        ));
        scale.register("extreme", tfn(6.0, 7.0, 8.0)).unwrap();
        assert_eq!(scale.len(), 6);
    }

    #[test]
    fn reciprocal_values() {
        let r = tfn(2.0, 3.0, 4.0).reciprocal();
        assert_eq!((r.lower(), r.upper()), (0.25, 0.5));
        assert!((r.modal() - 1.0 / 3.0).abs() < 1e-15);

        let r = tfn(5.0, 6.0, 7.0).reciprocal();
        assert_eq!(
            (r.lower(), r.modal(), r.upper()),
            (1.0 / 7.0, 1.0 / 6.0, 0.2)
        );

        let r = tfn(0.9, 1.0, 1.1).reciprocal();
        assert!((r.lower() - 1.0 / 1.1).abs() < 1e-15);
        assert_eq!(r.modal(), 1.0);
        assert!((r.upper() - 1.0 / 0.9).abs() < 1e-15);
    }

    #[test]
    fn membership_values() {
        let t = tfn(2.0, 3.0, 4.0);
        assert_eq!(membership_degree(&t, 3.0), 1.0);
        assert_eq!(membership_degree(&t, 2.5), 0.5);
        assert_eq!(membership_degree(&t, 5.0), -1.0);
        assert_eq!(membership_degree(&t, 1.0), -1.0);
    }

    fn arb_tfn() -> impl Strategy<Value = TriangularFuzzyNumber> {
        (0.01f64..10.0, 0.01f64..5.0, 0.01f64..5.0).prop_map(|(l, a, b)| tfn(l, l + a, l + a + b))
    }

    proptest! {
        #[test]
        fn tent_peak_and_feet(t in arb_tfn()) {
            prop_assert!((t.membership(t.modal()) - 1.0).abs() < 1e-12);
            prop_assert!(t.membership(t.lower()).abs() < 1e-12);
            prop_assert!(t.membership(t.upper()).abs() < 1e-12);
        }

        #[test]
        fn piecewise_linear(t in arb_tfn(), a in 0.0f64..1.0, b in 0.0f64..1.0, s in 0.0f64..1.0) {
            // three collinear ratios on the left of m, then on the right
            let left = |x: f64| t.modal() - x * t.modal() * 0.99;
            let right = |x: f64| t.modal() + x * 10.0;
            for side in [&left as &dyn Fn(f64) -> f64, &right] {
                let (ra, rb) = (side(a), side(b));
                let rc = ra + s * (rb - ra);
                let (ma, mb, mc) = (t.membership(ra), t.membership(rb), t.membership(rc));
                prop_assert!((mc - (ma + s * (mb - ma))).abs() < 1e-12 * (1.0 + ma.abs() + mb.abs()) * 10.0);
            }
        }

        #[test]
        fn reciprocal_is_an_involution(t in arb_tfn()) {
            let back = t.reciprocal().reciprocal();
            prop_assert!((back.lower() - t.lower()).abs() <= 1e-12 * t.lower());
            prop_assert!((back.modal() - t.modal()).abs() <= 1e-12 * t.modal());
            prop_assert!((back.upper() - t.upper()).abs() <= 1e-12 * t.upper());
        }

        #[test]
        fn construction_accepts_exactly_ordered_positive(l in -2.0f64..5.0, m in -2.0f64..5.0, u in -2.0f64..5.0) {
            let ok = 0.0 < l && l < m && m < u;
            prop_assert_eq!(make_tfn(l, m, u).is_ok(), ok);
        }
    }
}
