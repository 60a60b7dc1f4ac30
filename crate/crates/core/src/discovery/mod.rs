//! Rule construction: the beam search, rule subset selection and the
//! iterated weighted search.

mod dms;
mod quality;
mod rss;
mod sd;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::ParamError;
use crate::features::{CoverageStats, Feature};

pub use dms::{run_dms, DmsOptions, DmsOutcome, DuplicateRule};
pub use quality::{
    quality_qc, quality_qg, quality_weighted_qg, Counts, EqualQualityLine, Heuristic, Measure,
    WeightVector,
};
pub use rss::{rss_select, run_rss, RssStep};
pub use sd::run_sd;

/// `TargetClass <- conjunction`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    /// Indices into the feature list the rule was built from, ascending.
    pub feature_ids: Vec<usize>,
    /// Canonical feature texts in the same order.
    pub conjunction: Vec<String>,
    pub stats: CoverageStats,
    pub quality: f64,
    /// Pearson chi-square statistic of the rule's coverage table.
    pub significance: Option<f64>,
}

impl Rule {
    pub fn new(
        feature_ids: Vec<usize>,
        features: &[Feature],
        stats: CoverageStats,
        quality: f64,
    ) -> Self {
        let conjunction = feature_ids
            .iter()
            .map(|&i| features[i].text.clone())
            .collect();
        Rule {
            feature_ids,
            conjunction,
            stats,
            quality,
            significance: None,
        }
    }

    pub fn len(&self) -> usize {
        self.conjunction.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conjunction.is_empty()
    }

    /// Canonical text of the rule body, e.g. `age > 52.5 AND sex = male`.
    pub fn text(&self) -> String {
        self.conjunction.join(" AND ")
    }

    pub fn tp_rate(&self, d: &Dataset) -> f64 {
        self.stats.tp as f64 / d.pos() as f64
    }

    pub fn fp_rate(&self, d: &Dataset) -> f64 {
        self.stats.fp as f64 / d.neg() as f64
    }

    fn text_cmp(&self, other: &Rule) -> Ordering {
        // lexicographic over the joined text without allocating it
        let sep = " AND ";
        let a = self
            .conjunction
            .iter()
            .enumerate()
            .flat_map(|(i, s)| (if i == 0 { "" } else { sep }).bytes().chain(s.bytes()));
        let b = other
            .conjunction
            .iter()
            .enumerate()
            .flat_map(|(i, s)| (if i == 0 { "" } else { sep }).bytes().chain(s.bytes()));
        a.cmp(b)
    }

    /// The canonical order used where no measure is at hand: stored quality
    /// descending, then length, then text.
    pub fn canonical_cmp(&self, other: &Rule) -> Ordering {
        other
            .quality
            .total_cmp(&self.quality)
            .then(self.len().cmp(&other.len()))
            .then_with(|| self.text_cmp(other))
    }
}

/// How the minimum support threshold is derived when not given explicitly.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum MinSupportRule {
    /// `sqrt(Pos) / |E|`.
    #[default]
    SqrtPosOverTotal,
    /// `sqrt(Pos / |E|)`.
    SqrtPosFraction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct SearchParams {
    pub heuristic: Heuristic,
    pub g: f64,
    pub c: f64,
    /// Explicit support fraction; overrides `min_support_rule`.
    pub min_support: Option<f64>,
    pub min_support_rule: MinSupportRule,
    pub beam_width: usize,
    pub max_conjunction_length: Option<usize>,
    /// Attribute names allowed in features; `None` allows all.
    pub attribute_mask: Option<Vec<String>>,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            heuristic: Heuristic::Qg,
            g: 1.0,
            c: 1.0,
            min_support: None,
            min_support_rule: MinSupportRule::SqrtPosOverTotal,
            beam_width: 20,
            max_conjunction_length: None,
            attribute_mask: None,
        }
    }
}

pub const G_MIN: f64 = 0.1;
/// Upper end of the usual g range; larger values are allowed.
pub const G_SUGGESTED_MAX: f64 = 100.0;

impl SearchParams {
    pub fn qg(g: f64) -> Self {
        SearchParams {
            g,
            ..Default::default()
        }
    }

    pub fn qc(c: f64) -> Self {
        SearchParams {
            heuristic: Heuristic::Qc,
            c,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        match self.heuristic {
            Heuristic::Qg if !self.g.is_finite() || self.g <= G_MIN => {
                return Err(ParamError::G(self.g))
            }
            Heuristic::Qc if !self.c.is_finite() || self.c <= 0.0 => {
                return Err(ParamError::C(self.c))
            }
            _ => {}
        }
        if let Some(s) = self.min_support {
            if !(s > 0.0 && s <= 1.0) {
                return Err(ParamError::MinSupport(s));
            }
        }
        if self.beam_width == 0 {
            return Err(ParamError::BeamWidth);
        }
        if self.max_conjunction_length == Some(0) {
            return Err(ParamError::MaxLength);
        }
        Ok(())
    }

    pub fn measure(&self) -> Measure {
        match self.heuristic {
            Heuristic::Qg => Measure::Generalization { g: self.g },
            Heuristic::Qc => Measure::Cost { c: self.c },
        }
    }

    pub fn support(&self, d: &Dataset) -> MinSupport {
        MinSupport {
            explicit: self.min_support,
            rule: self.min_support_rule,
            pos: d.pos(),
            total: d.len(),
        }
    }

    /// Feature indices allowed by the attribute mask.
    pub fn allowed_features(
        &self,
        d: &Dataset,
        features: &[Feature],
    ) -> Result<Vec<usize>, ParamError> {
        let Some(mask) = &self.attribute_mask else {
            return Ok((0..features.len()).collect());
        };
        let mut allowed = vec![false; d.attributes().len()];
        for name in mask {
            let i = d
                .attribute_index(name)
                .ok_or_else(|| ParamError::UnknownAttribute(name.clone()))?;
            allowed[i] = true;
        }
        Ok(features
            .iter()
            .enumerate()
            .filter(|(_, f)| allowed[f.attribute()])
            .map(|(i, _)| i)
            .collect())
    }
}

/// The support gate `TP / |E| >= min_support`, evaluated exactly for the
/// square-root defaults.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinSupport {
    explicit: Option<f64>,
    rule: MinSupportRule,
    pos: usize,
    total: usize,
}

impl MinSupport {
    pub fn admits(&self, tp: usize) -> bool {
        if self.total == 0 {
            return false;
        }
        let (tp, pos, total) = (tp as u128, self.pos as u128, self.total as u128);
        match (self.explicit, self.rule) {
            (Some(s), _) => tp as f64 / total as f64 >= s,
            // tp/|E| >= sqrt(pos)/|E|  <=>  tp^2 >= pos
            (None, MinSupportRule::SqrtPosOverTotal) => tp * tp >= pos,
            // tp/|E| >= sqrt(pos/|E|)  <=>  tp^2 >= pos*|E|
            (None, MinSupportRule::SqrtPosFraction) => tp * tp >= pos * total,
        }
    }

    /// The threshold as a fraction of `|E|`.
    pub fn fraction(&self) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        match (self.explicit, self.rule) {
            (Some(s), _) => s,
            (None, MinSupportRule::SqrtPosOverTotal) => {
                (self.pos as f64).sqrt() / self.total as f64
            }
            (None, MinSupportRule::SqrtPosFraction) => (self.pos as f64 / self.total as f64).sqrt(),
        }
    }
}

/// The fixed-capacity, quality-ordered rule collection produced by one search.
#[derive(Clone, Debug, PartialEq)]
pub struct Beam {
    pub capacity: usize,
    pub rules: Vec<Rule>,
    /// Number of completed iterations of the refinement loop.
    pub iterations: usize,
}

impl Beam {
    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn best(&self) -> Option<&Rule> {
        self.rules.first()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::BitSet;

    #[test]
    fn param_validation() {
        assert_eq!(SearchParams::qg(0.0).validate(), Err(ParamError::G(0.0)));
        assert_eq!(SearchParams::qg(0.1).validate(), Err(ParamError::G(0.1)));
        assert!(SearchParams::qg(0.5).validate().is_ok());
        assert!(SearchParams::qg(500.0).validate().is_ok());
        assert_eq!(SearchParams::qc(-1.0).validate(), Err(ParamError::C(-1.0)));
        let mut p = SearchParams::default();
        p.min_support = Some(1.5);
        assert!(p.validate().is_err());
        p.min_support = None;
        p.beam_width = 0;
        assert_eq!(p.validate(), Err(ParamError::BeamWidth));
    }

    #[test]
    fn support_gate_is_exact() {
        let s = MinSupport {
            explicit: None,
            rule: MinSupportRule::SqrtPosOverTotal,
            pos: 9,
            total: 20,
        };
        assert!(!s.admits(2));
        assert!(s.admits(3));
        let s = MinSupport {
            rule: MinSupportRule::SqrtPosFraction,
            ..s
        };
        // sqrt(9/20) * 20 = 13.4
        assert!(!s.admits(13));
        assert!(s.admits(14));
        let s = MinSupport {
            explicit: Some(0.25),
            ..s
        };
        assert!(s.admits(5));
        assert!(!s.admits(4));
    }

    #[test]
    fn params_json_defaults() {
        let p: SearchParams = serde_json::from_str(r#"{"g": 4}"#).unwrap();
        assert_eq!(p.g, 4.0);
        assert_eq!(p.beam_width, 20);
        assert_eq!(p.heuristic, Heuristic::Qg);
    }

    #[test]
    fn canonical_text_order() {
        let stats = CoverageStats {
            tp: 0,
            fp: 0,
            tp_set: BitSet::new(1),
            fp_set: BitSet::new(1),
        };
        let rule = |c: &[&str]| Rule {
            feature_ids: vec![],
            conjunction: c.iter().map(|s| s.to_string()).collect(),
            stats: stats.clone(),
            quality: 1.0,
            significance: None,
        };
        let a = rule(&["a = x", "b = y"]);
        let b = rule(&["a = x AND"]);
        assert_eq!(a.text_cmp(&b), a.text().cmp(&b.text()));
        assert_eq!(rule(&["z"]).canonical_cmp(&a), Ordering::Less);
    }
}
