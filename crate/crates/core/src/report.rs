//! Serializable views of rules, hulls and factors.

use serde::{Deserialize, Serialize};

use crate::analysis::{convex_hull, rule_significance, FactorReport, HullPoint, StarLevel};
use crate::dataset::Dataset;
use crate::discovery::{Heuristic, Rule, SearchParams};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RuleReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_id: Option<usize>,
    pub conjunction: Vec<String>,
    pub text: String,
    pub tp: usize,
    pub fp: usize,
    pub tp_rate: f64,
    pub fp_rate: f64,
    pub quality: f64,
    pub heuristic: Heuristic,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// Chi-square statistic; absent when the rule covers every example or none.
    pub significance: Option<f64>,
    pub p_value: Option<f64>,
    pub stars: Option<StarLevel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tp_ids: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fp_ids: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub supporting_factors: Option<FactorReport>,
}

impl RuleReport {
    /// `with_ids` adds the covered examples, as ids of the ingested table.
    pub fn new(
        rule_id: Option<usize>,
        rule: &Rule,
        d: &Dataset,
        params: &SearchParams,
        with_ids: bool,
    ) -> Self {
        let sig = rule_significance(&rule.stats, d).ok();
        let ids = |set: &crate::bitset::BitSet| {
            set.iter().map(|e| d.original_ids()[e]).collect::<Vec<_>>()
        };
        RuleReport {
            rule_id,
            conjunction: rule.conjunction.clone(),
            text: rule.text(),
            tp: rule.stats.tp,
            fp: rule.stats.fp,
            tp_rate: rule.tp_rate(d),
            fp_rate: rule.fp_rate(d),
            quality: rule.quality,
            heuristic: params.heuristic,
            g: (params.heuristic == Heuristic::Qg).then_some(params.g),
            c: (params.heuristic == Heuristic::Qc).then_some(params.c),
            significance: sig.as_ref().map(|s| s.statistic),
            p_value: sig.as_ref().map(|s| s.p_value),
            stars: sig.map(|s| s.level),
            tp_ids: with_ids.then(|| ids(&rule.stats.tp_set)),
            fp_ids: with_ids.then(|| ids(&rule.stats.fp_set)),
            supporting_factors: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HullVertex {
    pub fp: usize,
    pub tp: usize,
    pub fpr: f64,
    pub tpr: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_id: Option<usize>,
}

/// Convex hull of the rules in TP/FP space with both anchors. Vertices made
/// from a rule carry its id.
pub fn hull_of(rules: &[(usize, &Rule)], d: &Dataset) -> Vec<HullVertex> {
    let points: Vec<HullPoint<i64>> = rules
        .iter()
        .map(|(id, r)| HullPoint::new(r.stats.fp as i64, r.stats.tp as i64, Some(*id)))
        .collect();
    convex_hull(&points, d.pos(), d.neg())
        .into_iter()
        .map(|p| HullVertex {
            fp: p.fp as usize,
            tp: p.tp as usize,
            fpr: p.fp as f64 / d.neg() as f64,
            tpr: p.tp as f64 / d.pos() as f64,
            rule_id: p.rule,
        })
        .collect()
}

/// Area under a hull given in rates.
pub fn hull_auc(hull: &[HullVertex]) -> f64 {
    let pts: Vec<(f64, f64)> = hull.iter().map(|v| (v.fpr, v.tpr)).collect();
    crate::analysis::auc_of_hull(&pts)
}
