use serde::{Deserialize, Serialize};

use subdisc::discovery::{run_sd, Heuristic, Rule, SearchParams};
use subdisc::report::{hull_auc, hull_of, HullVertex, RuleReport};
use subdisc::{Dataset, Feature, ParamError};

/// Pooled rules of one heuristic across its parameter grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HeuristicSweep {
    pub heuristic: Heuristic,
    pub grid: Vec<f64>,
    pub rules: Vec<RuleReport>,
    pub hull: Vec<HullVertex>,
    pub auc: f64,
    /// Largest TP among pooled rules without false positives; 0 when none.
    pub tp_at_fp0: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Comparison {
    pub beam_width: usize,
    pub qg: HeuristicSweep,
    pub qc: HeuristicSweep,
    /// `qg.auc - qc.auc`.
    pub auc_difference: f64,
}

/// Runs the search once per grid value and pools the distinct rules in grid
/// order. Each pooled rule keeps the parameter of its first occurrence.
pub fn sweep(
    d: &Dataset,
    features: &[Feature],
    base: &SearchParams,
    heuristic: Heuristic,
    grid: &[f64],
) -> Result<HeuristicSweep, ParamError> {
    let mut pooled: Vec<(Rule, SearchParams)> = Vec::new();
    for &value in grid {
        let mut p = base.clone();
        p.heuristic = heuristic;
        match heuristic {
            Heuristic::Qg => p.g = value,
            Heuristic::Qc => p.c = value,
        }
        for rule in run_sd(d, features, &p, None)?.rules {
            if !pooled
                .iter()
                .any(|(r, _)| r.feature_ids == rule.feature_ids)
            {
                pooled.push((rule, p.clone()));
            }
        }
    }
    let refs: Vec<(usize, &Rule)> = pooled
        .iter()
        .enumerate()
        .map(|(i, (r, _))| (i, r))
        .collect();
    let hull = hull_of(&refs, d);
    let tp_at_fp0 = pooled
        .iter()
        .filter(|(r, _)| r.stats.fp == 0)
        .map(|(r, _)| r.stats.tp)
        .max()
        .unwrap_or(0);
    Ok(HeuristicSweep {
        heuristic,
        grid: grid.to_vec(),
        rules: pooled
            .iter()
            .enumerate()
            .map(|(i, (r, p))| RuleReport::new(Some(i), r, d, p, false))
            .collect(),
        auc: hull_auc(&hull),
        hull,
        tp_at_fp0,
    })
}

pub fn compare_heuristics(
    d: &Dataset,
    features: &[Feature],
    base: &SearchParams,
    g_grid: &[f64],
    c_grid: &[f64],
) -> Result<Comparison, ParamError> {
    let qg = sweep(d, features, base, Heuristic::Qg, g_grid)?;
    let qc = sweep(d, features, base, Heuristic::Qc, c_grid)?;
    Ok(Comparison {
        beam_width: base.beam_width,
        auc_difference: qg.auc - qc.auc,
        qg,
        qc,
    })
}
