use crate::dataset::Dataset;
use crate::error::ParamError;
use crate::features::Feature;

use super::quality::{Heuristic, WeightVector};
use super::{run_sd, Rule, SearchParams};

#[derive(Clone, Debug, PartialEq)]
pub struct DmsOptions {
    /// Drop rules already emitted by an earlier iteration.
    pub dedupe: bool,
    /// How many of the best beam rules each iteration takes.
    pub rules_per_iteration: usize,
}

impl Default for DmsOptions {
    fn default() -> Self {
        DmsOptions {
            dedupe: true,
            rules_per_iteration: 1,
        }
    }
}

/// A rule found again by a later iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct DuplicateRule {
    pub iteration: usize,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DmsOutcome {
    pub rules: Vec<Rule>,
    pub duplicates: Vec<DuplicateRule>,
    /// Set when an iteration produced an empty beam.
    pub stopped_early: bool,
    pub weights: WeightVector,
}

/// Repeated weighted beam search: each of `number` iterations runs the search
/// with the current example counters, keeps the best rule and bumps the
/// counters of the positives it covers.
pub fn run_dms(
    d: &Dataset,
    features: &[Feature],
    params: &SearchParams,
    number: usize,
    opts: &DmsOptions,
) -> Result<DmsOutcome, ParamError> {
    if params.heuristic != Heuristic::Qg {
        return Err(ParamError::WeightedNeedsQg);
    }
    if number == 0 || opts.rules_per_iteration == 0 {
        return Err(ParamError::ZeroNumber);
    }
    let mut weights = WeightVector::new(d);
    let mut rules: Vec<Rule> = Vec::new();
    let mut duplicates = Vec::new();
    let mut stopped_early = false;
    for iteration in 0..number {
        let beam = run_sd(d, features, params, Some(&weights))?;
        if beam.is_empty() {
            stopped_early = true;
            break;
        }
        for rule in beam.rules.into_iter().take(opts.rules_per_iteration) {
            weights.increment(&rule.stats.tp_set);
            if opts.dedupe && rules.iter().any(|r| r.feature_ids == rule.feature_ids) {
                duplicates.push(DuplicateRule {
                    iteration,
                    text: rule.text(),
                });
            } else {
                rules.push(rule);
            }
        }
    }
    Ok(DmsOutcome {
        rules,
        duplicates,
        stopped_early,
        weights,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ingest_csv, IngestOptions};
    use crate::features::{build_feature_set, FeatureOptions};

    fn load(text: &str) -> (Dataset, Vec<Feature>) {
        let d = ingest_csv(text.as_bytes(), &IngestOptions::new("p")).unwrap();
        let fs = build_feature_set(&d, &FeatureOptions::default()).unwrap();
        (d, fs)
    }

    #[test]
    fn single_iteration_matches_plain_search() {
        let (d, fs) = load("A,B,class\ny,u,p\ny,v,p\nn,u,p\ny,u,n\nn,v,n\nn,v,n\n");
        let p = SearchParams::qg(1.0);
        let out = run_dms(&d, &fs, &p, 1, &DmsOptions::default()).unwrap();
        let beam = run_sd(&d, &fs, &p, None).unwrap();
        assert_eq!(out.rules.len(), 1);
        assert_eq!(out.rules[0].feature_ids, beam.rules[0].feature_ids);
        assert_eq!(out.rules[0].quality, beam.rules[0].quality);
    }

    #[test]
    fn duplicates_are_recorded() {
        // one attribute, so at most two distinct admissible rules
        let (d, fs) = load("A,class\ny,p\ny,p\ny,p\nn,p\nn,n\ny,n\nn,n\n");
        let out = run_dms(&d, &fs, &SearchParams::qg(1.0), 3, &DmsOptions::default()).unwrap();
        assert!(out.rules.len() <= 2);
        assert!(!out.duplicates.is_empty());
        let kept = out.rules.len() + out.duplicates.len();
        assert_eq!(kept, 3);
    }

    #[test]
    fn requires_qg() {
        let (d, fs) = load("A,class\ny,p\nn,n\n");
        assert_eq!(
            run_dms(&d, &fs, &SearchParams::qc(1.0), 1, &DmsOptions::default()),
            Err(ParamError::WeightedNeedsQg)
        );
    }

    #[test]
    fn empty_beam_stops_early() {
        let (d, fs) = load("A,class\ny,p\nn,n\nn,n\n");
        let mut p = SearchParams::qg(1.0);
        p.min_support = Some(1.0);
        let out = run_dms(&d, &fs, &p, 3, &DmsOptions::default()).unwrap();
        assert!(out.rules.is_empty());
        assert!(out.stopped_early);
    }
}
