use std::cmp::Ordering;

use crate::bitset::BitSet;
use crate::dataset::Dataset;
use crate::error::ParamError;
use crate::features::{dominates, CoverageStats, Feature};

use super::quality::{Counts, Heuristic, Measure, WeightVector};
use super::{Beam, Rule, SearchParams};

struct Entry {
    rule: Rule,
    covered: BitSet,
}

fn beam_order(measure: &Measure, weights: Option<&WeightVector>, a: &Rule, b: &Rule) -> Ordering {
    measure
        .compare(
            Counts::of(&b.stats),
            b.quality,
            Counts::of(&a.stats),
            a.quality,
            weights,
        )
        .then(a.len().cmp(&b.len()))
        .then_with(|| a.text_cmp(b))
}

/// Beam search for the rules maximising the configured quality.
///
/// The beam starts out as empty placeholders of quality zero. Each pass
/// extends every beam rule by every allowed feature and admits a candidate
/// when it meets the support threshold, beats the worst beam entry (or, while
/// the beam has free slots, has non-negative quality) and is not dominated by
/// a rule already in the beam. Admission evicts the worst rule when the beam
/// is full and then drops every rule the newcomer dominates. The search stops
/// once a full pass leaves the beam unchanged.
///
/// With `weights`, true positives count `1/c(e)` instead of 1.
pub fn run_sd(
    d: &Dataset,
    features: &[Feature],
    params: &SearchParams,
    weights: Option<&WeightVector>,
) -> Result<Beam, ParamError> {
    params.validate()?;
    if weights.is_some() && params.heuristic != Heuristic::Qg {
        return Err(ParamError::WeightedNeedsQg);
    }
    let measure = params.measure();
    let support = params.support(d);
    let allowed = params.allowed_features(d, features)?;
    let capacity = params.beam_width;
    let positives = d.positives();
    let negatives = d.negatives();
    let n = d.len();

    let root = BitSet::full(n);
    let mut beam: Vec<Entry> = Vec::new();
    let mut scratch = BitSet::new(n);
    let mut iterations = 0;
    let guard = allowed.len() + 2;

    loop {
        if params
            .max_conjunction_length
            .is_some_and(|max| iterations >= max)
        {
            break;
        }
        if iterations >= guard {
            log::warn!("beam search stopped after {iterations} passes without reaching a fixpoint");
            break;
        }
        let mut parents: Vec<(Vec<usize>, BitSet)> = beam
            .iter()
            .map(|e| (e.rule.feature_ids.clone(), e.covered.clone()))
            .collect();
        // unfilled slots still hold the empty rule
        if beam.len() < capacity {
            parents.push((Vec::new(), root.clone()));
        }
        let before: Vec<Vec<usize>> = parents
            .iter()
            .filter(|(ids, _)| !ids.is_empty())
            .map(|(ids, _)| ids.clone())
            .collect();

        for (parent_ids, parent_cov) in &parents {
            for &fi in &allowed {
                if parent_ids.binary_search(&fi).is_ok() {
                    continue;
                }
                parent_cov.intersection_into(&features[fi].coverage, &mut scratch);
                let tp = scratch.intersection_count(positives);
                if !support.admits(tp) {
                    continue;
                }
                let fp = scratch.count() - tp;
                let counts = Counts {
                    covered: &scratch,
                    tp,
                    fp,
                };
                let value = measure.value(counts, weights);
                if beam.len() >= capacity {
                    let worst = &beam.last().expect("full beam").rule;
                    let vs_worst = measure.compare(
                        counts,
                        value,
                        Counts::of(&worst.stats),
                        worst.quality,
                        weights,
                    );
                    if vs_worst != Ordering::Greater {
                        continue;
                    }
                } else if measure.sign(counts, value, weights) == Ordering::Less {
                    continue;
                }
                let stats = CoverageStats {
                    tp,
                    fp,
                    tp_set: scratch.intersection(positives),
                    fp_set: scratch.intersection(negatives),
                };
                if beam.iter().any(|e| dominates(&e.rule.stats, &stats)) {
                    continue;
                }

                let mut ids = parent_ids.clone();
                let at = ids.binary_search(&fi).unwrap_err();
                ids.insert(at, fi);
                let rule = Rule::new(ids, features, stats, value);
                if beam.len() >= capacity {
                    beam.pop();
                }
                beam.retain(|e| !dominates(&rule.stats, &e.rule.stats));
                let at = beam.partition_point(|e| {
                    beam_order(&measure, weights, &e.rule, &rule) == Ordering::Less
                });
                beam.insert(
                    at,
                    Entry {
                        rule,
                        covered: scratch.clone(),
                    },
                );
            }
        }
        iterations += 1;
        let after: Vec<&Vec<usize>> = beam.iter().map(|e| &e.rule.feature_ids).collect();
        if after.len() == before.len() && after.iter().zip(&before).all(|(a, b)| *a == b) {
            break;
        }
    }

    Ok(Beam {
        capacity,
        rules: beam.into_iter().map(|e| e.rule).collect(),
        iterations,
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

    /// positives A in {y,y,y,y,n}, negatives A in {y,n,n,n,n}
    fn d1() -> (Dataset, Vec<Feature>) {
        load("A,class\ny,p\ny,p\ny,p\ny,p\nn,p\ny,n\nn,n\nn,n\nn,n\nn,n\n")
    }

    #[test]
    fn toy_best_rule() {
        let (d, fs) = d1();
        let beam = run_sd(&d, &fs, &SearchParams::qg(1.0), None).unwrap();
        let best = beam.best().unwrap();
        assert_eq!(best.text(), "A = y");
        assert_eq!((best.stats.tp, best.stats.fp), (4, 1));
        assert_eq!(best.quality, 2.0);
        // A != n has identical coverage and is purged
        assert!(beam.rules.iter().all(|r| r.text() != "A != n"));
    }

    #[test]
    fn no_rule_meets_support() {
        let (d, fs) = d1();
        let mut p = SearchParams::qg(1.0);
        p.min_support = Some(0.9);
        assert!(run_sd(&d, &fs, &p, None).unwrap().is_empty());
    }

    #[test]
    fn weighted_search_requires_qg() {
        let (d, fs) = d1();
        let w = WeightVector::new(&d);
        assert_eq!(
            run_sd(&d, &fs, &SearchParams::qc(1.0), Some(&w)),
            Err(ParamError::WeightedNeedsQg)
        );
    }

    #[test]
    fn attribute_mask_restricts_features() {
        let (d, fs) = load("A,B,class\ny,u,p\ny,u,p\nn,v,n\nn,u,n\n");
        let mut p = SearchParams::qg(1.0);
        p.attribute_mask = Some(vec!["B".into()]);
        let beam = run_sd(&d, &fs, &p, None).unwrap();
        assert!(!beam.is_empty());
        assert!(beam
            .rules
            .iter()
            .all(|r| r.conjunction.iter().all(|f| f.starts_with("B "))));
        p.attribute_mask = Some(vec!["C".into()]);
        assert_eq!(
            run_sd(&d, &fs, &p, None),
            Err(ParamError::UnknownAttribute("C".into()))
        );
    }

    #[test]
    fn max_length_caps_passes() {
        let (d, fs) = load("A,B,class\ny,u,p\ny,u,p\ny,v,n\nn,u,n\n");
        let mut p = SearchParams::qg(1.0);
        p.max_conjunction_length = Some(1);
        let beam = run_sd(&d, &fs, &p, None).unwrap();
        assert!(beam.rules.iter().all(|r| r.len() == 1));
        p.max_conjunction_length = None;
        let beam = run_sd(&d, &fs, &p, None).unwrap();
        assert_eq!(beam.best().unwrap().text(), "A = y AND B = u");
    }

    #[test]
    fn beam_respects_capacity_and_order() {
        let (d, fs) = load("a,b,c,class\n1,2,3,p\n2,3,1,p\n3,1,2,p\n4,4,4,n\n1,3,2,n\n2,2,2,p\n");
        let mut p = SearchParams::qg(1.0);
        p.beam_width = 3;
        let beam = run_sd(&d, &fs, &p, None).unwrap();
        assert!(beam.rules.len() <= 3);
        for w in beam.rules.windows(2) {
            assert_eq!(beam_order(&p.measure(), None, &w[0], &w[1]), Ordering::Less);
        }
    }

    #[test]
    fn qc_rejects_negative_quality_rules() {
        let (d, fs) = d1();
        let beam = run_sd(&d, &fs, &SearchParams::qc(10.0), None).unwrap();
        assert!(beam.rules.iter().all(|r| r.quality >= 0.0));
    }
}
