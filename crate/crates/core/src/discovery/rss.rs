use std::cmp::Ordering;

use num_rational::BigRational;

use crate::bitset::BitSet;
use crate::error::ParamError;

use super::quality::WeightVector;
use super::Rule;

/// One selection made by [`rss_select`].
#[derive(Clone, Debug, PartialEq)]
pub struct RssStep {
    /// Index into the input rule list.
    pub index: usize,
    /// `Σ 1/c(e)` over the rule's true positives at the time it was picked.
    pub weight: BigRational,
    /// Counters after the selection.
    pub counters: WeightVector,
}

/// Weighted covering selection of `number` rules out of `rules`.
///
/// Each round picks the rule whose covered positives have the largest
/// `Σ 1/c(e)`, then bumps `c(e)` for those positives. Ties go to the rule that
/// comes first under [`Rule::canonical_cmp`].
pub fn rss_select(
    rules: &[Rule],
    positives: &BitSet,
    number: usize,
) -> Result<Vec<RssStep>, ParamError> {
    if number == 0 {
        return Err(ParamError::ZeroNumber);
    }
    if number > rules.len() {
        return Err(ParamError::NumberTooLarge {
            requested: number,
            available: rules.len(),
        });
    }
    if rules.iter().any(|r| !r.stats.tp_set.is_subset(positives)) {
        return Err(ParamError::NotPositive);
    }
    let mut counters = WeightVector::from_positives(positives);
    let mut remaining: Vec<usize> = (0..rules.len()).collect();
    remaining.sort_by(|&a, &b| rules[a].canonical_cmp(&rules[b]));
    let mut steps = Vec::with_capacity(number);
    for _ in 0..number {
        let mut best: Option<(usize, BigRational)> = None;
        for (slot, &i) in remaining.iter().enumerate() {
            let w = counters.exact_weight_sum(&rules[i].stats.tp_set);
            // strict: earlier rules in canonical order win ties
            if best
                .as_ref()
                .is_none_or(|(_, bw)| w.cmp(bw) == Ordering::Greater)
            {
                best = Some((slot, w));
            }
        }
        let (slot, weight) = best.expect("remaining rules");
        let index = remaining.remove(slot);
        counters.increment(&rules[index].stats.tp_set);
        steps.push(RssStep {
            index,
            weight,
            counters: counters.clone(),
        });
    }
    Ok(steps)
}

/// The selected rules, in selection order.
pub fn run_rss(rules: &[Rule], positives: &BitSet, number: usize) -> Result<Vec<Rule>, ParamError> {
    Ok(rss_select(rules, positives, number)?
        .into_iter()
        .map(|s| rules[s.index].clone())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::features::CoverageStats;
    use num_bigint::BigInt;

    const N: usize = 8;

    fn rule(name: &str, tp: &[usize], quality: f64) -> Rule {
        Rule {
            feature_ids: vec![],
            conjunction: vec![name.to_string()],
            stats: CoverageStats {
                tp: tp.len(),
                fp: 0,
                tp_set: BitSet::from_ids(N, tp.iter().copied()),
                fp_set: BitSet::new(N),
            },
            quality,
            significance: None,
        }
    }

    fn positives() -> BitSet {
        BitSet::from_ids(N, 0..4)
    }

    fn ratio(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn worked_example() {
        // e1..e4 are ids 0..3
        let s = vec![
            rule("R1", &[0, 1, 2], 1.0),
            rule("R2", &[2, 3], 1.0),
            rule("R3", &[0, 1], 1.0),
        ];
        let steps = rss_select(&s, &positives(), 2).unwrap();
        assert_eq!(
            steps.iter().map(|s| s.index).collect::<Vec<_>>(),
            vec![0, 1]
        );
        assert_eq!(steps[0].weight, ratio(3, 1));
        assert_eq!(steps[1].weight, ratio(3, 2));
        let c = &steps[1].counters;
        assert_eq!(
            (0..4).map(|e| c.counter(e).unwrap()).collect::<Vec<_>>(),
            vec![2, 2, 3, 2]
        );
    }

    #[test]
    fn exhaustion_is_permutation() {
        let s = vec![
            rule("a", &[0], 1.0),
            rule("b", &[1, 2], 1.0),
            rule("c", &[3], 1.0),
        ];
        let mut picked: Vec<usize> = rss_select(&s, &positives(), 3)
            .unwrap()
            .iter()
            .map(|s| s.index)
            .collect();
        picked.sort();
        assert_eq!(picked, vec![0, 1, 2]);
    }

    #[test]
    fn identical_coverage_follows_canonical_order() {
        let s = vec![
            rule("b", &[0, 1], 1.0),
            rule("a", &[0, 1], 1.0),
            rule("c", &[0, 1], 2.0),
        ];
        let order: Vec<usize> = rss_select(&s, &positives(), 3)
            .unwrap()
            .iter()
            .map(|s| s.index)
            .collect();
        assert_eq!(order, vec![2, 1, 0]);
    }

    #[test]
    fn parameter_errors() {
        let s = vec![rule("a", &[0], 1.0)];
        assert_eq!(
            rss_select(&s, &positives(), 2),
            Err(ParamError::NumberTooLarge {
                requested: 2,
                available: 1
            })
        );
        assert_eq!(rss_select(&s, &positives(), 0), Err(ParamError::ZeroNumber));
        let bad = vec![rule("a", &[6], 1.0)];
        assert_eq!(
            rss_select(&bad, &positives(), 1),
            Err(ParamError::NotPositive)
        );
    }
}
