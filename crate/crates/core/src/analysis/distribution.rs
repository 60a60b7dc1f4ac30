//! Per-attribute histograms of the positives, negatives and rule coverage.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::dataset::{AttributeKind, Dataset, Value};
use crate::discovery::Rule;
use crate::error::AnalysisError;
use crate::features::format_number;

pub const DEFAULT_BINS: usize = 20;
/// Integer attributes with at most this many distinct values get one bin
/// per value by default.
pub const PER_VALUE_LIMIT: usize = 40;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", tag = "kind", content = "bins")]
pub enum BinSpec {
    #[default]
    Default,
    EqualWidth(usize),
    PerValue,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum SeriesKind {
    AllPositives,
    AllNegatives,
    #[serde(rename = "ruleTP")]
    RuleTp,
    #[serde(rename = "ruleFP")]
    RuleFp,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Bin {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub y_plus: u64,
    pub y_minus: u64,
}

/// Positive-class series count upwards (`yPlus`), negative-class series
/// downwards (`yMinus`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DistributionSeries {
    pub attribute: String,
    pub bins: Vec<Bin>,
    pub series_kind: SeriesKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_id: Option<usize>,
    /// Members of the series whose value is missing.
    pub missing: u64,
}

enum Binning {
    Labels(Vec<String>),
    Values(Vec<f64>),
    Width {
        min: f64,
        max: f64,
        width: f64,
        n: usize,
    },
}

impl Binning {
    fn for_attribute(
        d: &Dataset,
        attribute: usize,
        spec: BinSpec,
    ) -> Result<Binning, AnalysisError> {
        let attr = d.attribute(attribute);
        let values: Vec<&Value> = (0..d.len())
            .map(|e| d.value(e, attribute))
            .filter(|v| !v.is_missing())
            .collect();
        if values.is_empty() {
            return Err(AnalysisError::AllMissing(attr.name.clone()));
        }
        if attr.kind == AttributeKind::Discrete {
            let seen: BTreeSet<&str> = values.iter().filter_map(|v| v.as_label()).collect();
            let mut labels: Vec<String> = attr.declared_values.clone().unwrap_or_default();
            let extra: Vec<String> = seen
                .into_iter()
                .filter(|s| !labels.iter().any(|l| l == s))
                .map(String::from)
                .collect();
            labels.extend(extra);
            return Ok(Binning::Labels(labels));
        }
        let mut nums: Vec<f64> = values.iter().filter_map(|v| v.as_number()).collect();
        nums.sort_by(f64::total_cmp);
        let (min, max) = (nums[0], nums[nums.len() - 1]);
        let mut distinct = nums.clone();
        distinct.dedup();
        let n = match spec {
            BinSpec::PerValue => return Ok(Binning::Values(distinct)),
            BinSpec::Default
                if attr.kind == AttributeKind::Integer && distinct.len() <= PER_VALUE_LIMIT =>
            {
                return Ok(Binning::Values(distinct));
            }
            BinSpec::Default => DEFAULT_BINS,
            BinSpec::EqualWidth(n) => n.max(1),
        };
        if min == max {
            return Ok(Binning::Width {
                min,
                max,
                width: 0.0,
                n: 1,
            });
        }
        Ok(Binning::Width {
            min,
            max,
            width: (max - min) / n as f64,
            n,
        })
    }

    fn len(&self) -> usize {
        match self {
            Binning::Labels(l) => l.len(),
            Binning::Values(v) => v.len(),
            Binning::Width { n, .. } => *n,
        }
    }

    fn index(&self, value: &Value) -> Option<usize> {
        match (self, value) {
            (Binning::Labels(labels), Value::Label(s)) => labels.iter().position(|l| l == s),
            (Binning::Values(vs), Value::Number(x)) => vs.binary_search_by(|v| v.total_cmp(x)).ok(),
            (Binning::Width { min, width, n, .. }, Value::Number(x)) => {
                if *width == 0.0 {
                    return Some(0);
                }
                let i = ((x - min) / width).floor();
                Some((i.max(0.0) as usize).min(n - 1))
            }
            _ => None,
        }
    }

    fn empty_bins(&self) -> Vec<Bin> {
        let bin = |lo: Option<f64>, hi: Option<f64>, label: Option<String>| Bin {
            lo,
            hi,
            label,
            y_plus: 0,
            y_minus: 0,
        };
        match self {
            Binning::Labels(labels) => labels
                .iter()
                .map(|l| bin(None, None, Some(l.clone())))
                .collect(),
            Binning::Values(vs) => vs
                .iter()
                .map(|&v| bin(Some(v), Some(v), Some(format_number(v))))
                .collect(),
            Binning::Width { min, max, width, n } => (0..*n)
                .map(|i| {
                    let lo = min + width * i as f64;
                    let hi = if i + 1 == *n {
                        *max
                    } else {
                        min + width * (i + 1) as f64
                    };
                    bin(Some(lo), Some(hi), None)
                })
                .collect(),
        }
    }

    fn series(
        &self,
        d: &Dataset,
        attribute: usize,
        members: &BitSet,
        kind: SeriesKind,
        rule_id: Option<usize>,
    ) -> DistributionSeries {
        let mut bins = self.empty_bins();
        let mut missing = 0;
        let upward = matches!(kind, SeriesKind::AllPositives | SeriesKind::RuleTp);
        for e in members.iter() {
            match self.index(d.value(e, attribute)) {
                Some(i) if upward => bins[i].y_plus += 1,
                Some(i) => bins[i].y_minus += 1,
                None => missing += 1,
            }
        }
        DistributionSeries {
            attribute: d.attribute(attribute).name.clone(),
            bins,
            series_kind: kind,
            rule_id,
            missing,
        }
    }
}

/// Series for one attribute: all positives, all negatives, then a TP series
/// per rule and, with `include_fp`, an FP series per rule.
pub fn distribution_series(
    d: &Dataset,
    attribute: usize,
    rules: &[(usize, &Rule)],
    spec: BinSpec,
    include_fp: bool,
) -> Result<Vec<DistributionSeries>, AnalysisError> {
    if attribute >= d.attributes().len() {
        return Err(AnalysisError::UnknownAttribute(attribute.to_string()));
    }
    let binning = Binning::for_attribute(d, attribute, spec)?;
    debug_assert!(binning.len() > 0);
    let mut out = vec![
        binning.series(d, attribute, d.positives(), SeriesKind::AllPositives, None),
        binning.series(d, attribute, d.negatives(), SeriesKind::AllNegatives, None),
    ];
    for &(id, rule) in rules {
        out.push(binning.series(
            d,
            attribute,
            &rule.stats.tp_set,
            SeriesKind::RuleTp,
            Some(id),
        ));
    }
    if include_fp {
        for &(id, rule) in rules {
            out.push(binning.series(
                d,
                attribute,
                &rule.stats.fp_set,
                SeriesKind::RuleFp,
                Some(id),
            ));
        }
    }
    Ok(out)
}

impl DistributionSeries {
    /// Bin counts plus missing members.
    pub fn total(&self) -> u64 {
        self.bins.iter().map(|b| b.y_plus + b.y_minus).sum::<u64>() + self.missing
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::{ingest_csv, IngestOptions};
    use crate::features::{coverage_of, Condition, Feature};

    fn ds(text: &str) -> Dataset {
        ingest_csv(text.as_bytes(), &IngestOptions::new("p")).unwrap()
    }

    fn rule(d: &Dataset, text: &str) -> Rule {
        let f = Feature::new(Condition::parse(text, d.attributes()).unwrap(), d);
        let stats = coverage_of(&[&f], d);
        Rule::new(vec![0], std::slice::from_ref(&f), stats, 0.0)
    }

    fn data() -> Dataset {
        ds("x,s,class\n1,a,p\n2,b,p\n3,a,p\n,b,n\n5,c,n\n6,a,n\n3,b,p\n")
    }

    #[test]
    fn integer_gets_per_value_bins() {
        let d = data();
        let all = distribution_series(&d, 0, &[], BinSpec::Default, false).unwrap();
        assert_eq!(all.len(), 2);
        let labels: Vec<_> = all[0]
            .bins
            .iter()
            .map(|b| b.label.clone().unwrap())
            .collect();
        assert_eq!(labels, vec!["1", "2", "3", "5", "6"]);
        assert_eq!(all[0].total(), d.pos() as u64);
        assert_eq!(all[1].total(), d.neg() as u64);
        assert_eq!(all[1].missing, 1);
        assert!(all[0].bins.iter().all(|b| b.y_minus == 0));
    }

    #[test]
    fn equal_width_bins() {
        let d = data();
        let all = distribution_series(&d, 0, &[], BinSpec::EqualWidth(5), false).unwrap();
        assert_eq!(all[0].bins.len(), 5);
        assert_eq!(all[0].bins[0].lo, Some(1.0));
        assert_eq!(all[0].bins[4].hi, Some(6.0));
        // [5, 6] is closed on the right
        assert_eq!(all[1].bins[4].y_minus, 2);
    }

    #[test]
    fn rule_series_conserve_coverage() {
        let d = data();
        let r = rule(&d, "s = a");
        let all = distribution_series(&d, 1, &[(7, &r)], BinSpec::Default, true).unwrap();
        assert_eq!(all.len(), 4);
        assert_eq!(all[2].series_kind, SeriesKind::RuleTp);
        assert_eq!(all[2].rule_id, Some(7));
        assert_eq!(all[2].total(), r.stats.tp as u64);
        assert_eq!(all[3].total(), r.stats.fp as u64);
    }

    #[test]
    fn full_coverage_matches_positives() {
        let d = data();
        let r = rule(&d, "x <= 10");
        let mut all = distribution_series(&d, 0, &[(0, &r)], BinSpec::Default, false).unwrap();
        let tp = all.pop().unwrap();
        assert_eq!(tp.bins, all[0].bins);
    }

    #[test]
    fn declared_order_is_kept() {
        let opts = IngestOptions {
            hints: crate::dataset::parse_schema_hints("s:discrete:c|b|a").unwrap(),
            ..IngestOptions::new("p")
        };
        let d = ingest_csv("s,class\na,p\nb,n\nc,p\n".as_bytes(), &opts).unwrap();
        let all = distribution_series(&d, 0, &[], BinSpec::Default, false).unwrap();
        let labels: Vec<_> = all[0]
            .bins
            .iter()
            .map(|b| b.label.clone().unwrap())
            .collect();
        assert_eq!(labels, vec!["c", "b", "a"]);
    }

    #[test]
    fn all_missing_is_an_error() {
        let d = ds("x,y,class\n,1,p\n,2,n\n");
        assert_eq!(
            distribution_series(&d, 0, &[], BinSpec::Default, false),
            Err(AnalysisError::AllMissing("x".into()))
        );
    }
}
