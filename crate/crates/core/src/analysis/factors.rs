//! Supporting factors: attributes whose distribution in a rule's true
//! positives differs from the distribution among negatives.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::dataset::{AttributeKind, Dataset};
use crate::discovery::Rule;
use crate::features::Condition;

use super::binning::{bin_numeric, interval_index};
use super::chisq::{chi_square_with, ChiSquareOptions, ContingencyTable};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct FactorOptions {
    pub alpha: f64,
    pub max_intervals: usize,
    pub min_per_interval: usize,
    /// Leave the rule's false positives out of the reference population.
    pub exclude_covered_negatives: bool,
    pub yates: bool,
}

impl Default for FactorOptions {
    fn default() -> Self {
        FactorOptions {
            alpha: 0.05,
            max_intervals: 30,
            min_per_interval: 5,
            exclude_covered_negatives: false,
            yates: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorRole {
    Principal,
    Supporting,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportingFactor {
    pub attribute: String,
    pub chi2: f64,
    pub df: usize,
    pub p: f64,
    pub role: FactorRole,
    pub direction: String,
    /// Standardized residual of the cell named in `direction`.
    pub residual: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FactorReport {
    pub factors: Vec<SupportingFactor>,
    pub diagnostics: Vec<String>,
    pub low_power: bool,
}

/// Attribute indices named by the rule's conjunction.
pub fn principal_attributes(rule: &Rule, d: &Dataset) -> BTreeSet<usize> {
    rule.conjunction
        .iter()
        .filter_map(|text| Condition::parse(text, d.attributes()).ok())
        .map(|c| c.attribute)
        .collect()
}

/// Target/reference table for one attribute. Row labels describe the value
/// or interval; examples with a missing value are left out.
pub fn attribute_table(
    d: &Dataset,
    attribute: usize,
    target: &BitSet,
    reference: &BitSet,
    opts: &FactorOptions,
) -> ContingencyTable {
    let name = &d.attribute(attribute).name;
    let cols = vec!["target".to_string(), "reference".to_string()];
    if d.attribute(attribute).kind == AttributeKind::Discrete {
        let mut counts: BTreeMap<&str, [u64; 2]> = BTreeMap::new();
        for (col, set) in [target, reference].into_iter().enumerate() {
            for e in set.iter() {
                if let Some(label) = d.value(e, attribute).as_label() {
                    counts.entry(label).or_default()[col] += 1;
                }
            }
        }
        let order: Vec<&str> = match &d.attribute(attribute).declared_values {
            Some(declared) => declared
                .iter()
                .map(String::as_str)
                .filter(|v| counts.contains_key(v))
                .chain(
                    counts
                        .keys()
                        .copied()
                        .filter(|k| !declared.iter().any(|v| v == k)),
                )
                .collect(),
            None => counts.keys().copied().collect(),
        };
        let rows = order.iter().map(|v| format!("{name} = {v}")).collect();
        let table = order.iter().map(|v| counts[v].to_vec()).collect();
        return ContingencyTable::new(rows, cols, table);
    }

    let mut values = Vec::new();
    for set in [target, reference] {
        values.extend(set.iter().filter_map(|e| d.value(e, attribute).as_number()));
    }
    let intervals = bin_numeric(&values, opts.max_intervals, opts.min_per_interval);
    let mut table = vec![vec![0u64; 2]; intervals.len()];
    for (col, set) in [target, reference].into_iter().enumerate() {
        for e in set.iter() {
            if let Some(x) = d.value(e, attribute).as_number() {
                table[interval_index(&intervals, x)][col] += 1;
            }
        }
    }
    let rows = intervals
        .iter()
        .enumerate()
        .map(|(i, iv)| iv.describe(name, i == 0))
        .collect();
    ContingencyTable::new(rows, cols, table)
}

/// Chi-square comparison of every attribute between the rule's true
/// positives and the negatives.
pub fn supporting_factors(rule: &Rule, d: &Dataset, opts: &FactorOptions) -> FactorReport {
    let target = &rule.stats.tp_set;
    let reference = if opts.exclude_covered_negatives {
        d.negatives().difference(&rule.stats.fp_set)
    } else {
        d.negatives().clone()
    };
    let principal = principal_attributes(rule, d);
    let mut report = FactorReport {
        low_power: rule.stats.tp < 2 * opts.min_per_interval,
        ..FactorReport::default()
    };
    if report.low_power {
        report.diagnostics.push(format!(
            "only {} true positives; results have low power",
            rule.stats.tp
        ));
    }
    for (a, attr) in d.attributes().iter().enumerate() {
        let mut table = attribute_table(d, a, target, &reference, opts);
        // values absent from both populations carry no information
        let keep: Vec<bool> = table
            .counts
            .iter()
            .map(|r| r.iter().any(|&c| c > 0))
            .collect();
        let mut k = keep.iter();
        table.rows.retain(|_| *k.next().unwrap());
        table.counts.retain(|r| r.iter().any(|&c| c > 0));
        let result = match chi_square_with(&table, ChiSquareOptions { yates: opts.yates }) {
            Ok(r) => r,
            Err(e) => {
                report
                    .diagnostics
                    .push(format!("{}: skipped ({e})", attr.name));
                continue;
            }
        };
        if result.p_value > opts.alpha {
            continue;
        }
        let residuals = table.standardized_residuals().expect("checked table");
        let (row, residual) = residuals.iter().map(|r| r[0]).enumerate().fold(
            (0, f64::NEG_INFINITY),
            |best, (i, r)| if r > best.1 { (i, r) } else { best },
        );
        report.factors.push(SupportingFactor {
            attribute: attr.name.clone(),
            chi2: result.statistic,
            df: result.df,
            p: result.p_value,
            role: if principal.contains(&a) {
                FactorRole::Principal
            } else {
                FactorRole::Supporting
            },
            direction: format!("{} over-represented", table.rows[row]),
            residual,
        });
    }
    report
}
