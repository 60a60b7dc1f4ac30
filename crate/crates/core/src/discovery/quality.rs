//! Rule quality measures.
//!
//! Floating-point values are what gets reported; ordering decisions go
//! through [`Measure::compare`], which falls back to exact rational arithmetic
//! whenever two floating-point values are too close to call.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::dataset::Dataset;
use crate::features::CoverageStats;

/// `TP / (FP + g)`.
pub fn quality_qg(stats: &CoverageStats, g: f64) -> f64 {
    stats.tp as f64 / (stats.fp as f64 + g)
}

/// `TP - c * FP`.
pub fn quality_qc(stats: &CoverageStats, c: f64) -> f64 {
    stats.tp as f64 - c * stats.fp as f64
}

/// `(Σ_{e ∈ TP} 1/c(e)) / (FP + g)`.
pub fn quality_weighted_qg(stats: &CoverageStats, g: f64, w: &WeightVector) -> f64 {
    w.weight_sum(&stats.tp_set) / (stats.fp as f64 + g)
}

/// The line of constant `q_g` through a rule at `(FP, TP)` in TP/FP space:
/// `tp = TP * (fp + g) / (FP + g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EqualQualityLine {
    pub tp: BigRational,
    pub fp: BigRational,
    pub g: BigRational,
}

impl EqualQualityLine {
    pub fn new(tp: usize, fp: usize, g: &BigRational) -> Self {
        EqualQualityLine {
            tp: exact_int(tp),
            fp: exact_int(fp),
            g: g.clone(),
        }
    }

    /// Slope of the line, which is the rule's quality.
    pub fn slope(&self) -> BigRational {
        &self.tp / (&self.fp + &self.g)
    }

    pub fn tp_at(&self, fp: &BigRational) -> BigRational {
        self.slope() * (fp + &self.g)
    }

    /// Where the line meets the tp axis: `TP * g / (FP + g)`.
    pub fn tp_intercept(&self) -> BigRational {
        self.slope() * &self.g
    }

    /// Where the line meets the fp axis: `-g`.
    pub fn fp_intercept(&self) -> BigRational {
        -self.g.clone()
    }
}

pub(crate) fn exact(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite parameter")
}

pub(crate) fn exact_int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from_usize(n).expect("count fits"))
}

/// Example counters `c(e)` over the positive examples, all starting at 1.
///
/// Positives are bucketed by counter value so that weighted sums over a
/// coverage set reduce to one popcount per distinct counter value.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightVector {
    counters: Vec<u32>,
    levels: BTreeMap<u32, BitSet>,
}

impl WeightVector {
    pub fn new(d: &Dataset) -> Self {
        Self::from_positives(d.positives())
    }

    pub fn from_positives(positives: &BitSet) -> Self {
        let mut counters = vec![0; positives.len()];
        for e in positives.iter() {
            counters[e] = 1;
        }
        let mut levels = BTreeMap::new();
        if !positives.is_empty() {
            levels.insert(1, positives.clone());
        }
        WeightVector { counters, levels }
    }

    /// `c(e)`, or `None` for ids outside the positive set.
    pub fn counter(&self, e: usize) -> Option<u32> {
        self.counters.get(e).copied().filter(|&c| c > 0)
    }

    pub fn is_unit(&self) -> bool {
        self.levels.len() <= 1 && self.levels.contains_key(&1)
    }

    /// Increments `c(e)` for every positive in `covered`.
    pub fn increment(&mut self, covered: &BitSet) {
        for e in covered.iter() {
            let c = self.counters[e];
            if c == 0 {
                continue;
            }
            let level = self.levels.get_mut(&c).expect("counter level present");
            level.remove(e);
            if level.is_empty() {
                self.levels.remove(&c);
            }
            self.levels
                .entry(c + 1)
                .or_insert_with(|| BitSet::new(self.counters.len()))
                .insert(e);
            self.counters[e] = c + 1;
        }
    }

    /// `Σ 1/c(e)` over the positives in `covered`.
    pub fn weight_sum(&self, covered: &BitSet) -> f64 {
        self.levels
            .iter()
            .map(|(c, mask)| mask.intersection_count(covered) as f64 / *c as f64)
            .sum()
    }

    pub fn exact_weight_sum(&self, covered: &BitSet) -> BigRational {
        self.levels
            .iter()
            .fold(BigRational::zero(), |acc, (c, mask)| {
                acc + BigRational::new(
                    BigInt::from(mask.intersection_count(covered)),
                    BigInt::from(*c),
                )
            })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Heuristic {
    #[default]
    Qg,
    Qc,
}

/// A fully parameterised quality measure.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Measure {
    Generalization { g: f64 },
    Cost { c: f64 },
}

/// What a measure needs to know about a rule.
#[derive(Clone, Copy, Debug)]
pub struct Counts<'a> {
    /// Any superset of the rule's true positives restricted to the positives;
    /// the full coverage works.
    pub covered: &'a BitSet,
    pub tp: usize,
    pub fp: usize,
}

impl<'a> Counts<'a> {
    pub fn of(stats: &'a CoverageStats) -> Self {
        Counts {
            covered: &stats.tp_set,
            tp: stats.tp,
            fp: stats.fp,
        }
    }
}

const TIE_EPS: f64 = 1e-9;

fn near(a: f64, b: f64) -> bool {
    (a - b).abs() <= TIE_EPS * a.abs().max(b.abs()).max(1.0)
}

impl Measure {
    pub fn value(&self, counts: Counts<'_>, weights: Option<&WeightVector>) -> f64 {
        match *self {
            Measure::Generalization { g } => {
                let tp = match weights {
                    Some(w) => w.weight_sum(counts.covered),
                    None => counts.tp as f64,
                };
                tp / (counts.fp as f64 + g)
            }
            Measure::Cost { c } => counts.tp as f64 - c * counts.fp as f64,
        }
    }

    pub fn exact_value(&self, counts: Counts<'_>, weights: Option<&WeightVector>) -> BigRational {
        match *self {
            Measure::Generalization { g } => {
                let tp = match weights {
                    Some(w) => w.exact_weight_sum(counts.covered),
                    None => exact_int(counts.tp),
                };
                tp / (exact_int(counts.fp) + exact(g))
            }
            Measure::Cost { c } => exact_int(counts.tp) - exact(c) * exact_int(counts.fp),
        }
    }

    /// Orders two rules by quality, exactly. `a_value`/`b_value` are the
    /// floating-point values already computed for them.
    pub fn compare(
        &self,
        a: Counts<'_>,
        a_value: f64,
        b: Counts<'_>,
        b_value: f64,
        weights: Option<&WeightVector>,
    ) -> Ordering {
        if near(a_value, b_value) {
            self.exact_value(a, weights)
                .cmp(&self.exact_value(b, weights))
        } else {
            a_value.total_cmp(&b_value)
        }
    }

    /// Sign of the quality, exactly.
    pub fn sign(&self, counts: Counts<'_>, value: f64, weights: Option<&WeightVector>) -> Ordering {
        if near(value, 0.0) {
            self.exact_value(counts, weights).cmp(&BigRational::zero())
        } else {
            value.total_cmp(&0.0)
        }
    }
}
