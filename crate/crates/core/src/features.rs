//! Feature construction and coverage.
//!
//! A feature is a single test `attribute op threshold`. For discrete attributes
//! the construction emits `A = v` for every value seen among positives and
//! `A != w` for every value seen among negatives. For continuous attributes it
//! walks the sorted distinct values and places a cut at the midpoint of every
//! neighbouring pair whose members come from different classes: `A <= m` when
//! the lower value is positive and the upper negative, `A > m` the other way
//! round. Integer attributes get both constructions.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::dataset::{Attribute, AttributeKind, Dataset, Value};
use crate::error::FeatureError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Op {
    Eq,
    Neq,
    Leq,
    Gt,
}

impl Op {
    pub fn symbol(self) -> &'static str {
        match self {
            Op::Eq => "=",
            Op::Neq => "!=",
            Op::Leq => "<=",
            Op::Gt => ">",
        }
    }

    pub fn valid_for(self, kind: AttributeKind) -> bool {
        match self {
            Op::Eq | Op::Neq => matches!(kind, AttributeKind::Discrete | AttributeKind::Integer),
            Op::Leq | Op::Gt => matches!(kind, AttributeKind::Continuous | AttributeKind::Integer),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Threshold {
    Label(String),
    Number(f64),
}

impl Threshold {
    fn cmp_key(&self, other: &Threshold) -> Ordering {
        match (self, other) {
            (Threshold::Number(a), Threshold::Number(b)) => a.total_cmp(b),
            (Threshold::Label(a), Threshold::Label(b)) => a.cmp(b),
            (Threshold::Number(_), Threshold::Label(_)) => Ordering::Less,
            (Threshold::Label(_), Threshold::Number(_)) => Ordering::Greater,
        }
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Label(s) => f.write_str(s),
            Threshold::Number(x) => f.write_str(&format_number(*x)),
        }
    }
}

/// Renders a number with at most 6 significant digits, ties to even.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.5e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(|c| c.is_ascii_digit()).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if !(-5..15).contains(&exp) {
        out.push_str(&digits[..1]);
        if digits.len() > 1 {
            out.push('.');
            out.push_str(&digits[1..]);
        }
        out.push_str(&format!("e{exp}"));
    } else if exp < 0 {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp - 1) as usize));
        out.push_str(digits);
    } else {
        let int_len = exp as usize + 1;
        if digits.len() <= int_len {
            out.push_str(digits);
            out.extend(std::iter::repeat_n('0', int_len - digits.len()));
        } else {
            out.push_str(&digits[..int_len]);
            out.push('.');
            out.push_str(&digits[int_len..]);
        }
    }
    out
}

/// A logical test on one attribute, without precomputed coverage.
#[derive(Clone, Debug, PartialEq)]
pub struct Condition {
    pub attribute: usize,
    pub op: Op,
    pub threshold: Threshold,
}

impl Condition {
    pub fn new(attribute: usize, op: Op, threshold: Threshold) -> Self {
        Condition {
            attribute,
            op,
            threshold,
        }
    }

    /// Missing values never satisfy a condition.
    pub fn matches(&self, value: &Value) -> bool {
        match (value, &self.threshold) {
            (Value::Missing, _) => false,
            (Value::Label(v), Threshold::Label(t)) => match self.op {
                Op::Eq => v == t,
                Op::Neq => v != t,
                Op::Leq | Op::Gt => false,
            },
            (Value::Number(v), Threshold::Number(t)) => match self.op {
                Op::Eq => v == t,
                Op::Neq => v != t,
                Op::Leq => v <= t,
                Op::Gt => v > t,
            },
            _ => false,
        }
    }

    pub fn coverage(&self, d: &Dataset) -> BitSet {
        BitSet::from_ids(
            d.len(),
            d.examples()
                .iter()
                .filter(|e| self.matches(&e.values[self.attribute]))
                .map(|e| e.id),
        )
    }

    pub fn canonical_text(&self, attributes: &[Attribute]) -> String {
        format!(
            "{} {} {}",
            attributes[self.attribute].name,
            self.op.symbol(),
            self.threshold
        )
    }

    fn sort_cmp(&self, other: &Condition) -> Ordering {
        self.attribute
            .cmp(&other.attribute)
            .then(self.op.cmp(&other.op))
            .then_with(|| self.threshold.cmp_key(&other.threshold))
    }

    /// Parses the canonical text form (`age <= 52.5`, `sex = male`). Spaces
    /// around the operator are optional.
    pub fn parse(text: &str, attributes: &[Attribute]) -> Result<Condition, FeatureError> {
        let text = text.trim();
        let mut by_len: Vec<(usize, &Attribute)> = attributes.iter().enumerate().collect();
        by_len.sort_by_key(|b| std::cmp::Reverse(b.1.name.len()));
        for (index, attr) in by_len {
            let Some(rest) = text.strip_prefix(attr.name.as_str()) else {
                continue;
            };
            let rest = rest.trim_start();
            let (op, value) = if let Some(v) = rest.strip_prefix("!=") {
                (Op::Neq, v)
            } else if let Some(v) = rest.strip_prefix("<=") {
                (Op::Leq, v)
            } else if let Some(v) = rest.strip_prefix('>') {
                (Op::Gt, v)
            } else if let Some(v) = rest.strip_prefix('=') {
                (Op::Eq, v)
            } else {
                continue;
            };
            let value = value.trim();
            if value.is_empty() {
                return Err(FeatureError::Parse(text.to_string()));
            }
            if !op.valid_for(attr.kind) {
                return Err(FeatureError::InvalidOperator {
                    op: op.symbol().to_string(),
                    kind: attr.kind.to_string(),
                    attribute: attr.name.clone(),
                });
            }
            let threshold = match attr.kind {
                AttributeKind::Discrete => Threshold::Label(value.to_string()),
                AttributeKind::Continuous | AttributeKind::Integer => Threshold::Number(
                    value
                        .parse::<f64>()
                        .ok()
                        .filter(|x| x.is_finite())
                        .ok_or_else(|| FeatureError::Parse(text.to_string()))?,
                ),
            };
            return Ok(Condition::new(index, op, threshold));
        }
        if attributes.iter().any(|a| text.starts_with(a.name.as_str())) {
            Err(FeatureError::Parse(text.to_string()))
        } else {
            Err(FeatureError::UnknownAttribute(text.to_string()))
        }
    }
}

/// A condition together with its coverage over one dataset.
#[derive(Clone, Debug, PartialEq)]
pub struct Feature {
    pub condition: Condition,
    pub text: String,
    pub coverage: BitSet,
}

impl Feature {
    pub fn new(condition: Condition, d: &Dataset) -> Self {
        let text = condition.canonical_text(d.attributes());
        let coverage = condition.coverage(d);
        Feature {
            condition,
            text,
            coverage,
        }
    }

    pub fn attribute(&self) -> usize {
        self.condition.attribute
    }
}

impl fmt::Display for Feature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[derive(Clone, Debug, Default)]
pub struct FeatureOptions {
    /// Hard cap on the size of the feature set.
    pub max_features: Option<usize>,
}

pub const FEATURE_WARN_THRESHOLD: usize = 100_000;

#[derive(Default)]
struct ValueClasses {
    in_pos: bool,
    in_neg: bool,
}

fn numeric_values(d: &Dataset, attribute: usize) -> Vec<(f64, ValueClasses)> {
    let mut seen: BTreeMap<u64, (f64, ValueClasses)> = BTreeMap::new();
    for ex in d.examples() {
        if let Value::Number(x) = ex.values[attribute] {
            // normalise -0.0 so it collapses with 0.0
            let x = if x == 0.0 { 0.0 } else { x };
            let entry = seen
                .entry(x.to_bits())
                .or_insert((x, ValueClasses::default()));
            if ex.is_positive() {
                entry.1.in_pos = true;
            } else {
                entry.1.in_neg = true;
            }
        }
    }
    let mut values: Vec<(f64, ValueClasses)> = seen.into_values().collect();
    values.sort_by(|a, b| a.0.total_cmp(&b.0));
    values
}

fn midpoint(a: f64, b: f64) -> f64 {
    let m = a + (b - a) / 2.0;
    if m >= b {
        a
    } else {
        m
    }
}

fn cut_conditions(attribute: usize, values: &[(f64, ValueClasses)]) -> Vec<Condition> {
    let mut out = Vec::new();
    for pair in values.windows(2) {
        let (lo, lo_cls) = (&pair[0].0, &pair[0].1);
        let (hi, hi_cls) = (&pair[1].0, &pair[1].1);
        let m = midpoint(*lo, *hi);
        if lo_cls.in_pos && hi_cls.in_neg {
            out.push(Condition::new(attribute, Op::Leq, Threshold::Number(m)));
        }
        if lo_cls.in_neg && hi_cls.in_pos {
            out.push(Condition::new(attribute, Op::Gt, Threshold::Number(m)));
        }
    }
    out
}

fn discrete_conditions(d: &Dataset, attribute: usize) -> Vec<Condition> {
    let kind = d.attribute(attribute).kind;
    let mut out = Vec::new();
    for ex in d.examples() {
        let threshold = match &ex.values[attribute] {
            Value::Missing => continue,
            Value::Label(s) => Threshold::Label(s.clone()),
            Value::Number(x) => Threshold::Number(if *x == 0.0 { 0.0 } else { *x }),
        };
        let op = if ex.is_positive() { Op::Eq } else { Op::Neq };
        debug_assert!(op.valid_for(kind));
        out.push(Condition::new(attribute, op, threshold));
    }
    out
}

/// Candidate conditions for every attribute, sorted and deduplicated.
pub fn feature_conditions(d: &Dataset) -> Vec<Condition> {
    let mut conditions = Vec::new();
    for (i, attr) in d.attributes().iter().enumerate() {
        if matches!(attr.kind, AttributeKind::Discrete | AttributeKind::Integer) {
            conditions.extend(discrete_conditions(d, i));
        }
        if attr.kind.is_numeric() {
            conditions.extend(cut_conditions(i, &numeric_values(d, i)));
        }
    }
    conditions.sort_by(|a, b| a.sort_cmp(b));
    conditions.dedup_by(|a, b| a.sort_cmp(b) == Ordering::Equal);
    conditions
}

/// Builds the feature set `L` with coverage vectors.
pub fn build_feature_set(d: &Dataset, opts: &FeatureOptions) -> Result<Vec<Feature>, FeatureError> {
    let conditions = feature_conditions(d);
    if let Some(cap) = opts.max_features {
        if conditions.len() > cap {
            return Err(FeatureError::TooMany {
                count: conditions.len(),
                cap,
            });
        }
    }
    if conditions.len() > FEATURE_WARN_THRESHOLD {
        log::warn!("feature set has {} features", conditions.len());
    }
    Ok(conditions.into_iter().map(|c| Feature::new(c, d)).collect())
}

/// True and false positives covered by a rule body.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverageStats {
    pub tp: usize,
    pub fp: usize,
    pub tp_set: BitSet,
    pub fp_set: BitSet,
}

impl CoverageStats {
    pub fn from_covered(covered: &BitSet, d: &Dataset) -> Self {
        let tp_set = covered.intersection(d.positives());
        let fp_set = covered.intersection(d.negatives());
        CoverageStats {
            tp: tp_set.count(),
            fp: fp_set.count(),
            tp_set,
            fp_set,
        }
    }

    pub fn covered(&self) -> BitSet {
        let mut all = self.tp_set.clone();
        all.union_with(&self.fp_set);
        all
    }

    pub fn same_coverage(&self, other: &CoverageStats) -> bool {
        self.tp_set == other.tp_set && self.fp_set == other.fp_set
    }
}

/// Coverage of the conjunction of `features`. The empty conjunction covers
/// every example.
pub fn coverage_of(features: &[&Feature], d: &Dataset) -> CoverageStats {
    let mut covered = BitSet::full(d.len());
    for f in features {
        covered.intersect_with(&f.coverage);
    }
    CoverageStats::from_covered(&covered, d)
}

/// True when `candidate` is irrelevant with respect to `reference`: its true
/// positives are a subset of the reference's and its false positives a
/// superset. Identical coverage counts as domination.
pub fn dominates(reference: &CoverageStats, candidate: &CoverageStats) -> bool {
    candidate.tp <= reference.tp
        && candidate.fp >= reference.fp
        && candidate.tp_set.is_subset(&reference.tp_set)
        && candidate.fp_set.is_superset(&reference.fp_set)
}
