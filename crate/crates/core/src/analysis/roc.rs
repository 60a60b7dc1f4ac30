//! TP/FP and ROC space geometry.

use std::ops::{Mul, Sub};

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

use crate::features::CoverageStats;

/// A point in TP/FP space (counts) or ROC space (rates). `rule` refers back
/// to the rule the point was made from; anchors have none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HullPoint<T> {
    pub fp: T,
    pub tp: T,
    pub rule: Option<usize>,
}

impl<T> HullPoint<T> {
    pub fn new(fp: T, tp: T, rule: Option<usize>) -> Self {
        HullPoint { fp, tp, rule }
    }
}

/// `(FP / neg, TP / pos)`.
pub fn to_roc_point(stats: &CoverageStats, pos: usize, neg: usize) -> (f64, f64) {
    (stats.fp as f64 / neg as f64, stats.tp as f64 / pos as f64)
}

fn cross<T>(o: &HullPoint<T>, a: &HullPoint<T>, b: &HullPoint<T>) -> T
where
    T: Clone + Sub<Output = T> + Mul<Output = T>,
{
    (a.fp.clone() - o.fp.clone()) * (b.tp.clone() - o.tp.clone())
        - (a.tp.clone() - o.tp.clone()) * (b.fp.clone() - o.fp.clone())
}

/// Upper hull of `points` plus the anchors `(0, 0)` and `end`, ordered by
/// fp ascending. Collinear points are dropped; where several inputs share a
/// position the earliest one is kept.
pub fn upper_hull<T>(points: &[HullPoint<T>], end: (T, T)) -> Vec<HullPoint<T>>
where
    T: Clone + Ord + Zero + Sub<Output = T> + Mul<Output = T>,
{
    let mut all = Vec::with_capacity(points.len() + 2);
    all.push(HullPoint::new(T::zero(), T::zero(), None));
    all.push(HullPoint::new(end.0, end.1, None));
    all.extend_from_slice(points);
    all.sort_by(|a, b| a.fp.cmp(&b.fp).then_with(|| a.tp.cmp(&b.tp)));
    all.dedup_by(|b, a| a.fp == b.fp && a.tp == b.tp);

    let mut hull: Vec<HullPoint<T>> = Vec::new();
    for p in all {
        while hull.len() >= 2
            && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], &p) >= T::zero()
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull
}

/// Hull in TP/FP space anchored at `(0, 0)` and `(neg, pos)`.
pub fn convex_hull(points: &[HullPoint<i64>], pos: usize, neg: usize) -> Vec<HullPoint<i64>> {
    upper_hull(points, (neg as i64, pos as i64))
}

/// Hull in ROC space anchored at `(0, 0)` and `(1, 1)`.
pub fn convex_hull_roc(points: &[HullPoint<Ratio<i64>>]) -> Vec<HullPoint<Ratio<i64>>> {
    upper_hull(points, (Ratio::one(), Ratio::one()))
}

/// Exact rates of count points.
pub fn normalize(points: &[HullPoint<i64>], pos: usize, neg: usize) -> Vec<HullPoint<Ratio<i64>>> {
    points
        .iter()
        .map(|p| {
            HullPoint::new(
                Ratio::new(p.fp, neg as i64),
                Ratio::new(p.tp, pos as i64),
                p.rule,
            )
        })
        .collect()
}

/// Trapezoidal area under a hull given as `(fpr, tpr)` pairs ordered by fpr.
pub fn auc_of_hull(hull: &[(f64, f64)]) -> f64 {
    hull.windows(2)
        .map(|w| (w[1].0 - w[0].0) * (w[0].1 + w[1].1) / 2.0)
        .sum()
}

/// [`auc_of_hull`] in exact arithmetic.
pub fn auc_exact(hull: &[HullPoint<Ratio<i64>>]) -> Ratio<i64> {
    let two = Ratio::from_integer(2);
    hull.windows(2)
        .map(|w| (w[1].fp - w[0].fp) * (w[0].tp + w[1].tp) / two)
        .fold(Ratio::zero(), |acc, x| acc + x)
}

pub fn rates(hull: &[HullPoint<Ratio<i64>>]) -> Vec<(f64, f64)> {
    hull.iter()
        .map(|p| {
            (
                p.fp.to_f64().unwrap_or(f64::NAN),
                p.tp.to_f64().unwrap_or(f64::NAN),
            )
        })
        .collect()
}
