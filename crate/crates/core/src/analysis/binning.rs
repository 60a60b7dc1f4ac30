use serde::{Deserialize, Serialize};

use crate::features::format_number;

/// Half-open interval `[lo, hi)`; `hi = None` is unbounded above.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: Option<f64>,
}

impl Interval {
    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && self.hi.is_none_or(|hi| v < hi)
    }

    /// Predicate text such as `age in [40, 52)`. The first interval of a
    /// partition is rendered as unbounded below.
    pub fn describe(&self, attribute: &str, first: bool) -> String {
        match (first, self.hi) {
            (true, Some(hi)) => format!("{attribute} < {}", format_number(hi)),
            (_, None) if first => format!("{attribute} = any"),
            (_, None) => format!("{attribute} >= {}", format_number(self.lo)),
            (false, Some(hi)) => format!(
                "{attribute} in [{}, {})",
                format_number(self.lo),
                format_number(hi)
            ),
        }
    }
}

/// Index of the interval of a partition that holds `v`. Values below the
/// first lower bound fall into the first interval.
pub fn interval_index(intervals: &[Interval], v: f64) -> usize {
    intervals.iter().rposition(|iv| v >= iv.lo).unwrap_or(0)
}

/// Greedy equal-frequency partition of `values`.
///
/// Intervals grow until they hold at least `min_per_interval` values and the
/// next value differs from the last one taken; a short remainder is merged
/// into the last interval, and intervals past `max_intervals` are merged into
/// the final one.
pub fn bin_numeric(values: &[f64], max_intervals: usize, min_per_interval: usize) -> Vec<Interval> {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    sorted.sort_by(f64::total_cmp);
    let Some(&first) = sorted.first() else {
        return Vec::new();
    };
    let n = sorted.len();
    let min = min_per_interval.max(1);
    if n < 2 * min || max_intervals <= 1 {
        return vec![Interval {
            lo: first,
            hi: None,
        }];
    }
    let mut starts = vec![0];
    let mut start = 0;
    loop {
        let mut end = start + min;
        while end < n && sorted[end] == sorted[end - 1] {
            end += 1;
        }
        if end >= n || n - end < min {
            break;
        }
        starts.push(end);
        start = end;
    }
    starts.truncate(max_intervals);
    starts
        .iter()
        .enumerate()
        .map(|(i, &s)| Interval {
            lo: sorted[s],
            hi: starts.get(i + 1).map(|&next| sorted[next]),
        })
        .collect()
}
