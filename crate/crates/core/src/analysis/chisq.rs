//! Pearson chi-square test of independence.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::AnalysisError;
use crate::features::CoverageStats;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub counts: Vec<Vec<u64>>,
}

impl ContingencyTable {
    pub fn new(rows: Vec<String>, cols: Vec<String>, counts: Vec<Vec<u64>>) -> Self {
        ContingencyTable { rows, cols, counts }
    }

    /// An unlabeled table, for tests and quick checks.
    pub fn from_counts(counts: Vec<Vec<u64>>) -> Self {
        let rows = (0..counts.len()).map(|i| format!("r{i}")).collect();
        let cols = (0..counts.first().map_or(0, Vec::len))
            .map(|j| format!("c{j}"))
            .collect();
        ContingencyTable { rows, cols, counts }
    }

    pub fn row_sums(&self) -> Vec<u64> {
        self.counts.iter().map(|r| r.iter().sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<u64> {
        let mut sums = vec![0; self.cols.len()];
        for row in &self.counts {
            for (s, c) in sums.iter_mut().zip(row) {
                *s += c;
            }
        }
        sums
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().flatten().sum()
    }

    fn check(&self) -> Result<(), AnalysisError> {
        if self.counts.len() < 2
            || self.counts.iter().any(|r| r.len() != self.cols.len())
            || self.cols.len() < 2
        {
            return Err(AnalysisError::DegenerateTable(
                "need at least 2 rows and 2 columns".into(),
            ));
        }
        if self.row_sums().contains(&0) {
            return Err(AnalysisError::DegenerateTable(
                "a row marginal is zero".into(),
            ));
        }
        if self.col_sums().contains(&0) {
            return Err(AnalysisError::DegenerateTable(
                "a column marginal is zero".into(),
            ));
        }
        Ok(())
    }

    /// `(O - E) / sqrt(E)` per cell.
    pub fn standardized_residuals(&self) -> Result<Vec<Vec<f64>>, AnalysisError> {
        self.check()?;
        let rows = self.row_sums();
        let cols = self.col_sums();
        let total = self.total() as f64;
        Ok(self
            .counts
            .iter()
            .zip(&rows)
            .map(|(row, &r)| {
                row.iter()
                    .zip(&cols)
                    .map(|(&o, &c)| {
                        let e = r as f64 * c as f64 / total;
                        (o as f64 - e) / e.sqrt()
                    })
                    .collect()
            })
            .collect())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ChiSquareOptions {
    /// Subtract 0.5 from every `|O - E|` before squaring.
    pub yates: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    /// The statistic as an exact rational.
    pub exact: BigRational,
    pub df: usize,
    pub p_value: f64,
}

pub fn chi_square(t: &ContingencyTable) -> Result<ChiSquare, AnalysisError> {
    chi_square_with(t, ChiSquareOptions::default())
}

pub fn chi_square_with(
    t: &ContingencyTable,
    opts: ChiSquareOptions,
) -> Result<ChiSquare, AnalysisError> {
    t.check()?;
    let rows = t.row_sums();
    let cols = t.col_sums();
    let total = BigInt::from(t.total());
    let half_total = BigRational::new(total.clone(), BigInt::from(2));
    // (O - E)^2 / E  =  (O*T - R*C)^2 / (T * R * C)
    let mut sum = BigRational::zero();
    for (row, &r) in t.counts.iter().zip(&rows) {
        for (&o, &c) in row.iter().zip(&cols) {
            let rc = BigInt::from(r) * BigInt::from(c);
            let mut diff = BigRational::from_integer((BigInt::from(o) * &total - &rc).abs());
            if opts.yates {
                diff -= &half_total;
                if diff.is_negative() {
                    diff = BigRational::zero();
                }
            }
            sum += &diff * &diff / BigRational::from_integer(&total * rc);
        }
    }
    let statistic = sum.to_f64().expect("finite statistic");
    let df = (t.rows.len() - 1) * (t.cols.len() - 1);
    Ok(ChiSquare {
        statistic,
        exact: sum,
        df,
        p_value: chi2_survival(statistic, df),
    })
}

/// `P(X >= x)` for a chi-square variable with `df` degrees of freedom, via
/// the regularized upper incomplete gamma function.
pub fn chi2_survival(x: f64, df: usize) -> f64 {
    if df == 0 {
        return f64::NAN;
    }
    if x <= 0.0 {
        return 1.0;
    }
    statrs::function::gamma::gamma_ur(df as f64 / 2.0, x / 2.0)
}

/// Significance level marker in the style of published rule tables.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StarLevel {
    #[serde(rename = "none")]
    None,
    #[serde(rename = "95%")]
    P95,
    #[serde(rename = "99%")]
    P99,
    #[serde(rename = "99.9%")]
    P999,
}

impl StarLevel {
    /// df = 1 critical values.
    pub fn for_statistic(statistic: f64) -> StarLevel {
        if statistic >= 10.828 {
            StarLevel::P999
        } else if statistic >= 6.635 {
            StarLevel::P99
        } else if statistic >= 3.841 {
            StarLevel::P95
        } else {
            StarLevel::None
        }
    }

    pub fn stars(self) -> &'static str {
        match self {
            StarLevel::None => "",
            StarLevel::P95 => "*",
            StarLevel::P99 => "**",
            StarLevel::P999 => "***",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Significance {
    pub statistic: f64,
    pub p_value: f64,
    pub level: StarLevel,
}

/// The 2x2 table `[[TP, FP], [Pos - TP, Neg - FP]]`.
pub fn rule_table(stats: &CoverageStats, pos: usize, neg: usize) -> ContingencyTable {
    ContingencyTable::new(
        vec!["covered".into(), "uncovered".into()],
        vec!["positive".into(), "negative".into()],
        vec![
            vec![stats.tp as u64, stats.fp as u64],
            vec![(pos - stats.tp) as u64, (neg - stats.fp) as u64],
        ],
    )
}

/// Chi-square significance of a rule's coverage. Rules covering every
/// example or none have no defined significance.
pub fn rule_significance(
    stats: &CoverageStats,
    d: &Dataset,
) -> Result<Significance, AnalysisError> {
    let result = chi_square(&rule_table(stats, d.pos(), d.neg()))?;
    Ok(Significance {
        statistic: result.statistic,
        p_value: result.p_value,
        level: StarLevel::for_statistic(result.statistic),
    })
}
