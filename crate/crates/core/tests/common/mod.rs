//! Random datasets and independent reference implementations.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use subdisc::dataset::{ingest_csv, parse_schema_hints, IngestOptions};
use subdisc::Dataset;

pub const CONTINUOUS_VALUES: [&str; 5] = ["0.5", "1.25", "2", "3.75", "5.5"];
pub const LABELS: [&str; 3] = ["a", "b", "c"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Discrete,
    Continuous,
    Integer,
}

/// A table kept as raw cells so the oracles never touch the library's
/// parsed representation.
#[derive(Clone, Debug)]
pub struct RawTable {
    pub names: Vec<String>,
    pub kinds: Vec<Kind>,
    pub rows: Vec<Vec<Option<String>>>,
    pub positive: Vec<bool>,
}

impl RawTable {
    pub fn random(seed: u64, max_examples: usize, max_attributes: usize) -> RawTable {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(8..=max_examples);
        let m = rng.gen_range(1..=max_attributes);
        let kinds: Vec<Kind> = (0..m)
            .map(|_| match rng.gen_range(0..3) {
                0 => Kind::Discrete,
                1 => Kind::Continuous,
                _ => Kind::Integer,
            })
            .collect();
        let domain: Vec<usize> = kinds.iter().map(|_| rng.gen_range(2..=3)).collect();
        let bias = rng.gen_range(0.25..0.6);
        let mut positive: Vec<bool> = (0..n).map(|_| rng.gen_bool(bias)).collect();
        positive[0] = true;
        positive[1] = false;
        let rows = (0..n)
            .map(|i| {
                kinds
                    .iter()
                    .zip(&domain)
                    .map(|(k, &dom)| {
                        if rng.gen_bool(0.05) {
                            return None;
                        }
                        // skew values by class so that good rules exist
                        let shift = usize::from(positive[i] && rng.gen_bool(0.5));
                        Some(match k {
                            Kind::Discrete => {
                                LABELS[(rng.gen_range(0..dom) + shift) % dom].to_string()
                            }
                            Kind::Continuous => CONTINUOUS_VALUES
                                [(rng.gen_range(0..dom + 1) + shift) % 5]
                                .to_string(),
                            Kind::Integer => ((rng.gen_range(0..dom + 2) + shift) % 5).to_string(),
                        })
                    })
                    .collect()
            })
            .collect();
        RawTable {
            names: (0..m).map(|i| format!("a{i}")).collect(),
            kinds,
            rows,
            positive,
        }
    }

    pub fn csv(&self) -> String {
        let mut out = self.names.join(",");
        out.push_str(",class\n");
        for (row, &pos) in self.rows.iter().zip(&self.positive) {
            for cell in row {
                out.push_str(cell.as_deref().unwrap_or(""));
                out.push(',');
            }
            out.push_str(if pos { "p\n" } else { "n\n" });
        }
        out
    }

    pub fn hints(&self) -> String {
        self.names
            .iter()
            .zip(&self.kinds)
            .map(|(n, k)| {
                let kind = match k {
                    Kind::Discrete => "discrete",
                    Kind::Continuous => "continuous",
                    Kind::Integer => "integer",
                };
                format!("{n}:{kind}")
            })
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn dataset(&self) -> Dataset {
        let opts = IngestOptions {
            hints: parse_schema_hints(&self.hints()).unwrap(),
            ..IngestOptions::new("p")
        };
        ingest_csv(self.csv().as_bytes(), &opts).unwrap()
    }

    pub fn pos(&self) -> usize {
        self.positive.iter().filter(|&&p| p).count()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    /// Coverage of a feature given in canonical text form.
    pub fn covers(&self, text: &str) -> Vec<bool> {
        let parts: Vec<&str> = text.split_whitespace().collect();
        assert_eq!(parts.len(), 3, "{text}");
        let a = self.names.iter().position(|n| n == parts[0]).unwrap();
        self.rows
            .iter()
            .map(|row| match &row[a] {
                None => false,
                Some(cell) => match parts[1] {
                    "=" => equal(cell, parts[2], self.kinds[a]),
                    "!=" => !equal(cell, parts[2], self.kinds[a]),
                    "<=" => cell.parse::<f64>().unwrap() <= parts[2].parse::<f64>().unwrap(),
                    ">" => cell.parse::<f64>().unwrap() > parts[2].parse::<f64>().unwrap(),
                    op => panic!("bad operator {op}"),
                },
            })
            .collect()
    }

    /// `(tp, fp)` of a conjunction given as per-feature coverage vectors.
    pub fn counts(&self, covers: &[&Vec<bool>]) -> (usize, usize) {
        let mut tp = 0;
        let mut fp = 0;
        for i in 0..self.len() {
            if covers.iter().all(|c| c[i]) {
                if self.positive[i] {
                    tp += 1;
                } else {
                    fp += 1;
                }
            }
        }
        (tp, fp)
    }
}

fn equal(cell: &str, value: &str, kind: Kind) -> bool {
    match kind {
        Kind::Discrete => cell == value,
        _ => cell.parse::<f64>().unwrap() == value.parse::<f64>().unwrap(),
    }
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `TP / (FP + g)` for `g = g_num / g_den`.
pub fn qg_exact(tp: usize, fp: usize, g: &BigRational) -> BigRational {
    int(tp) / (int(fp) + g)
}

/// Best q_g over every conjunction of one or two of `features`, subject to
/// the default support threshold `TP >= sqrt(Pos)`.
pub fn brute_force_qg(
    table: &RawTable,
    features: &[String],
    g: &BigRational,
) -> Option<BigRational> {
    let covers: Vec<Vec<bool>> = features.iter().map(|f| table.covers(f)).collect();
    let pos = table.pos();
    let mut best: Option<BigRational> = None;
    let mut consider = |tp: usize, fp: usize| {
        if tp * tp < pos {
            return;
        }
        let q = qg_exact(tp, fp, g);
        if best.as_ref().is_none_or(|b| q > *b) {
            best = Some(q);
        }
    };
    for i in 0..covers.len() {
        let (tp, fp) = table.counts(&[&covers[i]]);
        consider(tp, fp);
        for j in i + 1..covers.len() {
            let (tp, fp) = table.counts(&[&covers[i], &covers[j]]);
            consider(tp, fp);
        }
    }
    best
}

/// Feature triples `(attribute, op, threshold)` derived directly from the
/// construction rules, in the canonical order.
pub fn naive_features(table: &RawTable) -> Vec<(usize, &'static str, String)> {
    let mut out: Vec<(usize, u8, f64, String)> = Vec::new();
    for (a, kind) in table.kinds.iter().enumerate() {
        let cells: Vec<(&str, bool)> = table
            .rows
            .iter()
            .zip(&table.positive)
            .filter_map(|(r, &p)| r[a].as_deref().map(|c| (c, p)))
            .collect();
        if *kind != Kind::Continuous {
            for &(c, p) in &cells {
                let key = if *kind == Kind::Integer {
                    c.parse::<f64>().unwrap()
                } else {
                    0.0
                };
                let op = if p { 0 } else { 1 };
                out.push((a, op, key, c.to_string()));
            }
        }
        if *kind != Kind::Discrete {
            let mut distinct: Vec<f64> = cells
                .iter()
                .map(|(c, _)| c.parse::<f64>().unwrap())
                .collect();
            distinct.sort_by(f64::total_cmp);
            distinct.dedup();
            let has = |v: f64, cls: bool| {
                cells
                    .iter()
                    .any(|&(c, p)| p == cls && c.parse::<f64>().unwrap() == v)
            };
            for w in distinct.windows(2) {
                let m = (w[0] + w[1]) / 2.0;
                if has(w[0], true) && has(w[1], false) {
                    out.push((a, 2, m, String::new()));
                }
                if has(w[0], false) && has(w[1], true) {
                    out.push((a, 3, m, String::new()));
                }
            }
        }
    }
    out.sort_by(|x, y| {
        x.0.cmp(&y.0)
            .then(x.1.cmp(&y.1))
            .then(x.2.total_cmp(&y.2))
            .then_with(|| x.3.cmp(&y.3))
    });
    out.dedup_by(|x, y| x.0 == y.0 && x.1 == y.1 && x.2 == y.2 && x.3 == y.3);
    out.into_iter()
        .map(|(a, op, key, label)| {
            let sym = ["=", "!=", "<=", ">"][op as usize];
            // the value domains keep every threshold within 6 significant digits
            let value = match table.kinds[a] {
                Kind::Discrete => label,
                _ => format!("{key}"),
            };
            (a, sym, value)
        })
        .collect()
}

/// Regularized upper incomplete gamma values computed with 40-digit
/// arithmetic.
#[allow(clippy::excessive_precision)]
pub const SURVIVAL: [(f64, usize, f64); 12] = [
    (20.0, 1, 7.744216431044083637676381e-6),
    (3.6, 1, 0.05777957112359724059556976),
    (40.0, 1, 2.539628589470864970653362e-10),
    (0.5, 1, 0.4795001221869534623172533),
    (3.841, 1, 0.05001368376395669907573615),
    (10.828, 1, 0.0009997657195830923649178011),
    (7.5, 3, 0.05755845197263640696721583),
    (25.0, 10, 0.005345505487134064299327981),
    (60.0, 50, 0.1572420272383916035439725),
    (1e-3, 2, 0.9995001249791692705625352),
    (100.0, 4, 9.836624224615980693388448e-21),
    (12.5, 7, 0.08526927515826927512962857),
];
