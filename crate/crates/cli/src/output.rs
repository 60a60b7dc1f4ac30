//! Report files and their writers.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use subdisc::analysis::DistributionSeries;
use subdisc::discovery::SearchParams;
use subdisc::pipeline::Mode;
use subdisc::report::{HullVertex, RuleReport};
use subdisc::Dataset;

use crate::compare::{Comparison, HeuristicSweep};
use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DatasetInfo {
    pub input: String,
    pub ingested: usize,
    pub examples: usize,
    pub pos: usize,
    pub neg: usize,
    pub target_class: String,
    pub other_class: String,
    pub class_column: String,
    pub partition: Option<String>,
    pub features: usize,
}

impl DatasetInfo {
    pub fn new(
        input: &Path,
        d: &Dataset,
        ingested: usize,
        partition: Option<String>,
        features: usize,
    ) -> Self {
        DatasetInfo {
            input: input.display().to_string(),
            ingested,
            examples: d.len(),
            pos: d.pos(),
            neg: d.neg(),
            target_class: d.target_class().to_string(),
            other_class: d.other_class().to_string(),
            class_column: d.class_column().to_string(),
            partition,
            features,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RulesFile {
    pub dataset: DatasetInfo,
    pub mode: Mode,
    pub params: SearchParams,
    pub min_support: f64,
    pub iterations: usize,
    pub beam_size: usize,
    pub rules: Vec<RuleReport>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HullFile {
    pub pos: usize,
    pub neg: usize,
    pub vertices: Vec<HullVertex>,
    pub auc: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DistributionsFile {
    pub attributes: Vec<String>,
    pub series: Vec<DistributionSeries>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ComparisonFile {
    pub dataset: DatasetInfo,
    pub params: SearchParams,
    #[serde(flatten)]
    pub comparison: Comparison,
}

pub fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report types serialize");
    text.push('\n');
    write_text(dir, name, &text)
}

pub fn write_text(dir: &Path, name: &str, text: &str) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| {
        CliError::new(
            crate::error::exit::IO,
            format!("cannot write {}: {e}", path.display()),
        )
    })
}

fn to_csv(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

fn opt<T: ToString>(v: &Option<T>) -> String {
    v.as_ref().map(T::to_string).unwrap_or_default()
}

pub fn rules_csv(rules: &[RuleReport]) -> String {
    to_csv(
        &[
            "ruleId",
            "text",
            "tp",
            "fp",
            "tpRate",
            "fpRate",
            "quality",
            "heuristic",
            "g",
            "c",
            "significance",
            "pValue",
        ],
        rules.iter().map(|r| {
            vec![
                opt(&r.rule_id),
                r.text.clone(),
                r.tp.to_string(),
                r.fp.to_string(),
                r.tp_rate.to_string(),
                r.fp_rate.to_string(),
                r.quality.to_string(),
                format!("{:?}", r.heuristic).to_lowercase(),
                opt(&r.g),
                opt(&r.c),
                opt(&r.significance),
                opt(&r.p_value),
            ]
        }),
    )
}

pub fn hull_csv(vertices: &[HullVertex]) -> String {
    to_csv(
        &["fp", "tp", "fpr", "tpr", "ruleId"],
        vertices.iter().map(|v| {
            vec![
                v.fp.to_string(),
                v.tp.to_string(),
                v.fpr.to_string(),
                v.tpr.to_string(),
                opt(&v.rule_id),
            ]
        }),
    )
}

/// Rows of an `x,y,series` plot table.
#[derive(Default)]
pub struct PlotData {
    rows: Vec<Vec<String>>,
}

impl PlotData {
    pub fn push(&mut self, x: impl ToString, y: impl ToString, series: &str) {
        self.rows
            .push(vec![x.to_string(), y.to_string(), series.to_string()]);
    }

    pub fn rules(&mut self, rules: &[RuleReport], series: &str) {
        for r in rules {
            self.push(r.fp, r.tp, series);
        }
    }

    pub fn hull(&mut self, hull: &[HullVertex], series: &str) {
        for v in hull {
            self.push(v.fp, v.tp, series);
        }
    }

    pub fn distributions(&mut self, series: &[DistributionSeries]) {
        for s in series {
            let name = match s.rule_id {
                Some(id) => format!("{}:{}:{id}", s.attribute, kind_name(s)),
                None => format!("{}:{}", s.attribute, kind_name(s)),
            };
            for b in &s.bins {
                let x = match (&b.label, b.lo, b.hi) {
                    (Some(l), _, _) => l.clone(),
                    (None, Some(lo), Some(hi)) => ((lo + hi) / 2.0).to_string(),
                    (None, Some(x), None) | (None, None, Some(x)) => x.to_string(),
                    (None, None, None) => String::new(),
                };
                let y = b.y_plus as i64 - b.y_minus as i64;
                self.push(x, y, &name);
            }
        }
    }

    pub fn render(&self) -> String {
        to_csv(&["x", "y", "series"], self.rows.iter().cloned())
    }
}

fn kind_name(s: &DistributionSeries) -> String {
    serde_json::to_value(s.series_kind)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

pub fn rules_summary(file: &RulesFile) -> String {
    let mut out = String::new();
    let ds = &file.dataset;
    out.push_str(&format!(
        "input: {}\nexamples: {} ({} {}, {} {})\n",
        ds.input, ds.examples, ds.pos, ds.target_class, ds.neg, ds.other_class
    ));
    if let Some(p) = &ds.partition {
        out.push_str(&format!(
            "partition: {p} ({} of {} ingested)\n",
            ds.examples, ds.ingested
        ));
    }
    out.push_str(&format!(
        "mode: {}  heuristic: {}  beam width: {}  min support: {:.4}\n",
        file.mode,
        param_text(&file.params),
        file.params.beam_width,
        file.min_support
    ));
    out.push_str(&format!(
        "features: {}  iterations: {}\n\n",
        ds.features, file.iterations
    ));
    out.push_str(&rule_table(&file.rules));
    for d in &file.diagnostics {
        out.push_str(&format!("note: {d}\n"));
    }
    out
}

fn param_text(p: &SearchParams) -> String {
    match p.heuristic {
        subdisc::Heuristic::Qg => format!("q_g (g = {})", p.g),
        subdisc::Heuristic::Qc => format!("q_c (c = {})", p.c),
    }
}

fn rule_table(rules: &[RuleReport]) -> String {
    let mut out = String::new();
    if rules.is_empty() {
        out.push_str("no rules\n");
        return out;
    }
    out.push_str(&format!(
        "{:>4} {:>5} {:>5} {:>10} {:>9}  {}\n",
        "id", "TP", "FP", "quality", "chi2", "rule"
    ));
    for r in rules {
        let stars = r.stars.map(|s| s.stars()).unwrap_or("");
        let chi = r
            .significance
            .map(|s| format!("{s:.3}{stars}"))
            .unwrap_or_else(|| "-".into());
        out.push_str(&format!(
            "{:>4} {:>5} {:>5} {:>10.4} {:>9}  {}\n",
            opt(&r.rule_id),
            r.tp,
            r.fp,
            r.quality,
            chi,
            r.text
        ));
        if let Some(f) = &r.supporting_factors {
            for s in &f.factors {
                out.push_str(&format!(
                    "{:>28}  {} {}: chi2 {:.3}, p {:.3e}, {}\n",
                    "",
                    match s.role {
                        subdisc::analysis::FactorRole::Principal => "principal",
                        subdisc::analysis::FactorRole::Supporting => "supporting",
                    },
                    s.attribute,
                    s.chi2,
                    s.p,
                    s.direction
                ));
            }
        }
    }
    out
}

pub fn comparison_summary(file: &ComparisonFile) -> String {
    let mut out = format!(
        "input: {}\nexamples: {} ({} {}, {} {})\nbeam width: {}\n\n",
        file.dataset.input,
        file.dataset.examples,
        file.dataset.pos,
        file.dataset.target_class,
        file.dataset.neg,
        file.dataset.other_class,
        file.comparison.beam_width
    );
    for (name, s) in [("q_g", &file.comparison.qg), ("q_c", &file.comparison.qc)] {
        out.push_str(&sweep_summary(name, s));
        out.push('\n');
    }
    out.push_str(&format!(
        "AUC difference (q_g - q_c): {:.6}\n",
        file.comparison.auc_difference
    ));
    out
}

fn sweep_summary(name: &str, s: &HeuristicSweep) -> String {
    let grid: Vec<String> = s.grid.iter().map(|v| format!("{v}")).collect();
    let hull: Vec<String> = s
        .hull
        .iter()
        .map(|v| format!("({},{})", v.fp, v.tp))
        .collect();
    format!(
        "{name}: grid [{}]\n  pooled rules: {}\n  hull: {}\n  AUC: {:.6}\n  TP at FP=0: {}\n",
        grid.join(", "),
        s.rules.len(),
        hull.join(" "),
        s.auc,
        s.tp_at_fp0
    )
}
