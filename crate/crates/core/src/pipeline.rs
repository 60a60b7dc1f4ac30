//! Discovery modes shared by the command line and the service.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::discovery::{run_dms, run_rss, run_sd, DmsOptions, Rule, SearchParams};
use crate::error::ParamError;
use crate::features::Feature;

/// Number of rules selected or constructed when none is requested.
pub const DEFAULT_NUMBER: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "sd")]
    Sd,
    #[serde(rename = "sd+rss")]
    SdRss,
    #[serde(rename = "dms")]
    Dms,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Sd => "sd",
            Mode::SdRss => "sd+rss",
            Mode::Dms => "dms",
        })
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sd" => Ok(Mode::Sd),
            "sd+rss" | "rss" => Ok(Mode::SdRss),
            "dms" => Ok(Mode::Dms),
            other => Err(format!(
                "unknown mode `{other}` (expected sd, sd+rss or dms)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ModeOutput {
    pub rules: Vec<Rule>,
    /// The full beam for `sd` and `sd+rss`.
    pub beam: Vec<Rule>,
    pub iterations: usize,
    pub diagnostics: Vec<String>,
}

/// Runs one discovery mode. For `sd+rss` an explicit `number` larger than
/// the beam is an error; the default is clipped to the beam size.
pub fn run_mode(
    d: &Dataset,
    features: &[Feature],
    params: &SearchParams,
    mode: Mode,
    number: Option<usize>,
    dms: &DmsOptions,
) -> Result<ModeOutput, ParamError> {
    let mut diagnostics = Vec::new();
    match mode {
        Mode::Sd | Mode::SdRss => {
            let beam = run_sd(d, features, params, None)?;
            if beam.is_empty() {
                diagnostics.push("no rule meets the minimum support".to_string());
            }
            let rules = if mode == Mode::Sd || beam.is_empty() {
                beam.rules.clone()
            } else {
                let n = number.unwrap_or(DEFAULT_NUMBER.min(beam.rules.len()));
                run_rss(&beam.rules, d.positives(), n)?
            };
            Ok(ModeOutput {
                rules,
                beam: beam.rules,
                iterations: beam.iterations,
                diagnostics,
            })
        }
        Mode::Dms => {
            let out = run_dms(d, features, params, number.unwrap_or(DEFAULT_NUMBER), dms)?;
            for dup in &out.duplicates {
                diagnostics.push(format!(
                    "iteration {} found `{}` again",
                    dup.iteration + 1,
                    dup.text
                ));
            }
            if out.stopped_early {
                diagnostics.push("an iteration produced an empty beam; stopped early".to_string());
            }
            Ok(ModeOutput {
                iterations: out.rules.len() + out.duplicates.len(),
                rules: out.rules,
                beam: Vec::new(),
                diagnostics,
            })
        }
    }
}
