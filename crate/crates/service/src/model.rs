//! Request and response bodies.

use serde::{Deserialize, Serialize};

use subdisc::analysis::{DistributionSeries, FactorReport};
use subdisc::discovery::SearchParams;
use subdisc::pipeline::Mode;
use subdisc::report::{HullVertex, RuleReport};
use subdisc::Attribute;

/// Query of `POST /datasets`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DatasetQuery {
    pub target_class: Option<String>,
    pub class_column: Option<String>,
    pub schema: Option<String>,
    pub missing: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DatasetSummary {
    pub dataset_id: String,
    pub examples: usize,
    pub pos: usize,
    pub neg: usize,
    pub target_class: String,
    pub other_class: String,
    pub class_column: String,
    pub attributes: Vec<Attribute>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionSide {
    #[default]
    Covered,
    Uncovered,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CreateSession {
    pub dataset_id: String,
    #[serde(default)]
    pub partition_feature: Option<String>,
    #[serde(default)]
    pub partition_side: PartitionSide,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionCreated {
    pub session_id: String,
    pub dataset_id: String,
    pub partition_feature: Option<String>,
    pub partition_side: PartitionSide,
    pub examples: usize,
    pub pos: usize,
    pub neg: usize,
    pub features: usize,
}

fn default_mode() -> Mode {
    Mode::Sd
}

fn default_true() -> bool {
    true
}

fn default_one() -> usize {
    1
}

/// Body of `POST /sessions/{id}/discover`: the search parameters plus the
/// mode. DMS still honours `dedupe` and `rulesPerIteration`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscoverRequest {
    #[serde(default = "default_mode")]
    pub mode: Mode,
    #[serde(default)]
    pub number: Option<usize>,
    #[serde(default = "default_true")]
    pub dedupe: bool,
    #[serde(default = "default_one")]
    pub rules_per_iteration: usize,
    #[serde(flatten)]
    pub params: SearchParams,
}

impl Default for DiscoverRequest {
    fn default() -> Self {
        DiscoverRequest {
            mode: Mode::Sd,
            number: None,
            dedupe: true,
            rules_per_iteration: 1,
            params: SearchParams::default(),
        }
    }
}

/// One discovery call as kept in the session history.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Iteration {
    pub iteration: usize,
    pub mode: Mode,
    pub number: Option<usize>,
    pub params: SearchParams,
    pub min_support: f64,
    pub rule_ids: Vec<usize>,
    /// No rule met the admission criteria.
    pub empty: bool,
    pub diagnostics: Vec<String>,
    /// Milliseconds since the Unix epoch.
    pub timestamp: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiscoverResponse {
    #[serde(flatten)]
    pub iteration: Iteration,
    pub rules: Vec<RuleReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AutoSelect {
    pub number: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SelectRequest {
    #[serde(default)]
    pub rule_ids: Option<Vec<usize>>,
    #[serde(default)]
    pub auto: Option<AutoSelect>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SelectionMode {
    Manual,
    Auto,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SelectResponse {
    pub mode: SelectionMode,
    pub rules: Vec<RuleReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionView {
    pub session_id: String,
    pub dataset_id: String,
    pub partition_feature: Option<String>,
    pub partition_side: PartitionSide,
    pub examples: usize,
    pub pos: usize,
    pub neg: usize,
    pub attributes: Vec<Attribute>,
    pub history: Vec<Iteration>,
    pub rules: Vec<RuleReport>,
    pub selected: Vec<usize>,
    pub selection_mode: Option<SelectionMode>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FactorsResponse {
    pub rule_id: usize,
    #[serde(flatten)]
    pub report: FactorReport,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    #[default]
    Tpfp,
    Roc,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HullPointView {
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule_id: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HullResponse {
    pub space: Space,
    pub pos: usize,
    pub neg: usize,
    pub vertices: Vec<HullVertex>,
    /// The vertices in the requested space.
    pub points: Vec<HullPointView>,
    pub auc: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DistributionResponse {
    pub attribute: String,
    pub series: Vec<DistributionSeries>,
}
