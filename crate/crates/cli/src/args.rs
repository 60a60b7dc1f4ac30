use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use subdisc::discovery::{Heuristic, MinSupportRule, SearchParams};
use subdisc::pipeline::Mode;

#[derive(Debug, Parser)]
#[command(name = "subdisc", version, about = "Subgroup discovery on CSV data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Discover rules and write the report files.
    Run(RunArgs),
    /// Sweep g and c, pool the rules of each heuristic and compare their hulls.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HeuristicArg {
    Qg,
    Qc,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SupportRuleArg {
    /// sqrt(Pos) / |E|
    SqrtPosOverTotal,
    /// sqrt(Pos / |E|)
    SqrtPosFraction,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Plotdata,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PartitionSide {
    Covered,
    Uncovered,
}

/// Input and search flags common to both commands.
#[derive(Clone, Debug, Args)]
pub struct DataArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub target_class: String,
    /// Defaults to the last column.
    #[arg(long)]
    pub class_column: Option<String>,
    /// Kind hints such as `age:integer,stress:discrete:low|medium|high`.
    #[arg(long)]
    pub schema: Option<String>,
    /// Cell text treated as missing in addition to the empty cell.
    #[arg(long, default_value = "")]
    pub missing: String,
    /// Mine only the examples on one side of this feature, e.g. `sex = male`.
    #[arg(long)]
    pub partition: Option<String>,
    #[arg(long, value_enum, default_value = "covered")]
    pub partition_side: PartitionSide,
    #[arg(long)]
    pub min_support: Option<f64>,
    #[arg(long, value_enum, default_value = "sqrt-pos-over-total")]
    pub min_support_rule: SupportRuleArg,
    #[arg(long, default_value_t = 20)]
    pub beam_width: usize,
    #[arg(long)]
    pub max_length: Option<usize>,
    /// Attributes allowed in rule bodies.
    #[arg(long, value_delimiter = ',')]
    pub attributes: Option<Vec<String>>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "json")]
    pub format: Vec<Format>,
    /// Attributes to emit distribution series for.
    #[arg(long, value_delimiter = ',')]
    pub distribution: Option<Vec<String>>,
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, default_value = "sd")]
    pub mode: Mode,
    #[arg(long, value_enum, default_value = "qg")]
    pub heuristic: HeuristicArg,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
    /// Rules to select (sd+rss) or construct (dms).
    #[arg(long)]
    pub num_rules: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub rules_per_iteration: usize,
    /// Keep rules that a later dms iteration finds again.
    #[arg(long)]
    pub keep_duplicates: bool,
    /// Include covered example ids in rules.json.
    #[arg(long)]
    pub ids: bool,
    #[arg(long)]
    pub yates: bool,
    #[arg(long)]
    pub exclude_covered_negatives: bool,
}

pub const DEFAULT_G_GRID: [f64; 10] = [0.5, 1.0, 2.0, 4.0, 8.0, 12.0, 16.0, 20.0, 50.0, 100.0];

/// Ten log-spaced points over [0.1, 50].
pub fn default_c_grid() -> Vec<f64> {
    (0..10).map(|i| 0.1 * 500f64.powf(i as f64 / 9.0)).collect()
}

#[derive(Clone, Debug, Args)]
pub struct CompareArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long, value_delimiter = ',')]
    pub g_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub c_grid: Option<Vec<f64>>,
}

impl DataArgs {
    pub fn params(&self, heuristic: Heuristic, g: f64, c: f64) -> SearchParams {
        SearchParams {
            heuristic,
            g,
            c,
            min_support: self.min_support,
            min_support_rule: match self.min_support_rule {
                SupportRuleArg::SqrtPosOverTotal => MinSupportRule::SqrtPosOverTotal,
                SupportRuleArg::SqrtPosFraction => MinSupportRule::SqrtPosFraction,
            },
            beam_width: self.beam_width,
            max_conjunction_length: self.max_length,
            attribute_mask: self.attributes.clone(),
        }
    }

    pub fn wants(&self, f: Format) -> bool {
        self.format.contains(&f)
    }
}

impl RunArgs {
    pub fn params(&self) -> SearchParams {
        let h = match self.heuristic {
            HeuristicArg::Qg => Heuristic::Qg,
            HeuristicArg::Qc => Heuristic::Qc,
        };
        self.data.params(h, self.g, self.c)
    }
}
