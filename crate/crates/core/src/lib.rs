//! Subgroup discovery on binary-class tabular data.
//!
//! The pipeline is: [`dataset::ingest_csv`] builds a typed [`dataset::Dataset`],
//! [`features::build_feature_set`] derives the candidate conditions,
//! [`discovery`] searches for rules, and [`analysis`] characterizes them.

pub mod analysis;
pub mod bitset;
pub mod dataset;
pub mod discovery;
pub mod error;
pub mod features;
pub mod pipeline;
pub mod report;

pub use bitset::BitSet;
pub use dataset::{ingest_csv, Attribute, AttributeKind, Dataset, IngestOptions, Value};
pub use discovery::{run_dms, run_rss, run_sd, Beam, Heuristic, Rule, SearchParams};
pub use error::{AnalysisError, DatasetError, FeatureError, ParamError};
pub use features::{build_feature_set, CoverageStats, Feature, FeatureOptions};
