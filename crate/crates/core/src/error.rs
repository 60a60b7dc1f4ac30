use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DatasetError {
    #[error("malformed CSV on line {line}: {message}")]
    Csv { line: u64, message: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("input has no rows")]
    Empty,
    #[error("dataset exceeds the limit of {limit} examples")]
    TooLarge { limit: usize },
    #[error("read failed: {0}")]
    Io(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeatureError {
    #[error("cannot parse feature `{0}`")]
    Parse(String),
    #[error("unknown attribute in feature `{0}`")]
    UnknownAttribute(String),
    #[error("operator `{op}` is not valid on {kind} attribute `{attribute}`")]
    InvalidOperator {
        op: String,
        kind: String,
        attribute: String,
    },
    #[error("feature set has {count} features, above the cap of {cap}")]
    TooMany { count: usize, cap: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamError {
    #[error("g must exceed 0.1 (got {0})")]
    G(f64),
    #[error("c must be positive (got {0})")]
    C(f64),
    #[error("min support must lie in (0, 1] (got {0})")]
    MinSupport(f64),
    #[error("beam width must be positive")]
    BeamWidth,
    #[error("max conjunction length must be positive")]
    MaxLength,
    #[error("number must be positive")]
    ZeroNumber,
    #[error("requested {requested} rules but only {available} are available")]
    NumberTooLarge { requested: usize, available: usize },
    #[error("weighted search requires the q_g heuristic")]
    WeightedNeedsQg,
    #[error("unknown attribute `{0}` in attribute mask")]
    UnknownAttribute(String),
    #[error("rule covers examples outside the positive set")]
    NotPositive,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("degenerate contingency table: {0}")]
    DegenerateTable(String),
    #[error("attribute `{0}` has no non-missing values")]
    AllMissing(String),
    #[error("unknown attribute `{0}`")]
    UnknownAttribute(String),
}
