//! The attribute table, CSV ingestion and population partitioning.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::DatasetError;
use crate::features::Condition;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttributeKind {
    Discrete,
    Continuous,
    Integer,
}

impl AttributeKind {
    pub fn is_numeric(self) -> bool {
        matches!(self, AttributeKind::Continuous | AttributeKind::Integer)
    }
}

impl fmt::Display for AttributeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttributeKind::Discrete => "discrete",
            AttributeKind::Continuous => "continuous",
            AttributeKind::Integer => "integer",
        })
    }
}

impl FromStr for AttributeKind {
    type Err = DatasetError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "discrete" | "categorical" | "nominal" => Ok(AttributeKind::Discrete),
            "continuous" | "real" | "numeric" => Ok(AttributeKind::Continuous),
            "integer" | "int" => Ok(AttributeKind::Integer),
            other => Err(DatasetError::Schema(format!(
                "unknown attribute kind `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Attribute {
    pub name: String,
    pub kind: AttributeKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_values: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Missing,
    Label(String),
    Number(f64),
}

impl Value {
    pub fn is_missing(&self) -> bool {
        matches!(self, Value::Missing)
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Number(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_label(&self) -> Option<&str> {
        match self {
            Value::Label(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassLabel {
    Positive,
    Negative,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Example {
    pub id: usize,
    pub values: Vec<Value>,
    pub label: ClassLabel,
}

impl Example {
    pub fn is_positive(&self) -> bool {
        self.label == ClassLabel::Positive
    }
}

/// A typed table with a binary class. Immutable once built.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    attributes: Vec<Attribute>,
    examples: Vec<Example>,
    target_class: String,
    other_class: String,
    class_column: String,
    /// `original_ids[i]` is the id example `i` had in the ingested table.
    original_ids: Vec<usize>,
    positives: BitSet,
    negatives: BitSet,
}

impl Dataset {
    /// Assembles a dataset from parts. Example ids are reassigned to `0..n`
    /// in the given order.
    pub fn new(
        attributes: Vec<Attribute>,
        examples: Vec<Example>,
        target_class: impl Into<String>,
        other_class: impl Into<String>,
    ) -> Result<Self, DatasetError> {
        let n = examples.len();
        Self::from_parts(
            attributes,
            examples,
            target_class.into(),
            other_class.into(),
            "class".to_string(),
            (0..n).collect(),
        )
    }

    fn from_parts(
        attributes: Vec<Attribute>,
        mut examples: Vec<Example>,
        target_class: String,
        other_class: String,
        class_column: String,
        original_ids: Vec<usize>,
    ) -> Result<Self, DatasetError> {
        let mut names = BTreeSet::new();
        for a in &attributes {
            if !names.insert(a.name.as_str()) {
                return Err(DatasetError::Schema(format!(
                    "duplicate attribute name `{}`",
                    a.name
                )));
            }
        }
        let n = examples.len();
        let mut positives = BitSet::new(n);
        let mut negatives = BitSet::new(n);
        for (i, ex) in examples.iter_mut().enumerate() {
            ex.id = i;
            if ex.values.len() != attributes.len() {
                return Err(DatasetError::Schema(format!(
                    "example {i} has {} values, expected {}",
                    ex.values.len(),
                    attributes.len()
                )));
            }
            for (v, a) in ex.values.iter().zip(&attributes) {
                let ok = match (v, a.kind) {
                    (Value::Missing, _) => true,
                    (Value::Label(_), AttributeKind::Discrete) => true,
                    (Value::Number(x), AttributeKind::Continuous) => x.is_finite(),
                    (Value::Number(x), AttributeKind::Integer) => x.is_finite() && x.fract() == 0.0,
                    _ => false,
                };
                if !ok {
                    return Err(DatasetError::Schema(format!(
                        "example {i}: value {v:?} does not conform to {} attribute `{}`",
                        a.kind, a.name
                    )));
                }
            }
            match ex.label {
                ClassLabel::Positive => positives.insert(i),
                ClassLabel::Negative => negatives.insert(i),
            }
        }
        Ok(Dataset {
            attributes,
            examples,
            target_class,
            other_class,
            class_column,
            original_ids,
            positives,
            negatives,
        })
    }

    pub fn attributes(&self) -> &[Attribute] {
        &self.attributes
    }

    pub fn attribute(&self, index: usize) -> &Attribute {
        &self.attributes[index]
    }

    pub fn attribute_index(&self, name: &str) -> Option<usize> {
        self.attributes.iter().position(|a| a.name == name)
    }

    pub fn examples(&self) -> &[Example] {
        &self.examples
    }

    pub fn value(&self, example: usize, attribute: usize) -> &Value {
        &self.examples[example].values[attribute]
    }

    pub fn target_class(&self) -> &str {
        &self.target_class
    }

    pub fn other_class(&self) -> &str {
        &self.other_class
    }

    pub fn class_column(&self) -> &str {
        &self.class_column
    }

    pub fn original_ids(&self) -> &[usize] {
        &self.original_ids
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }

    /// Number of target-class examples.
    pub fn pos(&self) -> usize {
        self.positives.count()
    }

    pub fn neg(&self) -> usize {
        self.negatives.count()
    }

    pub fn positives(&self) -> &BitSet {
        &self.positives
    }

    pub fn negatives(&self) -> &BitSet {
        &self.negatives
    }

    /// Discovery needs at least one example of each class.
    pub fn is_usable(&self) -> bool {
        self.pos() >= 1 && self.neg() >= 1
    }

    /// The restriction of this dataset to `ids`, re-indexed contiguously.
    pub fn subset(&self, ids: &BitSet) -> Dataset {
        let examples: Vec<Example> = ids.iter().map(|i| self.examples[i].clone()).collect();
        let original_ids = ids.iter().map(|i| self.original_ids[i]).collect();
        Self::from_parts(
            self.attributes.clone(),
            examples,
            self.target_class.clone(),
            self.other_class.clone(),
            self.class_column.clone(),
            original_ids,
        )
        .expect("subset of a valid dataset is valid")
    }

    /// Splits the population by `condition` into (covered, uncovered).
    /// Examples missing the referenced attribute land on the uncovered side.
    pub fn partition(&self, condition: &Condition) -> Result<Partition, DatasetError> {
        if condition.attribute >= self.attributes.len() {
            return Err(DatasetError::Schema(format!(
                "partition condition references attribute #{} which does not exist",
                condition.attribute
            )));
        }
        let covered = condition.coverage(self);
        let uncovered = covered.complement();
        Ok(Partition {
            covered: self.subset(&covered),
            uncovered: self.subset(&uncovered),
        })
    }
}

/// The two halves of a population split.
#[derive(Clone, Debug)]
pub struct Partition {
    pub covered: Dataset,
    pub uncovered: Dataset,
}

/// Per-column typing supplied by the caller.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemaHint {
    pub kind: AttributeKind,
    pub declared_values: Option<Vec<String>>,
}

/// Parses `column:kind` pairs separated by commas. A discrete kind may carry
/// its declared value order: `stress:discrete:low|high|very high`.
pub fn parse_schema_hints(text: &str) -> Result<Vec<(String, SchemaHint)>, DatasetError> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let mut parts = item.splitn(3, ':');
        let name = parts.next().unwrap_or_default().trim();
        let kind = parts.next().ok_or_else(|| {
            DatasetError::Schema(format!("schema hint `{item}` is not `column:kind`"))
        })?;
        let kind: AttributeKind = kind.parse()?;
        let declared_values = parts.next().map(|vals| {
            vals.split('|')
                .map(|v| v.trim().to_string())
                .collect::<Vec<_>>()
        });
        if declared_values.is_some() && kind != AttributeKind::Discrete {
            return Err(DatasetError::Schema(format!(
                "declared values are only allowed on discrete column `{name}`"
            )));
        }
        if name.is_empty() {
            return Err(DatasetError::Schema(format!(
                "schema hint `{item}` has an empty column name"
            )));
        }
        out.push((
            name.to_string(),
            SchemaHint {
                kind,
                declared_values,
            },
        ));
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct IngestOptions {
    pub target_class: String,
    /// Defaults to the last column.
    pub class_column: Option<String>,
    pub hints: Vec<(String, SchemaHint)>,
    pub missing_token: String,
    pub max_examples: Option<usize>,
}

impl IngestOptions {
    pub fn new(target_class: impl Into<String>) -> Self {
        IngestOptions {
            target_class: target_class.into(),
            class_column: None,
            hints: Vec::new(),
            missing_token: String::new(),
            max_examples: None,
        }
    }
}

fn is_missing(cell: &str, token: &str) -> bool {
    cell.is_empty() || cell == token
}

fn parse_finite(cell: &str) -> Option<f64> {
    cell.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Reads a headed CSV table. Row order becomes example id order.
pub fn ingest_csv<R: Read>(source: R, opts: &IngestOptions) -> Result<Dataset, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let header: Vec<String> = reader
        .headers()
        .map_err(csv_error)?
        .iter()
        .map(str::to_string)
        .collect();
    if header.is_empty() || header.iter().all(|h| h.is_empty()) {
        return Err(DatasetError::Empty);
    }
    let class_idx = match &opts.class_column {
        Some(name) => header.iter().position(|h| h == name).ok_or_else(|| {
            DatasetError::Schema(format!("class column `{name}` not found in header"))
        })?,
        None => header.len() - 1,
    };
    let hints: HashMap<&str, &SchemaHint> =
        opts.hints.iter().map(|(k, v)| (k.as_str(), v)).collect();
    for name in hints.keys() {
        if !header.iter().any(|h| h == name) {
            return Err(DatasetError::Schema(format!(
                "schema hint for unknown column `{name}`"
            )));
        }
    }

    let mut rows: Vec<Vec<String>> = Vec::new();
    let mut lines: Vec<u64> = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        if let Some(limit) = opts.max_examples {
            if rows.len() >= limit {
                return Err(DatasetError::TooLarge { limit });
            }
        }
        rows.push(record.iter().map(str::to_string).collect());
        lines.push(line);
    }
    if rows.is_empty() {
        return Err(DatasetError::Empty);
    }

    // class column: exactly two distinct values, no empty cells
    let mut class_values: Vec<&str> = Vec::new();
    for (row, line) in rows.iter().zip(&lines) {
        let cell = row[class_idx].as_str();
        if is_missing(cell, &opts.missing_token) {
            return Err(DatasetError::Schema(format!(
                "empty class cell on line {line}"
            )));
        }
        if !class_values.contains(&cell) {
            class_values.push(cell);
        }
    }
    if class_values.len() != 2 {
        return Err(DatasetError::Schema(format!(
            "class column `{}` must have exactly 2 distinct values, found {}",
            header[class_idx],
            class_values.len()
        )));
    }
    if !class_values.contains(&opts.target_class.as_str()) {
        return Err(DatasetError::Schema(format!(
            "target class `{}` does not occur in class column `{}`",
            opts.target_class, header[class_idx]
        )));
    }
    let other_class = class_values
        .iter()
        .find(|v| **v != opts.target_class)
        .map(|s| s.to_string())
        .expect("two distinct class values");

    let mut attributes = Vec::new();
    let mut columns = Vec::new();
    for (col, name) in header.iter().enumerate() {
        if col == class_idx {
            continue;
        }
        let cells = rows.iter().map(|r| r[col].as_str());
        let (kind, declared_values) = match hints.get(name.as_str()) {
            Some(h) => (h.kind, h.declared_values.clone()),
            None => (infer_kind(cells.clone(), &opts.missing_token), None),
        };
        attributes.push(Attribute {
            name: name.clone(),
            kind,
            declared_values,
        });
        columns.push(col);
    }

    let mut examples = Vec::with_capacity(rows.len());
    for (row, line) in rows.iter().zip(&lines) {
        let mut values = Vec::with_capacity(attributes.len());
        for (attr, &col) in attributes.iter().zip(&columns) {
            let cell = row[col].as_str();
            let value = if is_missing(cell, &opts.missing_token) {
                Value::Missing
            } else {
                match attr.kind {
                    AttributeKind::Discrete => Value::Label(cell.to_string()),
                    AttributeKind::Continuous => {
                        Value::Number(parse_finite(cell).ok_or_else(|| {
                            DatasetError::Schema(format!(
                                "line {line}: `{cell}` in continuous column `{}` is not a number",
                                attr.name
                            ))
                        })?)
                    }
                    AttributeKind::Integer => {
                        let x = parse_finite(cell).filter(|x| x.fract() == 0.0).ok_or_else(|| {
                            DatasetError::Schema(format!("line {line}: `{cell}` in integer column `{}` is not an integer", attr.name))
                        })?;
                        Value::Number(x)
                    }
                }
            };
            if let (Value::Label(v), Some(declared)) = (&value, &attr.declared_values) {
                if !declared.contains(v) {
                    return Err(DatasetError::Schema(format!(
                        "line {line}: `{v}` is not a declared value of `{}`",
                        attr.name
                    )));
                }
            }
            values.push(value);
        }
        let label = if row[class_idx] == opts.target_class {
            ClassLabel::Positive
        } else {
            ClassLabel::Negative
        };
        examples.push(Example {
            id: 0,
            values,
            label,
        });
    }

    let n = examples.len();
    Dataset::from_parts(
        attributes,
        examples,
        opts.target_class.clone(),
        other_class,
        header[class_idx].clone(),
        (0..n).collect(),
    )
}

fn infer_kind<'a, I: Iterator<Item = &'a str>>(cells: I, missing_token: &str) -> AttributeKind {
    let mut any = false;
    let mut all_integer = true;
    for cell in cells.filter(|c| !is_missing(c, missing_token)) {
        any = true;
        if parse_finite(cell).is_none() {
            return AttributeKind::Discrete;
        }
        if cell.parse::<i64>().is_err() {
            all_integer = false;
        }
    }
    match (any, all_integer) {
        (false, _) => AttributeKind::Discrete,
        (true, true) => AttributeKind::Integer,
        (true, false) => AttributeKind::Continuous,
    }
}

fn csv_error(err: csv::Error) -> DatasetError {
    let line = err.position().map(|p| p.line()).unwrap_or(0);
    match err.kind() {
        csv::ErrorKind::Io(_) => DatasetError::Io(err.to_string()),
        csv::ErrorKind::UnequalLengths {
            expected_len, len, ..
        } => DatasetError::Csv {
            line,
            message: format!("expected {expected_len} fields, found {len}"),
        },
        csv::ErrorKind::Utf8 { .. } => DatasetError::Csv {
            line,
            message: "invalid UTF-8".to_string(),
        },
        _ => DatasetError::Csv {
            line,
            message: err.to_string(),
        },
    }
}
