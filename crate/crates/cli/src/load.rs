use std::fs;

use subdisc::dataset::parse_schema_hints;
use subdisc::features::Condition;
use subdisc::{build_feature_set, ingest_csv, Dataset, Feature, FeatureOptions, IngestOptions};

use crate::args::{DataArgs, PartitionSide};
use crate::error::{exit, CliError};

/// The mined population and its feature set.
pub struct Loaded {
    pub dataset: Dataset,
    pub features: Vec<Feature>,
    /// Size of the table before any partition was applied.
    pub ingested: usize,
}

pub fn load(args: &DataArgs) -> Result<Loaded, CliError> {
    let bytes = fs::read(&args.input).map_err(|e| {
        CliError::new(
            exit::IO,
            format!("cannot read {}: {e}", args.input.display()),
        )
    })?;
    let mut opts = IngestOptions::new(args.target_class.clone());
    opts.class_column = args.class_column.clone();
    opts.missing_token = args.missing.clone();
    if let Some(schema) = &args.schema {
        opts.hints = parse_schema_hints(schema)?;
    }
    let full = ingest_csv(bytes.as_slice(), &opts)?;
    let ingested = full.len();
    let dataset = match &args.partition {
        None => full,
        Some(text) => {
            let condition = Condition::parse(text, full.attributes())?;
            let split = full.partition(&condition)?;
            let side = match args.partition_side {
                PartitionSide::Covered => split.covered,
                PartitionSide::Uncovered => split.uncovered,
            };
            if !side.is_usable() {
                return Err(CliError::new(
                    exit::UNUSABLE,
                    format!(
                        "partition `{text}` leaves {} target and {} non-target examples; both classes are needed",
                        side.pos(),
                        side.neg()
                    ),
                ));
            }
            side
        }
    };
    let features = build_feature_set(&dataset, &FeatureOptions::default())?;
    log::info!(
        "{} examples ({} target), {} features",
        dataset.len(),
        dataset.pos(),
        features.len()
    );
    Ok(Loaded {
        dataset,
        features,
        ingested,
    })
}
