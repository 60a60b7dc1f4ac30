use std::fs;

use subdisc::analysis::{distribution_series, supporting_factors, BinSpec, FactorOptions};
use subdisc::discovery::DmsOptions;
use subdisc::pipeline::{run_mode, Mode};
use subdisc::report::{hull_auc, hull_of, RuleReport};
use subdisc::{AnalysisError, Rule};

use crate::args::{default_c_grid, CompareArgs, DataArgs, Format, RunArgs, DEFAULT_G_GRID};
use crate::compare::compare_heuristics;
use crate::error::{exit, CliError};
use crate::load::{load, Loaded};
use crate::output::*;

fn prepare_out(args: &DataArgs) -> Result<(), CliError> {
    fs::create_dir_all(&args.out).map_err(|e| {
        CliError::new(
            exit::IO,
            format!("cannot create {}: {e}", args.out.display()),
        )
    })
}

fn info(args: &DataArgs, l: &Loaded) -> DatasetInfo {
    DatasetInfo::new(
        &args.input,
        &l.dataset,
        l.ingested,
        args.partition.clone(),
        l.features.len(),
    )
}

/// Runs discovery and writes the report files. Returns the exit status.
pub fn run(args: &RunArgs) -> Result<i32, CliError> {
    let params = args.params();
    params.validate()?;
    let loaded = load(&args.data)?;
    let d = &loaded.dataset;
    let dms = DmsOptions {
        dedupe: !args.keep_duplicates,
        rules_per_iteration: args.rules_per_iteration,
    };
    let out = run_mode(
        d,
        &loaded.features,
        &params,
        args.mode,
        args.num_rules,
        &dms,
    )?;
    let factor_opts = FactorOptions {
        yates: args.yates,
        exclude_covered_negatives: args.exclude_covered_negatives,
        ..FactorOptions::default()
    };
    let reports: Vec<RuleReport> = out
        .rules
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut rep = RuleReport::new(Some(i), r, d, &params, args.ids);
            rep.supporting_factors = Some(supporting_factors(r, d, &factor_opts));
            rep
        })
        .collect();
    let rules_file = RulesFile {
        dataset: info(&args.data, &loaded),
        mode: args.mode,
        min_support: params.support(d).fraction(),
        params,
        iterations: out.iterations,
        beam_size: if args.mode == Mode::Dms {
            out.rules.len()
        } else {
            out.beam.len()
        },
        rules: reports,
        diagnostics: out.diagnostics,
    };
    let refs: Vec<(usize, &Rule)> = out.rules.iter().enumerate().collect();
    let vertices = hull_of(&refs, d);
    let hull = HullFile {
        pos: d.pos(),
        neg: d.neg(),
        auc: hull_auc(&vertices),
        vertices,
    };
    let attributes = args.data.distribution.clone().unwrap_or_default();
    let mut series = Vec::new();
    for name in &attributes {
        let a = d
            .attribute_index(name)
            .ok_or_else(|| CliError::from(AnalysisError::UnknownAttribute(name.clone())))?;
        series.extend(distribution_series(d, a, &refs, BinSpec::Default, true)?);
    }
    let distributions = DistributionsFile { attributes, series };

    prepare_out(&args.data)?;
    let dir = &args.data.out;
    if args.data.wants(Format::Json) {
        write_json(dir, "rules.json", &rules_file)?;
        write_json(dir, "hull.json", &hull)?;
        write_json(dir, "distributions.json", &distributions)?;
    }
    if args.data.wants(Format::Csv) {
        write_text(dir, "rules.csv", &rules_csv(&rules_file.rules))?;
        write_text(dir, "hull.csv", &hull_csv(&hull.vertices))?;
    }
    if args.data.wants(Format::Plotdata) {
        let mut plot = PlotData::default();
        plot.rules(&rules_file.rules, "rules");
        plot.hull(&hull.vertices, "hull");
        plot.distributions(&distributions.series);
        write_text(dir, "plotdata.csv", &plot.render())?;
    }
    write_text(dir, "summary.txt", &rules_summary(&rules_file))?;
    Ok(if rules_file.rules.is_empty() {
        exit::EMPTY
    } else {
        exit::OK
    })
}

/// Runs the heuristic comparison and writes its report files.
pub fn compare(args: &CompareArgs) -> Result<i32, CliError> {
    let g_grid = args
        .g_grid
        .clone()
        .unwrap_or_else(|| DEFAULT_G_GRID.to_vec());
    let c_grid = args.c_grid.clone().unwrap_or_else(default_c_grid);
    if g_grid.is_empty() || c_grid.is_empty() {
        return Err(CliError::new(exit::INVALID, "grids must not be empty"));
    }
    let base = args.data.params(subdisc::Heuristic::Qg, 1.0, 1.0);
    let loaded = load(&args.data)?;
    let comparison =
        compare_heuristics(&loaded.dataset, &loaded.features, &base, &g_grid, &c_grid)?;
    let file = ComparisonFile {
        dataset: info(&args.data, &loaded),
        params: base,
        comparison,
    };
    prepare_out(&args.data)?;
    let dir = &args.data.out;
    let c = &file.comparison;
    if args.data.wants(Format::Json) {
        write_json(dir, "comparison.json", &file)?;
    }
    if args.data.wants(Format::Csv) {
        write_text(dir, "qg_rules.csv", &rules_csv(&c.qg.rules))?;
        write_text(dir, "qc_rules.csv", &rules_csv(&c.qc.rules))?;
        write_text(dir, "qg_hull.csv", &hull_csv(&c.qg.hull))?;
        write_text(dir, "qc_hull.csv", &hull_csv(&c.qc.hull))?;
    }
    if args.data.wants(Format::Plotdata) {
        let mut plot = PlotData::default();
        plot.rules(&c.qg.rules, "qg-rules");
        plot.hull(&c.qg.hull, "qg-hull");
        plot.rules(&c.qc.rules, "qc-rules");
        plot.hull(&c.qc.hull, "qc-hull");
        write_text(dir, "plotdata.csv", &plot.render())?;
    }
    write_text(dir, "summary.txt", &comparison_summary(&file))?;
    let empty = c.qg.rules.is_empty() && c.qc.rules.is_empty();
    Ok(if empty { exit::EMPTY } else { exit::OK })
}
