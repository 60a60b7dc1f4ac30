//! Statistical characterization and geometry of discovered rules.

pub mod binning;
pub mod chisq;
pub mod distribution;
pub mod factors;
pub mod roc;

pub use binning::{bin_numeric, interval_index, Interval};
pub use chisq::{
    chi2_survival, chi_square, chi_square_with, rule_significance, rule_table, ChiSquare,
    ChiSquareOptions, ContingencyTable, Significance, StarLevel,
};
pub use distribution::{distribution_series, Bin, BinSpec, DistributionSeries, SeriesKind};
pub use factors::{supporting_factors, FactorOptions, FactorReport, FactorRole, SupportingFactor};
pub use roc::{
    auc_exact, auc_of_hull, convex_hull, convex_hull_roc, normalize, rates, to_roc_point,
    upper_hull, HullPoint,
};
