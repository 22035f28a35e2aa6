//! The dataset document: schema, loader, validator, and periodicity tools.

mod load;
mod periodic;
mod schema;
mod validate;

pub use load::{
    load_dataset, parse_torsion, torsion_key, Dataset, EinfClass, HiddenRecord, LoadError, PageData, PageKey, Relation,
    RelationSet, TorsionLegend,
};
pub use periodic::{extend_by_periodicity, period_exponent, periodicity_report, PeriodicityReport};
pub use schema::{
    DatasetFile, DifferentialRow, EinfRow, GeneratorRow, HiddenRow, PageRows, RelationRow, RelationSetRow, RESERVED_KEYS,
};
pub use validate::{
    expressible, validate_dataset, validate_dataset_with, Check, Finding, Severity, ValidationPolicy, ValidationReport,
    LEGEND_ORDERS,
};

/// The shipped dataset document.
pub const SHIPPED: &str = include_str!("../../data/mmf.json");

pub fn shipped() -> Dataset {
    load_dataset(SHIPPED).expect("shipped dataset loads")
}
