//! Spectral-sequence mechanics: Leibniz propagation, d² obligations,
//! inference of differentials from relations, and page turning.

mod infer;
mod leibniz;
mod page;
mod table;
mod turn;

pub use leibniz::{leibniz_differential, leibniz_expression, Differential};
pub use table::{validate_differential_table, DegreeCheck, DifferentialEntry, DifferentialTable, Generator, GeneratorError};
pub use page::{check_d_squared, forced_relations, unresolved_obligations, Obligation, Page};
pub use infer::{infer_differential, InferError, Inference};
pub use turn::{compare_generators, turn_page, Class, ColumnHomology, GeneratorDiff, NextPage, TurnError, TurnWindow};
