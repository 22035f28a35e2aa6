//! Tridegrees, the atom table, monomials, homogeneous expressions, and the
//! parser for table notation.

mod atoms;
mod degree;
mod expr;
mod formula;

pub use atoms::{Atom, AtomTable, AtomTableError};
pub use degree::TriDegree;
pub use expr::{degree_of, is_homogeneous, Expression, HomogeneityWitness, Monomial};
pub use formula::{parse_expression, parse_formula, Factor, Formula, ParseError, Product};
