//! Finitely presented trigraded algebras over F₂[τ].

mod column;
mod degree;
mod enumerate;
mod quotient;

pub use column::{homogeneous_part, ColumnBasis};
pub use degree::{ideal_contains, relation_multiples, relation_span, DegreeSpace};
pub use enumerate::{column_exponents, column_monomials, enumerate_monomials};
pub use quotient::{
    graded_basis, graded_bases, normal_form, AlgebraError, BasisElement, ColumnQuotient, GradedBasis, NormalForm,
    Presentation, Window,
};
