//! Exact linear algebra over the principal ideal domain F₂[τ].
//!
//! Everything stays inside F₂[τ]; there are no fraction-field steps. Matrices
//! arising from graded data have τ-monomial entries, and the Smith form pivot
//! rule keeps them that way. Single-tridegree problems reduce to F₂ and use the
//! bit-packed eliminator in [`gf2`].

pub mod gf2;
mod matrix;
mod scalar;

pub use gf2::{gf2_solve, BitVector, Gf2Span};
pub use matrix::{
    column_rank, kernel, smith_normal_form, solve_linear, solve_with, subquotient_decomposition, SmithForm,
    SubquotientBasis, SubquotientError, Summand, TauMatrix, TorsionModule,
};
pub use scalar::TauScalar;
