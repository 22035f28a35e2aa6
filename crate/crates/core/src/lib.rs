//! Verification and computation engine for trigraded spectral sequences over
//! F₂[τ], together with the Adams spectral sequence tables for motivic modular
//! forms.
#![allow(clippy::result_large_err)]

pub mod algebra;
pub mod chart;
pub mod cli;
pub mod grading;
pub mod homotopy;
pub mod mmfdata;
pub mod sseq;
pub mod taulin;
