//! Combinatorial batch codes: incidence matrices that let any k of n items
//! be retrieved with at most t reads per server. This crate builds such
//! matrices, verifies them, evaluates closed-form storage/length bounds,
//! and cross-checks everything against exhaustive searches at small scale.

pub mod bounds;
pub mod cli;
pub mod constructions;
pub mod error;
pub mod fileio;
pub mod graph;
pub mod matrix;
pub mod search;
pub mod verifier;

pub use error::{Error, Result};
pub use matrix::{CodeParams, IncidenceMatrix, SetSystem};
pub use verifier::{is_cbc, naive_is_cbc, retrieval_assignment, VerifyOutcome};
