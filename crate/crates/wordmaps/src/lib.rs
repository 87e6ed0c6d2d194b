//! Word maps on finite p-groups.
//!
//! This crate constructs finite class-2 p-groups from linear-algebra data
//! over prime fields, evaluates and normalizes word maps on them, computes
//! exact word images by exhaustive enumeration, and enumerates
//! automorphism-invariant subsets to count the candidates that no word
//! realizes.
//!
//! The main pieces:
//!
//! - [`fp`] — exact linear algebra over GF(p): vectors, S-valued bilinear
//!   forms, quadratic maps, and linear maps.
//! - [`group`] — groups presented by (V, S, cocycle) data, with element
//!   arithmetic, cached subgroup invariants, and a bit-exact element
//!   ranking.
//! - [`words`] — a free-group word parser, word-map evaluation, exhaustive
//!   image enumeration, and normalization to the canonical form
//!   `x^m[x,y^n]`.
//! - [`extraspecial`] — presets for the two extraspecial groups of each
//!   order, orbit classification, and the candidate/impostor census.
//! - [`aut`] — a ground-truth automorphism-orbit oracle for small groups.
//! - [`preset`] / [`cli`] / [`report`] — named groups and fleets, the
//!   command-line surface, and machine-readable run reports.
//!
//! Start with the runnable examples in `examples/`; each one exercises a
//! single capability end to end.

pub mod aut;
pub mod cli;
pub mod extraspecial;
pub mod fp;
pub mod group;
pub mod preset;
pub mod report;
pub mod words;

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid group data: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("elements do not belong to the same group")]
    GroupMismatch,

    #[error("word syntax error at byte {pos}: {msg}")]
    WordSyntax { pos: usize, msg: String },

    #[error("word uses letter {letter} but only {arity} arguments were given")]
    Arity { letter: usize, arity: usize },

    #[error("{what} needs {needed} steps, over the budget of {budget}")]
    BudgetExceeded {
        what: String,
        needed: u64,
        budget: u64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("element rank {rank} out of range for group of order {order}")]
    RankOutOfRange { rank: u64, order: u64 },

    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Process exit codes used by the CLI.
pub mod exit_code {
    pub const PASS: i32 = 0;
    pub const VERIFICATION_FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const BUDGET: i32 = 3;
}

impl Error {
    /// Exit code the CLI maps this error to.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => exit_code::BUDGET,
            Error::VerificationFailed(_) => exit_code::VERIFICATION_FAILURE,
            _ => exit_code::USAGE,
        }
    }
}
