// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("hamiltonian is not Hermitian (max deviation {0:e})")]
    NonHermitian(f64),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("quadrature did not converge: {0}")]
    QuadratureFailed(String),
    #[error("no eta coefficient for separation {separation} with role {role}")]
    EtaMissing { separation: usize, role: String },
    #[error("path sum needs {needed} configurations, budget is {budget}")]
    PathsumBudget { needed: u128, budget: u128 },
    #[error("zero-index auxiliary matrix is singular (condition number {0:e})")]
    Aux0Singular(f64),
    #[error("splitting mismatch: expected {expected}, got {got}")]
    SplittingMismatch { expected: String, got: String },
    #[error("seed too short: need {needed} entries, got {got}")]
    SeedShort { needed: usize, got: usize },
    #[error("argument out of range: {0}")]
    Range(String),
    #[error("sequence too short: term uses index {index}, sequence has {len}")]
    SeqShort { index: usize, len: usize },
    #[error("unsupported format_version {0}")]
    Version(u32),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("config error at `{field}`: {msg}")]
    Config { field: String, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable short code for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimMismatch(_) => "dim_mismatch",
            Error::NonHermitian(_) => "non_hermitian",
            Error::InvalidSystem(_) => "invalid_system",
            Error::InvalidParameter(_) => "invalid_parameter",
            Error::QuadratureFailed(_) => "quadrature_failed",
            Error::EtaMissing { .. } => "eta_missing",
            Error::PathsumBudget { .. } => "pathsum_budget",
            Error::Aux0Singular(_) => "aux0_singular",
            Error::SplittingMismatch { .. } => "splitting_mismatch",
            Error::SeedShort { .. } => "seed_short",
            Error::Range(_) => "range",
            Error::SeqShort { .. } => "seq_short",
            Error::Version(_) => "version",
            Error::Parse { .. } => "parse",
            Error::Config { .. } => "config",
            Error::Io(_) => "io",
        }
    }

    /// True for failures of the numerics (quadrature, budgets, singular
    /// matrices) as opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::QuadratureFailed(_) | Error::PathsumBudget { .. } | Error::Aux0Singular(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
