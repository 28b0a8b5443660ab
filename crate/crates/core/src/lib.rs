// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact discretized path sums for a small quantum system coupled to a
//! harmonic bath, and the two memory-kernel hierarchies that compress them:
//! small-matrix path integral (SMatPI) midpoint/termination matrices and
//! transfer-tensor (TTM) / discretized GQME kernels.
//!
//! Modules, bottom up:
//!
//! - [`liouville`]: forward-backward superoperators and system propagators.
//! - [`bath`]: ohmic bath, correlation function, influence coefficients.
//! - [`pathsum`]: brute-force path-sum oracle for reduced dynamics.
//! - [`kernels`]: kernel extraction, propagation and comparison.
//! - [`combinatorics`]: Catalan numbers, Dyck paths, hierarchy expansions.
//! - [`cli`]: config and kernel file formats, CSV output, the command line.
//!
//! The `examples/` directory of this crate has one runnable program per
//! capability.

pub mod bath;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod kernels;
pub mod liouville;
pub mod pathsum;
mod quad;

pub use bath::{bath_correlation, eta_table, BathSpec, Beta, EtaRole, EtaTable, Splitting};
pub use error::{Error, Result};
pub use kernels::{KernelSet, TrajectorySeq};
pub use liouville::{apply_map, fb_propagator, liou_norm, FbIndex, LiouvilleMatrix, SystemSpec, TimeGrid};
