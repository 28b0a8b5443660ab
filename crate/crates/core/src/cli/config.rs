// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Run configuration: a flat `section.key = value` text format.
//!
//! ```text
//! # spin-boson defaults
//! system.hamiltonian = 0, 0.5; 0.5, 0
//! system.coupling = 1, -1
//! bath.alpha = 0.1
//! bath.omega_c = 5
//! bath.beta = 5
//! grid.dt = 0.1
//! grid.n_steps = 30
//! grid.r_max = 6
//! ```
//!
//! Matrices are rows separated by `;`, entries by `,`. Complex entries are
//! written `re+imj` (`0.5`, `-1j`, `1e-3-2.5j`).

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::bath::{BathSpec, Beta, Splitting};
use crate::error::{Error, Result};
use crate::kernels::{AuxZeroConvention, Flavor};
use crate::liouville::{hermitian_deviation, SystemSpec, TimeGrid};
use crate::pathsum::DEFAULT_BUDGET;

const KNOWN_KEYS: &[&str] = &[
    "system.n",
    "system.hamiltonian",
    "system.coupling",
    "bath.kind",
    "bath.alpha",
    "bath.omega_c",
    "bath.beta",
    "bath.max_separation",
    "grid.dt",
    "grid.n_steps",
    "grid.r_max",
    "run.splitting",
    "run.flavor",
    "run.aux_zero_convention",
    "run.budget",
    "run.initial_state",
    "output.dir",
    "output.include_maps",
    "tolerances.compare_threshold",
    "tolerances.state",
];

/// A validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub system: SystemSpec,
    pub bath: BathSpec,
    pub grid: TimeGrid,
    pub splitting: Splitting,
    pub flavor: Flavor,
    pub convention: AuxZeroConvention,
    /// Interior bath memory is cut after this many steps when set.
    pub max_separation: Option<usize>,
    pub budget: u128,
    pub initial_state: DMatrix<Complex64>,
    pub out_dir: Option<PathBuf>,
    pub include_maps: bool,
    pub compare_threshold: f64,
    /// Entries as read, for the kernel file header.
    pub entries: BTreeMap<String, String>,
}

fn field_err(field: &str, msg: impl Into<String>) -> Error {
    Error::Config { field: field.to_string(), msg: msg.into() }
}

/// Parses `re+imj`, `re`, or `imj`.
pub fn parse_complex(s: &str) -> Option<Complex64> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    let Some(body) = s.strip_suffix('j') else {
        return s.parse::<f64>().ok().map(|re| Complex64::new(re, 0.0));
    };
    // The real/imaginary split is the last sign not opening an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (body[..i].trim().parse::<f64>().ok()?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im.trim() {
        "" | "+" => 1.0,
        "-" => -1.0,
        t => t.parse::<f64>().ok()?,
    };
    Some(Complex64::new(re, im))
}

fn parse_matrix(field: &str, s: &str) -> Result<DMatrix<Complex64>> {
    let rows: Vec<Vec<Complex64>> = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|e| parse_complex(e).ok_or_else(|| field_err(field, format!("bad complex number `{}`", e.trim()))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        return Err(field_err(field, "matrix must be square"));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

struct Entries {
    map: BTreeMap<String, String>,
}

impl Entries {
    fn raw(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }

    fn required(&self, key: &str) -> Result<&str> {
        self.raw(key).ok_or_else(|| field_err(key, "missing"))
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<Option<T>> {
        self.raw(key)
            .map(|v| v.parse::<T>().map_err(|_| field_err(key, format!("expected {what}, got `{v}`"))))
            .transpose()
    }

    fn f64_required(&self, key: &str) -> Result<f64> {
        self.required(key)?;
        let v: f64 = self.parse(key, "a number")?.unwrap();
        if !v.is_finite() {
            return Err(field_err(key, "must be finite"));
        }
        Ok(v)
    }

    fn usize_required(&self, key: &str) -> Result<usize> {
        self.required(key)?;
        Ok(self.parse(key, "a nonnegative integer")?.unwrap())
    }
}

/// Splits text into `key -> value`, rejecting unknown or repeated keys.
pub fn parse_entries(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Parse { line: i + 1, msg: "expected `section.key = value`".into() })?;
        let key = key.trim();
        if !KNOWN_KEYS.contains(&key) {
            return Err(field_err(key, "unknown key"));
        }
        if map.insert(key.to_string(), value.trim().to_string()).is_some() {
            return Err(field_err(key, "given twice"));
        }
    }
    Ok(map)
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_entries(parse_entries(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn from_entries(map: BTreeMap<String, String>) -> Result<Self> {
        let e = Entries { map };

        let h = parse_matrix("system.hamiltonian", e.required("system.hamiltonian")?)?;
        let dev = hermitian_deviation(&h);
        if dev > 1e-12 {
            return Err(field_err("system.hamiltonian", format!("not Hermitian (max deviation {dev:e})")));
        }
        let coupling = e
            .required("system.coupling")?
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| field_err("system.coupling", format!("bad number `{}`", v.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        if let Some(n) = e.parse::<usize>("system.n", "an integer")? {
            if n != h.nrows() {
                return Err(field_err("system.n", format!("{n} disagrees with a {}x{} hamiltonian", h.nrows(), h.nrows())));
            }
        }
        if coupling.len() != h.nrows() {
            return Err(field_err("system.coupling", format!("need {} eigenvalues, got {}", h.nrows(), coupling.len())));
        }
        let system = SystemSpec::new(h, coupling).map_err(|err| field_err("system", err.to_string()))?;
        let n = system.n();

        if let Some(kind) = e.raw("bath.kind") {
            if kind != "ohmic_exponential" {
                return Err(field_err("bath.kind", format!("unsupported spectral density `{kind}`")));
            }
        }
        let alpha = e.f64_required("bath.alpha")?;
        let omega_c = e.f64_required("bath.omega_c")?;
        let beta = match e.required("bath.beta")? {
            "inf" | "infinite" => Beta::Infinite,
            _ => Beta::Finite(e.f64_required("bath.beta")?),
        };
        let bath = BathSpec::ohmic(alpha, omega_c, beta).map_err(|err| field_err("bath", err.to_string()))?;
        let max_separation = e.parse::<usize>("bath.max_separation", "an integer")?;

        let grid = TimeGrid::new(
            e.f64_required("grid.dt")?,
            e.usize_required("grid.n_steps")?,
            e.usize_required("grid.r_max")?,
        )
        .map_err(|err| field_err("grid", err.to_string()))?;

        let splitting = e.parse::<Splitting>("run.splitting", "sym_env, sym_sys or asym")?.unwrap_or(Splitting::SymEnv);
        let flavor = e.parse::<Flavor>("run.flavor", "smatpi or ttm")?.unwrap_or(Flavor::Smatpi);
        let convention = e
            .parse::<AuxZeroConvention>("run.aux_zero_convention", "standalone_terminal or terminal_times_i0")?
            .unwrap_or_default();
        let budget = e.parse::<u128>("run.budget", "a nonnegative integer")?.unwrap_or(DEFAULT_BUDGET);

        let initial_state = match e.raw("run.initial_state") {
            Some(v) => parse_matrix("run.initial_state", v)?,
            None => DMatrix::from_fn(n, n, |i, j| Complex64::new(if i == 0 && j == 0 { 1.0 } else { 0.0 }, 0.0)),
        };
        let state_tol = e.parse::<f64>("tolerances.state", "a number")?.unwrap_or(1e-10);
        if initial_state.nrows() != n {
            return Err(field_err("run.initial_state", format!("must be {n}x{n}")));
        }
        if hermitian_deviation(&initial_state) > state_tol {
            return Err(field_err("run.initial_state", "not Hermitian"));
        }
        if (initial_state.trace() - Complex64::new(1.0, 0.0)).norm() > state_tol {
            return Err(field_err("run.initial_state", "trace is not 1"));
        }

        let include_maps = e.parse::<bool>("output.include_maps", "true or false")?.unwrap_or(false);
        let compare_threshold = e.parse::<f64>("tolerances.compare_threshold", "a number")?.unwrap_or(1e-3);
        if compare_threshold.is_nan() || compare_threshold <= 0.0 {
            return Err(field_err("tolerances.compare_threshold", "must be positive"));
        }
        let out_dir = e.raw("output.dir").map(PathBuf::from);

        Ok(Self {
            system,
            bath,
            grid,
            splitting,
            flavor,
            convention,
            max_separation,
            budget,
            initial_state,
            out_dir,
            include_maps,
            compare_threshold,
            entries: e.map,
        })
    }
}
