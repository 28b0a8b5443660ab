// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Memory-kernel hierarchies.
//!
//! Two families of discrete convolutions reproduce the exact path-sum maps
//! `U_N`:
//!
//! * SMatPI. Translationally invariant midpoint matrices `M_r` propagate an
//!   auxiliary matrix `Ũ_k`, and termination matrices `T_r` close it into
//!   `U_N = sum_{r<N} T_r Ũ_{N-r} + (residual)`. When endpoint coefficients
//!   differ from interior ones (symmetric bath splitting), the terms that touch
//!   the initial time are kept as their own sequences: `origin` (`L_k`, the
//!   last term of the `Ũ` recursion) and `boundary` (`B_N`, the last term of
//!   the `U` recursion). With interior-only bath memory of one step, `M_k`,
//!   `T_k`, `L_k` and `B_k` all vanish for `k >= 2`.
//! * TTM / discretized GQME. One set `T^C_r` with
//!   `U_N = sum_{r<N} T^C_r U_{N-r} + T^C_N`, kernels `K_k = T^C_{k+1} / dt^2`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::bath::{influence_factor_matrix, EtaRole, EtaTable, Splitting};
use crate::error::{Error, Result};
use crate::liouville::{fb_propagator, liou_norm, LiouvilleMatrix, SystemSpec};
use crate::pathsum::{configuration_count, exact_sequence, PathSumRequest, Target};

/// Condition number above which `Ũ_0` is treated as singular.
pub const AUX0_MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Smatpi,
    Ttm,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Smatpi => "smatpi",
            Flavor::Ttm => "ttm",
        }
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Flavor {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "smatpi" => Ok(Flavor::Smatpi),
            "ttm" => Ok(Flavor::Ttm),
            other => Err(Error::InvalidParameter(format!("unknown flavor `{other}`"))),
        }
    }
}

/// How the last term of the midpoint recursion treats `Ũ_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AuxZeroConvention {
    /// `Ũ_k = sum_{r<k} M_r Ũ_{k-r} + M_k`
    Standalone,
    /// `Ũ_k = sum_{r<=k} M_r Ũ_{k-r}` with `Ũ_0 = I_0`, the single-time
    /// influence weights.
    #[default]
    TerminalTimesI0,
}

impl AuxZeroConvention {
    pub fn as_str(self) -> &'static str {
        match self {
            AuxZeroConvention::Standalone => "standalone_terminal",
            AuxZeroConvention::TerminalTimesI0 => "terminal_times_i0",
        }
    }
}

impl fmt::Display for AuxZeroConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AuxZeroConvention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "standalone_terminal" | "standalone" => Ok(AuxZeroConvention::Standalone),
            "terminal_times_i0" | "terminal_times_I0" => Ok(AuxZeroConvention::TerminalTimesI0),
            other => Err(Error::InvalidParameter(format!("unknown aux zero convention `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Oracle,
    Propagated,
}

/// `U_1..U_N`; `U_0` is the identity and not stored.
#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySeq {
    pub dt: f64,
    pub maps: Vec<LiouvilleMatrix>,
    pub provenance: Provenance,
}

impl TrajectorySeq {
    pub fn new(dt: f64, maps: Vec<LiouvilleMatrix>, provenance: Provenance) -> Self {
        Self { dt, maps, provenance }
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// `U_k` for `k >= 1`.
    pub fn at(&self, k: usize) -> &LiouvilleMatrix {
        &self.maps[k - 1]
    }
}

/// An extracted hierarchy.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelSet {
    pub splitting: Splitting,
    pub flavor: Flavor,
    pub dt: f64,
    pub r_max: usize,
    pub convention: AuxZeroConvention,
    /// `M_1..M_r` for SMatPI, `T^C_1..T^C_r` for TTM.
    pub midpoint: Vec<LiouvilleMatrix>,
    /// `T_1..T_r`; absent for TTM and for the symmetric-system splitting,
    /// whose maps are closed by dressing instead.
    pub termination: Option<Vec<LiouvilleMatrix>>,
    /// Last terms of the `Ũ` recursion; `None` means they equal `midpoint`.
    pub origin: Option<Vec<LiouvilleMatrix>>,
    /// Last terms of the `U` recursion; `None` means they equal `termination`.
    pub boundary: Option<Vec<LiouvilleMatrix>>,
    /// `Ũ_0` when the terminal-times-`I_0` convention is in use.
    pub aux0: Option<LiouvilleMatrix>,
    /// Half-step propagator closing `U_N = G Ũ_{N-1} G`.
    pub dressing: Option<LiouvilleMatrix>,
}

impl KernelSet {
    pub fn n(&self) -> usize {
        self.midpoint[0].n()
    }

    /// Checks the structural invariants.
    pub fn validate(&self) -> Result<()> {
        if self.midpoint.len() != self.r_max || self.r_max == 0 {
            return Err(Error::InvalidParameter(format!(
                "expected {} midpoint matrices, got {}",
                self.r_max,
                self.midpoint.len()
            )));
        }
        if self.flavor == Flavor::Ttm && self.termination.is_some() {
            return Err(Error::InvalidParameter("ttm kernel sets carry a single matrix list".into()));
        }
        let n = self.n();
        let lists = [&self.termination, &self.origin, &self.boundary];
        for list in lists.into_iter().flatten() {
            if list.len() != self.r_max {
                return Err(Error::InvalidParameter("kernel lists must all have r_max entries".into()));
            }
        }
        let all = self
            .midpoint
            .iter()
            .chain(lists.into_iter().flatten().flatten())
            .chain(self.aux0.iter())
            .chain(self.dressing.iter());
        for m in all {
            if m.n() != n {
                return Err(Error::DimMismatch("kernel matrices differ in size".into()));
            }
            if !m.is_finite() {
                return Err(Error::InvalidParameter("non-finite kernel entry".into()));
            }
        }
        Ok(())
    }
}

fn inverse_checked(m: &LiouvilleMatrix) -> Result<LiouvilleMatrix> {
    let sv = m.matrix().clone().singular_values();
    let smax = sv.iter().cloned().fold(0.0f64, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond.is_nan() || cond > AUX0_MAX_CONDITION {
        return Err(Error::Aux0Singular(cond));
    }
    let inv = m.matrix().clone().try_inverse().ok_or(Error::Aux0Singular(cond))?;
    LiouvilleMatrix::from_matrix(m.n(), inv)
}

fn check_same_n(seq: &[LiouvilleMatrix]) -> Result<()> {
    if let Some(first) = seq.first() {
        for m in seq {
            first.check_same_dim(m)?;
        }
    }
    Ok(())
}

/// `target_N - sum_{r=1}^{N-1} kernels_r history_{N-r}` for each `N`.
pub fn convolution_residual(
    target: &[LiouvilleMatrix],
    kernels: &[LiouvilleMatrix],
    history: &[LiouvilleMatrix],
) -> Result<Vec<LiouvilleMatrix>> {
    let len = target.len();
    if kernels.len() + 1 < len || history.len() + 1 < len {
        return Err(Error::DimMismatch("sequences not aligned".into()));
    }
    check_same_n(target)?;
    let mut out = Vec::with_capacity(len);
    for big_n in 1..=len {
        let mut acc = target[big_n - 1].clone();
        for r in 1..big_n {
            acc = &acc - &(&kernels[r - 1] * &history[big_n - r - 1]);
        }
        out.push(acc);
    }
    Ok(out)
}

/// Midpoint matrices from `Ũ_1..Ũ_L`. With `aux0` the last term is
/// `M_k Ũ_0`, otherwise it is `M_k` alone.
pub fn solve_midpoint(aux: &[LiouvilleMatrix], aux0: Option<&LiouvilleMatrix>) -> Result<Vec<LiouvilleMatrix>> {
    solve_termination(aux, aux, aux0)
}

/// Termination matrices with `full_N = sum_{r<N} T_r aux_{N-r} + T_N [aux_0]`.
pub fn solve_termination(
    full: &[LiouvilleMatrix],
    aux: &[LiouvilleMatrix],
    aux0: Option<&LiouvilleMatrix>,
) -> Result<Vec<LiouvilleMatrix>> {
    if full.is_empty() {
        return Err(Error::Range("need at least one matrix".into()));
    }
    if aux.len() + 1 < full.len() {
        return Err(Error::DimMismatch(format!(
            "{} full matrices need {} auxiliary ones, got {}",
            full.len(),
            full.len() - 1,
            aux.len()
        )));
    }
    check_same_n(full)?;
    check_same_n(aux)?;
    let inv = aux0.map(inverse_checked).transpose()?;
    let mut out: Vec<LiouvilleMatrix> = Vec::with_capacity(full.len());
    for big_n in 1..=full.len() {
        let mut acc = full[big_n - 1].clone();
        for r in 1..big_n {
            acc = &acc - &(&out[r - 1] * &aux[big_n - r - 1]);
        }
        if let Some(inv) = &inv {
            acc = &acc * inv;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Transfer tensors `T^C_N = U_N - sum_{r<N} T^C_r U_{N-r}`.
pub fn extract_ttm(full: &[LiouvilleMatrix]) -> Result<Vec<LiouvilleMatrix>> {
    solve_termination(full, full, None)
}

/// Discretized GQME kernels `K_k = T_{k+1} / dt^2`, `k = 1..L-1`.
///
/// The relation is only claimed for `k > 1`; `K_1` is produced by the same
/// formula.
pub fn gqme_kernel(ttm: &[LiouvilleMatrix], dt: f64) -> Result<Vec<LiouvilleMatrix>> {
    if ttm.len() < 2 {
        return Err(Error::Range("need at least two transfer tensors".into()));
    }
    Ok(ttm[1..].iter().map(|t| t.scale(1.0 / (dt * dt))).collect())
}

/// Closed-form first and second transfer tensors of the asymmetric splitting:
/// `T_1 = I_0,i G_ij`, `T_2 = sum_k I_0,i I_0,k (I_1,ik - 1) G_ik G_kj`.
pub fn closed_form_asym(sys: &SystemSpec, eta: &EtaTable, order: usize) -> Result<LiouvilleMatrix> {
    if eta.splitting() != Splitting::Asym {
        return Err(Error::SplittingMismatch {
            expected: Splitting::Asym.to_string(),
            got: eta.splitting().to_string(),
        });
    }
    let g = fb_propagator(sys, eta.dt());
    let i0 = influence_factor_matrix(sys, eta, 0, EtaRole::SelfInterior)?.weights();
    let dim = g.dim();
    match order {
        1 => Ok(LiouvilleMatrix::from_fn(sys.n(), |i, j| {
            i0[i.flat(sys.n())] * g.get(i, j)
        })),
        2 => {
            let i1 = influence_factor_matrix(sys, eta, 1, EtaRole::Interior)?.matrix;
            let n = sys.n();
            Ok(LiouvilleMatrix::from_fn(n, |i, j| {
                let (fi, fj) = (i.flat(n), j.flat(n));
                (0..dim)
                    .map(|k| {
                        i0[fi]
                            * i0[k]
                            * (i1.matrix()[(fi, k)] - Complex64::new(1.0, 0.0))
                            * g.matrix()[(fi, k)]
                            * g.matrix()[(k, fj)]
                    })
                    .sum()
            }))
        }
        other => Err(Error::Range(format!("closed form available for orders 1 and 2, got {other}"))),
    }
}

/// `G_half · U_aux · G_half`.
pub fn dress(aux: &LiouvilleMatrix, g_half: &LiouvilleMatrix) -> Result<LiouvilleMatrix> {
    aux.check_same_dim(g_half)?;
    Ok(&(g_half * aux) * g_half)
}

/// Oracle trajectory `U_1..U_steps`.
pub fn oracle_trajectory(sys: &SystemSpec, table: &EtaTable, steps: usize, budget: u128) -> Result<TrajectorySeq> {
    let maps = sequence(sys, table, Target::FullU, steps, budget)?;
    Ok(TrajectorySeq::new(table.dt(), maps, Provenance::Oracle))
}

fn sequence(
    sys: &SystemSpec,
    table: &EtaTable,
    target: Target,
    steps: usize,
    budget: u128,
) -> Result<Vec<LiouvilleMatrix>> {
    exact_sequence(&PathSumRequest::with_table(sys, table.clone(), target, steps).budget(budget))
}

/// Extracts the SMatPI hierarchy up to `r_max` from oracle path sums.
pub fn extract_smatpi(
    sys: &SystemSpec,
    table: &EtaTable,
    r_max: usize,
    convention: AuxZeroConvention,
    budget: u128,
) -> Result<KernelSet> {
    if r_max == 0 {
        return Err(Error::Range("r_max must be at least 1".into()));
    }
    let needed = configuration_count(sys.n(), r_max);
    if needed > budget {
        return Err(Error::PathsumBudget { needed, budget });
    }
    let splitting = table.splitting();
    let i0 = || -> Result<LiouvilleMatrix> {
        Ok(influence_factor_matrix(sys, table, 0, EtaRole::SelfInterior)?.matrix)
    };
    let mut set = KernelSet {
        splitting,
        flavor: Flavor::Smatpi,
        dt: table.dt(),
        r_max,
        convention,
        midpoint: Vec::new(),
        termination: None,
        origin: None,
        boundary: None,
        aux0: None,
        dressing: None,
    };
    match splitting {
        Splitting::SymEnv => {
            let aux0 = match convention {
                AuxZeroConvention::TerminalTimesI0 => Some(i0()?),
                AuxZeroConvention::Standalone => None,
            };
            let interior = sequence(sys, table, Target::AuxU, r_max, budget)?;
            let midpoint = solve_midpoint(&interior, aux0.as_ref())?;
            let final_seq = sequence(sys, table, Target::AuxFinal, r_max, budget)?;
            let termination = solve_termination(&final_seq, &interior, aux0.as_ref())?;
            let origin_seq = sequence(sys, table, Target::AuxOrigin, r_max, budget)?;
            let origin = convolution_residual(&origin_seq, &midpoint, &origin_seq)?;
            let full = sequence(sys, table, Target::FullU, r_max, budget)?;
            let boundary = convolution_residual(&full, &termination, &origin_seq)?;
            set.midpoint = midpoint;
            set.termination = Some(termination);
            set.origin = Some(origin);
            set.boundary = Some(boundary);
            set.aux0 = aux0;
        }
        Splitting::SymSys => {
            let aux0 = i0()?;
            let interior = sequence(sys, table, Target::AuxU, r_max, budget)?;
            set.midpoint = match convention {
                AuxZeroConvention::TerminalTimesI0 => solve_midpoint(&interior, Some(&aux0))?,
                AuxZeroConvention::Standalone => solve_midpoint(&interior, None)?,
            };
            set.aux0 = Some(aux0);
            set.dressing = Some(fb_propagator(sys, 0.5 * table.dt()));
        }
        Splitting::Asym => {
            let full = sequence(sys, table, Target::FullU, r_max, budget)?;
            set.midpoint = solve_midpoint(&full, None)?;
            set.termination = Some(solve_termination(&full, &full, None)?);
        }
    }
    set.validate()?;
    Ok(set)
}

/// Extracts transfer tensors from the oracle trajectory of the table's splitting.
pub fn extract_ttm_set(sys: &SystemSpec, table: &EtaTable, r_max: usize, budget: u128) -> Result<KernelSet> {
    let traj = oracle_trajectory(sys, table, r_max, budget)?;
    let set = KernelSet {
        splitting: table.splitting(),
        flavor: Flavor::Ttm,
        dt: table.dt(),
        r_max,
        convention: AuxZeroConvention::Standalone,
        midpoint: extract_ttm(&traj.maps)?,
        termination: None,
        origin: None,
        boundary: None,
        aux0: None,
        dressing: None,
    };
    set.validate()?;
    Ok(set)
}

/// Truncated convolution `sum_{r=1}^{min(k-1, r_max)} kernels_r history_{k-r}`
/// plus `last_k` when `k <= r_max`. `history[j]` holds index `j + 1`.
fn convolve_step(
    k: usize,
    kernels: &[LiouvilleMatrix],
    last: &[LiouvilleMatrix],
    history: &[LiouvilleMatrix],
    n: usize,
) -> LiouvilleMatrix {
    let r_max = kernels.len();
    let mut acc = if k <= r_max { last[k - 1].clone() } else { LiouvilleMatrix::zeros(n) };
    for r in 1..k.min(r_max + 1) {
        acc = &acc + &(&kernels[r - 1] * &history[k - r - 1]);
    }
    acc
}

/// Propagates `U_1..U_{n_max}` from a kernel set. Within the seed's horizon the
/// seed entries are returned verbatim; a seed must cover `min(r_max, n_max)`.
pub fn propagate(kernels: &KernelSet, n_max: usize, seed: Option<&TrajectorySeq>) -> Result<TrajectorySeq> {
    kernels.validate()?;
    if let Some(seed) = seed {
        let needed = kernels.r_max.min(n_max);
        if seed.len() < needed {
            return Err(Error::SeedShort { needed, got: seed.len() });
        }
    }
    let n = kernels.n();
    let r_max = kernels.r_max;
    let mut maps = Vec::with_capacity(n_max);
    match (kernels.flavor, kernels.splitting) {
        (Flavor::Ttm, _) => {
            for k in 1..=n_max {
                let u = convolve_step(k, &kernels.midpoint, &kernels.midpoint, &maps, n);
                maps.push(u);
            }
        }
        (Flavor::Smatpi, Splitting::SymSys) => {
            let aux0 = kernels
                .aux0
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("sym_sys kernels need aux0".into()))?;
            let g = kernels
                .dressing
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("sym_sys kernels need a dressing propagator".into()))?;
            // aux[j] holds Ũ_j, j = 0..
            let mut aux = vec![aux0.clone()];
            for big_n in 1..=n_max {
                let k = big_n - 1;
                if k >= 1 {
                    let next = match kernels.convention {
                        AuxZeroConvention::TerminalTimesI0 => {
                            let mut acc = LiouvilleMatrix::zeros(n);
                            for r in 1..=k.min(r_max) {
                                acc = &acc + &(&kernels.midpoint[r - 1] * &aux[k - r]);
                            }
                            acc
                        }
                        AuxZeroConvention::Standalone => {
                            convolve_step(k, &kernels.midpoint, &kernels.midpoint, &aux[1..], n)
                        }
                    };
                    aux.push(next);
                }
                maps.push(dress(&aux[k], g)?);
            }
        }
        (Flavor::Smatpi, _) => {
            let termination = kernels
                .termination
                .as_ref()
                .ok_or_else(|| Error::InvalidParameter("smatpi kernels need termination matrices".into()))?;
            let origin = kernels.origin.as_ref().unwrap_or(&kernels.midpoint);
            let boundary = kernels.boundary.as_ref().unwrap_or(termination);
            let mut aux: Vec<LiouvilleMatrix> = Vec::with_capacity(n_max);
            for k in 1..=n_max {
                let next = convolve_step(k, &kernels.midpoint, origin, &aux, n);
                aux.push(next);
                maps.push(convolve_step(k, termination, boundary, &aux, n));
            }
        }
    }
    if let Some(seed) = seed {
        for (k, m) in maps.iter_mut().enumerate().take(seed.len().min(r_max)) {
            *m = seed.maps[k].clone();
        }
    }
    Ok(TrajectorySeq::new(kernels.dt, maps, Provenance::Propagated))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub k: usize,
    pub norm_a: f64,
    pub norm_b: f64,
    /// `liou_norm(A_k - B_k)`.
    pub diff: f64,
    pub term_norm_a: Option<f64>,
    pub term_norm_b: Option<f64>,
}

/// Side-by-side decay of two kernel sets' propagation matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    pub rows: Vec<ComparisonRow>,
    /// Relative threshold for `k_star`.
    pub threshold: f64,
    /// First `k` with `norm_k < threshold * norm_1`, per set.
    pub k_star_a: Option<usize>,
    pub k_star_b: Option<usize>,
}

fn first_below(norms: &[f64], threshold: f64) -> Option<usize> {
    let reference = *norms.first()?;
    norms.iter().position(|&x| x < threshold * reference).map(|i| i + 1)
}

/// Compares two kernel sets index by index.
pub fn compare(a: &KernelSet, b: &KernelSet, threshold: f64) -> Result<ComparisonReport> {
    if a.n() != b.n() {
        return Err(Error::DimMismatch(format!("n={} vs n={}", a.n(), b.n())));
    }
    if (a.dt - b.dt).abs() > 1e-12 * a.dt.abs().max(b.dt.abs()) {
        return Err(Error::InvalidParameter(format!("dt differs: {} vs {}", a.dt, b.dt)));
    }
    let len = a.r_max.min(b.r_max);
    let norms = |s: &KernelSet| s.midpoint.iter().map(liou_norm).collect::<Vec<_>>();
    let (na, nb) = (norms(a), norms(b));
    let term = |s: &KernelSet, k: usize| s.termination.as_ref().map(|t| liou_norm(&t[k - 1]));
    let rows = (1..=len)
        .map(|k| ComparisonRow {
            k,
            norm_a: na[k - 1],
            norm_b: nb[k - 1],
            diff: liou_norm(&(&a.midpoint[k - 1] - &b.midpoint[k - 1])),
            term_norm_a: term(a, k),
            term_norm_b: term(b, k),
        })
        .collect();
    Ok(ComparisonReport {
        rows,
        threshold,
        k_star_a: first_below(&na, threshold),
        k_star_b: first_below(&nb, threshold),
    })
}
