// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Brute-force path-sum oracle.
//!
//! Sums the discretized influence functional over every forward-backward path
//! explicitly. The cost is `n^(2(N-1))` configurations per matrix element, so
//! this is only meant for a handful of steps; everything else in the crate is
//! checked against it.
//!
//! A path is a chain of points `0..=k` joined by whole-step propagators `G1`.
//! Each bath-coupled point carries a self factor and couples to every earlier
//! coupled point through a pair factor. Which coefficient a pair receives
//! depends on whether the chain's first point is the true initial time and its
//! last point the true final time; [`Target`] selects that.

use num_complex::Complex64;

use crate::bath::{endpoint_role, eta_table, influence_factor, BathSpec, EtaTable, Splitting};
use crate::error::{Error, Result};
use crate::liouville::{fb_propagator, FbIndex, LiouvilleMatrix, SystemSpec, TimeGrid};

pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Which path sum to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    /// The reduced-dynamics map `U_N`.
    FullU,
    /// Auxiliary matrix with interior coefficients at both ends. For the
    /// symmetric-system splitting this is the inner block that the half-step
    /// propagators dress into `U_{N+1}`; for the asymmetric splitting it
    /// equals `U_N`.
    AuxU,
    /// First point is the initial time, last point is interior. The matrix the
    /// midpoint hierarchy propagates from a physical initial state.
    AuxOrigin,
    /// First point interior, last point is the final time.
    AuxFinal,
}

#[derive(Debug, Clone)]
pub struct PathSumRequest {
    pub sys: SystemSpec,
    pub table: EtaTable,
    pub target: Target,
    pub steps: usize,
    pub budget: u128,
}

impl PathSumRequest {
    pub fn new(
        sys: &SystemSpec,
        bath: &BathSpec,
        grid: &TimeGrid,
        splitting: Splitting,
        target: Target,
        steps: usize,
    ) -> Result<Self> {
        let horizon = grid.n_steps.max(steps).max(1);
        let grid = TimeGrid { n_steps: horizon, r_max: grid.r_max.min(horizon), ..*grid };
        Ok(Self::with_table(sys, eta_table(bath, &grid, splitting)?, target, steps))
    }

    pub fn with_table(sys: &SystemSpec, table: EtaTable, target: Target, steps: usize) -> Self {
        Self { sys: sys.clone(), table, target, steps, budget: DEFAULT_BUDGET }
    }

    pub fn budget(mut self, budget: u128) -> Self {
        self.budget = budget;
        self
    }

    pub fn splitting(&self) -> Splitting {
        self.table.splitting()
    }
}

/// Number of summed configurations for an `N`-step request: `n^(2(N-1))`.
pub fn configuration_count(n: usize, steps: usize) -> u128 {
    if steps <= 1 {
        return 1;
    }
    (n as u128 * n as u128).saturating_pow((steps - 1) as u32)
}

fn check_budget(req: &PathSumRequest) -> Result<()> {
    let needed = configuration_count(req.sys.n(), req.steps);
    if needed > req.budget {
        return Err(Error::PathsumBudget { needed, budget: req.budget });
    }
    Ok(())
}

/// Exact `U_N`. `U_0` is the identity.
pub fn rdm_exact(req: &PathSumRequest) -> Result<LiouvilleMatrix> {
    if req.target != Target::FullU {
        return Err(Error::InvalidParameter("rdm_exact needs target FullU".into()));
    }
    check_budget(req)?;
    full_map(&req.sys, &req.table, req.steps)
}

/// Exact auxiliary matrix for the requested target.
pub fn aux_rdm_exact(req: &PathSumRequest) -> Result<LiouvilleMatrix> {
    check_budget(req)?;
    match req.target {
        Target::FullU => full_map(&req.sys, &req.table, req.steps),
        Target::AuxU => aux_map(&req.sys, &req.table, req.steps, false, false),
        Target::AuxOrigin => aux_map(&req.sys, &req.table, req.steps, true, false),
        Target::AuxFinal => aux_map(&req.sys, &req.table, req.steps, false, true),
    }
}

/// `[X_1, ..., X_k]` for the request's target with `k = req.steps`.
pub fn exact_sequence(req: &PathSumRequest) -> Result<Vec<LiouvilleMatrix>> {
    check_budget(req)?;
    (1..=req.steps)
        .map(|k| {
            let mut r = req.clone();
            r.steps = k;
            aux_rdm_exact(&r)
        })
        .collect()
}

fn full_map(sys: &SystemSpec, table: &EtaTable, steps: usize) -> Result<LiouvilleMatrix> {
    if steps == 0 {
        return Ok(LiouvilleMatrix::identity(sys.n()));
    }
    match table.splitting() {
        Splitting::SymEnv => chain_sum(sys, table, steps, true, true, true),
        Splitting::SymSys => {
            let inner = chain_sum(sys, table, steps - 1, true, false, false)?;
            let half = fb_propagator(sys, 0.5 * table.dt());
            Ok(&(&half * &inner) * &half)
        }
        Splitting::Asym => chain_sum(sys, table, steps, false, false, false),
    }
}

fn aux_map(
    sys: &SystemSpec,
    table: &EtaTable,
    steps: usize,
    origin: bool,
    final_point: bool,
) -> Result<LiouvilleMatrix> {
    match table.splitting() {
        Splitting::SymEnv => {
            if steps == 0 && (origin || final_point) {
                return Err(Error::Range("boundary auxiliary matrices start at k = 1".into()));
            }
            chain_sum(sys, table, steps, true, origin, final_point)
        }
        Splitting::SymSys => chain_sum(sys, table, steps, true, false, false),
        Splitting::Asym => full_map(sys, table, steps),
    }
}

/// Sums the chain `0..=steps`. `couple_origin` decides whether point 0 feels
/// the bath at all.
fn chain_sum(
    sys: &SystemSpec,
    table: &EtaTable,
    steps: usize,
    couple_origin: bool,
    origin: bool,
    final_point: bool,
) -> Result<LiouvilleMatrix> {
    let n = sys.n();
    let dim = n * n;
    let s = sys.coupling();
    let link = fb_propagator(sys, table.dt());
    let coupled = |j: usize| j > 0 || couple_origin;

    // self_w[j][a], pair[j][jp][a * dim + b]; 1 where uncoupled
    let mut self_w = vec![vec![Complex64::new(1.0, 0.0); dim]; steps + 1];
    let mut pair: Vec<Vec<Vec<Complex64>>> = Vec::with_capacity(steps + 1);
    for (j, weights) in self_w.iter_mut().enumerate() {
        let top = final_point && j == steps;
        if coupled(j) {
            let eta = table.get(0, endpoint_role(table.splitting(), j, j, origin, top))?;
            for (a, w) in weights.iter_mut().enumerate() {
                let idx = FbIndex::from_flat(a, n);
                *w = influence_factor(s, eta, idx, idx);
            }
        }
        let mut row = Vec::with_capacity(j);
        for jp in 0..j {
            let mut f = vec![Complex64::new(1.0, 0.0); dim * dim];
            if coupled(jp) {
                let eta = table.get(j - jp, endpoint_role(table.splitting(), j, jp, origin, top))?;
                for a in 0..dim {
                    for b in 0..dim {
                        f[a * dim + b] =
                            influence_factor(s, eta, FbIndex::from_flat(a, n), FbIndex::from_flat(b, n));
                    }
                }
            }
            row.push(f);
        }
        pair.push(row);
    }

    let mut out = LiouvilleMatrix::zeros(n).into_matrix();
    let mut path = vec![0usize; steps + 1];
    for a0 in 0..dim {
        path[0] = a0;
        let w0 = self_w[0][a0];
        if steps == 0 {
            out[(a0, a0)] += w0;
            continue;
        }
        walk(1, w0, &mut path, &link, &self_w, &pair, dim, &mut |end, w| {
            out[(end, a0)] += w;
        });
    }
    LiouvilleMatrix::from_matrix(n, out)
}

#[allow(clippy::too_many_arguments)]
fn walk(
    depth: usize,
    weight: Complex64,
    path: &mut [usize],
    link: &LiouvilleMatrix,
    self_w: &[Vec<Complex64>],
    pair: &[Vec<Vec<Complex64>>],
    dim: usize,
    sink: &mut impl FnMut(usize, Complex64),
) {
    let last = path.len() - 1;
    let prev = path[depth - 1];
    for a in 0..dim {
        let g = link.matrix()[(a, prev)];
        if g == Complex64::new(0.0, 0.0) {
            continue;
        }
        let mut w = weight * g * self_w[depth][a];
        for (jp, f) in pair[depth].iter().enumerate() {
            w *= f[a * dim + path[jp]];
        }
        path[depth] = a;
        if depth == last {
            sink(a, w);
        } else {
            walk(depth + 1, w, path, link, self_w, pair, dim, sink);
        }
    }
}
