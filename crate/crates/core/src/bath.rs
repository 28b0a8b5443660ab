// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Harmonic bath: spectral density, correlation function, discretized
//! influence-functional coefficients and the influence-factor matrices built
//! from them.
//!
//! The coefficients are window integrals of the bath correlation function
//! `C(t)`. They are assembled from the twice-integrated correlation function
//! `Q(t) = int_0^t ds int_0^s C(u) du`:
//!
//! ```text
//! int_a^b dt int_c^d dt' C(t - t') = Q(b-c) - Q(b-d) - Q(a-c) + Q(a-d)     (a >= d)
//! int_a^b dt int_a^t dt' C(t - t') = Q(b-a)
//! ```
//!
//! For the exponentially cut-off ohmic density the zero-temperature parts of
//! `C` and `Q` are closed form; the thermal parts are frequency integrals.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::liouville::{FbIndex, LiouvilleMatrix, SystemSpec, TimeGrid};
use crate::quad;

/// Upper frequency limit of the thermal integrals, in units of the cutoff.
pub const FREQUENCY_WINDOW: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectralKind {
    /// `J(w) = (pi/2) alpha w exp(-w/omega_c)`
    OhmicExponential,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralDensity {
    pub kind: SpectralKind,
    pub alpha: f64,
    pub omega_c: f64,
}

impl SpectralDensity {
    pub fn ohmic(alpha: f64, omega_c: f64) -> Result<Self> {
        if !(alpha.is_finite() && alpha >= 0.0) {
            return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
        }
        if !(omega_c.is_finite() && omega_c > 0.0) {
            return Err(Error::InvalidParameter(format!("omega_c must be > 0, got {omega_c}")));
        }
        Ok(Self { kind: SpectralKind::OhmicExponential, alpha, omega_c })
    }

    pub fn eval(&self, omega: f64) -> f64 {
        match self.kind {
            SpectralKind::OhmicExponential => {
                0.5 * std::f64::consts::PI * self.alpha * omega * (-omega / self.omega_c).exp()
            }
        }
    }
}

/// Inverse temperature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Beta {
    Finite(f64),
    Infinite,
}

impl fmt::Display for Beta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Beta::Finite(b) => write!(f, "{b}"),
            Beta::Infinite => f.write_str("inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    pub spectral_density: SpectralDensity,
    pub beta: Beta,
}

impl BathSpec {
    pub fn new(spectral_density: SpectralDensity, beta: Beta) -> Result<Self> {
        if let Beta::Finite(b) = beta {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::InvalidParameter(format!("beta must be > 0, got {b}")));
            }
        }
        Ok(Self { spectral_density, beta })
    }

    /// Ohmic bath with exponential cutoff.
    pub fn ohmic(alpha: f64, omega_c: f64, beta: Beta) -> Result<Self> {
        Self::new(SpectralDensity::ohmic(alpha, omega_c)?, beta)
    }

    fn thermal_integral(&self, g: impl Fn(f64) -> f64) -> Result<f64> {
        let Beta::Finite(beta) = self.beta else {
            return Ok(0.0);
        };
        let sd = self.spectral_density;
        if sd.alpha == 0.0 {
            return Ok(0.0);
        }
        let upper = FREQUENCY_WINDOW * sd.omega_c;
        let integrand = |w: f64| {
            let occupation = 1.0 / (beta * w).exp_m1();
            sd.alpha * (-w / sd.omega_c).exp() * occupation * g(w)
        };
        let scale = sd.alpha * sd.omega_c * sd.omega_c;
        quad::integrate(integrand, 0.0, upper, scale * 1e-3)
    }

    /// Twice-integrated correlation function `Q(t)`.
    pub fn integrated_correlation(&self, t: f64) -> Result<Complex64> {
        let sd = self.spectral_density;
        if sd.alpha == 0.0 || t == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        if t < 0.0 {
            return Ok(self.integrated_correlation(-t)?.conj());
        }
        let x = Complex64::new(0.0, sd.omega_c * t);
        let zero_t = 0.5 * sd.alpha * log1p_minus_identity(x);
        let thermal = self.thermal_integral(|w| {
            let s = (0.5 * w * t).sin();
            2.0 * s * s / w
        })?;
        Ok(zero_t + thermal)
    }
}

/// `ln(1 + x) - x`, by power series near the origin where the direct form
/// cancels.
fn log1p_minus_identity(x: Complex64) -> Complex64 {
    if x.norm() >= 0.5 {
        return (Complex64::new(1.0, 0.0) + x).ln() - x;
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut power = x;
    for k in 2..200 {
        power *= x;
        let sign = if k % 2 == 0 { -1.0 } else { 1.0 };
        let term = power * (sign / k as f64);
        sum += term;
        if term.norm() <= 1e-18 * sum.norm() {
            break;
        }
    }
    sum
}

/// Bath correlation function
/// `C(t) = (1/pi) int_0^inf J(w) [coth(beta w/2) cos(wt) - i sin(wt)] dw`.
pub fn bath_correlation(bath: &BathSpec, t: f64) -> Result<Complex64> {
    let sd = bath.spectral_density;
    if sd.alpha == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let denom = Complex64::new(1.0, sd.omega_c * t);
    let zero_t = 0.5 * sd.alpha * sd.omega_c * sd.omega_c / (denom * denom);
    let thermal = bath.thermal_integral(|w| w * (w * t).cos())?;
    Ok(zero_t + thermal)
}

/// Trotter ordering of the short-time propagator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Splitting {
    /// Half-step bath, whole-step system, half-step bath.
    SymEnv,
    /// Half-step system, whole-step bath, half-step system.
    SymSys,
    /// Whole-step system followed by whole-step bath.
    Asym,
}

impl Splitting {
    pub const ALL: [Splitting; 3] = [Splitting::SymEnv, Splitting::SymSys, Splitting::Asym];

    pub fn as_str(self) -> &'static str {
        match self {
            Splitting::SymEnv => "sym_env",
            Splitting::SymSys => "sym_sys",
            Splitting::Asym => "asym",
        }
    }
}

impl fmt::Display for Splitting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Splitting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sym_env" => Ok(Splitting::SymEnv),
            "sym_sys" => Ok(Splitting::SymSys),
            "asym" => Ok(Splitting::Asym),
            other => Err(Error::InvalidParameter(format!("unknown splitting `{other}`"))),
        }
    }
}

/// Position of a coefficient relative to the ends of the path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EtaRole {
    Interior,
    /// Earlier point is the initial time.
    LeftEndpoint,
    /// Later point is the final time.
    RightEndpoint,
    BothEndpoints,
    SelfInterior,
    /// Self-interaction of a point owning a half window.
    SelfEndpoint,
}

impl EtaRole {
    pub fn is_self(self) -> bool {
        matches!(self, EtaRole::SelfInterior | EtaRole::SelfEndpoint)
    }
}

impl fmt::Display for EtaRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EtaRole::Interior => "interior",
            EtaRole::LeftEndpoint => "left_endpoint",
            EtaRole::RightEndpoint => "right_endpoint",
            EtaRole::BothEndpoints => "both_endpoints",
            EtaRole::SelfInterior => "self",
            EtaRole::SelfEndpoint => "self_endpoint",
        };
        f.write_str(s)
    }
}

/// Discretized influence-functional coefficients for one splitting.
///
/// Values are keyed by separation and role. For the symmetric-bath splitting a
/// step `k` owns `[k dt - dt/2, k dt + dt/2]`, the first and last points own
/// half windows. The other splittings assign uniform whole-step windows, so
/// every coefficient is interior and depends on the separation only.
#[derive(Debug, Clone, PartialEq)]
pub struct EtaTable {
    splitting: Splitting,
    dt: f64,
    horizon: usize,
    values: BTreeMap<(usize, EtaRole), Complex64>,
}

impl EtaTable {
    pub fn splitting(&self) -> Splitting {
        self.splitting
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn get(&self, separation: usize, role: EtaRole) -> Result<Complex64> {
        self.values.get(&(separation, role)).copied().ok_or_else(|| Error::EtaMissing {
            separation,
            role: role.to_string(),
        })
    }

    /// Role of the pair `(k, k')`, `k >= k'`, on a path ending at `horizon`.
    pub fn role_of(&self, k: usize, kp: usize) -> EtaRole {
        endpoint_role(self.splitting, k, kp, true, k == self.horizon)
    }

    /// `eta(k, k')` for `0 <= k' <= k <= horizon`.
    pub fn entry(&self, k: usize, kp: usize) -> Result<(Complex64, EtaRole)> {
        if kp > k || k > self.horizon {
            return Err(Error::Range(format!("eta({k},{kp}) outside horizon {}", self.horizon)));
        }
        let role = self.role_of(k, kp);
        Ok((self.get(k - kp, role)?, role))
    }

    /// All `(k, k', eta, role)` entries of the horizon, in `(k, k')` order.
    pub fn entries(&self) -> Vec<(usize, usize, Complex64, EtaRole)> {
        let mut out = Vec::new();
        for k in 0..=self.horizon {
            for kp in 0..=k {
                if let Ok((v, role)) = self.entry(k, kp) {
                    out.push((k, kp, v, role));
                }
            }
        }
        out
    }

    /// All stored `(separation, role, eta)` values.
    pub fn values(&self) -> impl Iterator<Item = (usize, EtaRole, Complex64)> + '_ {
        self.values.iter().map(|(&(s, r), &v)| (s, r, v))
    }

    /// Copy with every coefficient beyond `max_separation` set to zero, a bath
    /// whose memory spans exactly `max_separation` steps.
    pub fn truncated(&self, max_separation: usize) -> Self {
        let mut out = self.clone();
        for ((sep, _), v) in out.values.iter_mut() {
            if *sep > max_separation {
                *v = Complex64::new(0.0, 0.0);
            }
        }
        out
    }
}

/// Role of the pair `(k, k')` in a chain whose first point is the true
/// initial time when `origin` is set and whose last point `k_top` is the
/// final time when `final_point` is set.
pub(crate) fn endpoint_role(
    splitting: Splitting,
    k: usize,
    kp: usize,
    origin: bool,
    final_point: bool,
) -> EtaRole {
    if splitting != Splitting::SymEnv {
        return if k == kp { EtaRole::SelfInterior } else { EtaRole::Interior };
    }
    let left = origin && kp == 0;
    if k == kp {
        return if left || final_point { EtaRole::SelfEndpoint } else { EtaRole::SelfInterior };
    }
    match (left, final_point) {
        (true, true) => EtaRole::BothEndpoints,
        (true, false) => EtaRole::LeftEndpoint,
        (false, true) => EtaRole::RightEndpoint,
        (false, false) => EtaRole::Interior,
    }
}

struct PhaseCache<'a> {
    bath: &'a BathSpec,
    dt: f64,
    // keyed by multiples of dt/2
    values: BTreeMap<usize, Complex64>,
}

impl PhaseCache<'_> {
    fn at_half_steps(&mut self, halves: usize) -> Result<Complex64> {
        if let Some(v) = self.values.get(&halves) {
            return Ok(*v);
        }
        let v = self.bath.integrated_correlation(0.5 * self.dt * halves as f64)?;
        self.values.insert(halves, v);
        Ok(v)
    }

    /// Window integral for later window `[a, b]` and earlier `[c, d]`, all
    /// given in half steps.
    fn window(&mut self, a: usize, b: usize, c: usize, d: usize) -> Result<Complex64> {
        Ok(self.at_half_steps(b - c)? - self.at_half_steps(b - d)? - self.at_half_steps(a - c)?
            + self.at_half_steps(a - d)?)
    }
}

/// Builds the coefficient table for separations `0..=grid.n_steps`.
pub fn eta_table(bath: &BathSpec, grid: &TimeGrid, splitting: Splitting) -> Result<EtaTable> {
    let horizon = grid.n_steps;
    if horizon == 0 {
        return Err(Error::InvalidParameter("n_steps must be at least 1".into()));
    }
    let mut cache = PhaseCache { bath, dt: grid.dt, values: BTreeMap::new() };
    let mut values = BTreeMap::new();
    values.insert((0, EtaRole::SelfInterior), cache.at_half_steps(2)?);
    for m in 1..=horizon {
        // interior: later [2m-1, 2m+1], earlier [-1, 1]; shifted by one half step
        let h = 2 * m;
        values.insert((m, EtaRole::Interior), cache.window(h, h + 2, 0, 2)?);
    }
    if splitting == Splitting::SymEnv {
        values.insert((0, EtaRole::SelfEndpoint), cache.at_half_steps(1)?);
        for m in 1..=horizon {
            let h = 2 * m;
            // earlier window [0, 1/2], later [m - 1/2, m + 1/2]
            values.insert((m, EtaRole::LeftEndpoint), cache.window(h - 1, h + 1, 0, 1)?);
            // earlier [-1/2, 1/2], later [m - 1/2, m]; shifted by one half step
            values.insert((m, EtaRole::RightEndpoint), cache.window(h, h + 1, 0, 2)?);
            // earlier [0, 1/2], later [m - 1/2, m]
            values.insert((m, EtaRole::BothEndpoints), cache.window(h - 1, h, 0, 1)?);
        }
    }
    Ok(EtaTable { splitting, dt: grid.dt, horizon, values })
}

/// Whether a factor matrix couples two time points or weights a single one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    /// `matrix[alpha, alpha']`: later point `alpha`, earlier point `alpha'`.
    Pairwise,
    /// Diagonal matrix of single-time weights.
    SelfWeight,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InfluenceFactorMatrix {
    pub separation: usize,
    pub role: EtaRole,
    pub kind: FactorKind,
    pub matrix: LiouvilleMatrix,
}

impl InfluenceFactorMatrix {
    /// Diagonal of a self-weight factor.
    pub fn weights(&self) -> Vec<Complex64> {
        (0..self.matrix.dim()).map(|i| self.matrix.matrix()[(i, i)]).collect()
    }
}

/// Single influence factor `exp(-ds_later (eta s+_earlier - conj(eta) s-_earlier))`.
pub fn influence_factor(coupling: &[f64], eta: Complex64, later: FbIndex, earlier: FbIndex) -> Complex64 {
    let ds = coupling[later.forward] - coupling[later.backward];
    if ds == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let sp = coupling[earlier.forward];
    let sm = coupling[earlier.backward];
    (-ds * (eta * sp - eta.conj() * sm)).exp()
}

pub fn influence_factor_matrix(
    sys: &SystemSpec,
    table: &EtaTable,
    separation: usize,
    role: EtaRole,
) -> Result<InfluenceFactorMatrix> {
    if (separation == 0) != role.is_self() {
        return Err(Error::EtaMissing { separation, role: role.to_string() });
    }
    let eta = table.get(separation, role)?;
    let n = sys.n();
    let s = sys.coupling();
    let (kind, matrix) = if role.is_self() {
        (FactorKind::SelfWeight, LiouvilleMatrix::diagonal(n, |a| influence_factor(s, eta, a, a)))
    } else {
        (FactorKind::Pairwise, LiouvilleMatrix::from_fn(n, |a, b| influence_factor(s, eta, a, b)))
    };
    Ok(InfluenceFactorMatrix { separation, role, kind, matrix })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liouville::liou_norm;

    fn default_bath() -> BathSpec {
        BathSpec::ohmic(0.1, 5.0, Beta::Finite(5.0)).unwrap()
    }

    #[test]
    fn validation() {
        assert!(SpectralDensity::ohmic(-0.1, 1.0).is_err());
        assert!(SpectralDensity::ohmic(0.1, 0.0).is_err());
        assert!(BathSpec::ohmic(0.1, 1.0, Beta::Finite(-1.0)).is_err());
    }

    #[test]
    fn correlation_zero_coupling() {
        let bath = BathSpec::ohmic(0.0, 5.0, Beta::Finite(2.0)).unwrap();
        assert_eq!(bath_correlation(&bath, 0.3).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn correlation_zero_temperature_origin() {
        let bath = BathSpec::ohmic(0.1, 5.0, Beta::Infinite).unwrap();
        let c0 = bath_correlation(&bath, 0.0).unwrap();
        assert!((c0 - Complex64::new(1.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn correlation_time_reversal() {
        let bath = default_bath();
        for t in [0.05, 0.3, 1.7] {
            let a = bath_correlation(&bath, t).unwrap();
            let b = bath_correlation(&bath, -t).unwrap();
            assert!((a - b.conj()).norm() < 1e-12);
        }
    }

    #[test]
    fn integrated_correlation_small_time() {
        // Q(t) ~ C(0) t^2 / 2
        let bath = default_bath();
        let t = 1e-5;
        let q = bath.integrated_correlation(t).unwrap();
        let c0 = bath_correlation(&bath, 0.0).unwrap();
        assert!((q - c0 * t * t / 2.0).norm() < 1e-3 * (c0.norm() * t * t));
    }

    #[test]
    fn zero_coupling_table_is_zero() {
        let bath = BathSpec::ohmic(0.0, 5.0, Beta::Finite(5.0)).unwrap();
        let grid = TimeGrid::new(0.1, 4, 4).unwrap();
        for split in Splitting::ALL {
            let t = eta_table(&bath, &grid, split).unwrap();
            assert!(t.values().all(|(_, _, v)| v == Complex64::new(0.0, 0.0)));
        }
    }

    #[test]
    fn translational_invariance() {
        let grid = TimeGrid::new(0.1, 6, 6).unwrap();
        for split in [Splitting::Asym, Splitting::SymSys] {
            let t = eta_table(&default_bath(), &grid, split).unwrap();
            for k in 0..6 {
                for kp in 0..=k {
                    assert_eq!(t.entry(k, kp).unwrap().0, t.entry(k + 1, kp + 1).unwrap().0);
                }
            }
        }
    }

    #[test]
    fn endpoint_coefficients_differ() {
        let grid = TimeGrid::new(0.1, 5, 5).unwrap();
        let t = eta_table(&default_bath(), &grid, Splitting::SymEnv).unwrap();
        for m in 1..=5 {
            let interior = t.get(m, EtaRole::Interior).unwrap();
            for role in [EtaRole::LeftEndpoint, EtaRole::RightEndpoint, EtaRole::BothEndpoints] {
                assert!((t.get(m, role).unwrap() - interior).norm() > 1e-8, "{role} at {m}");
            }
        }
        assert_eq!(t.role_of(5, 0), EtaRole::BothEndpoints);
        assert_eq!(t.role_of(3, 0), EtaRole::LeftEndpoint);
        assert_eq!(t.role_of(5, 2), EtaRole::RightEndpoint);
        assert_eq!(t.role_of(5, 5), EtaRole::SelfEndpoint);
        assert_eq!(t.role_of(2, 2), EtaRole::SelfInterior);
    }

    #[test]
    fn constant_correlation_window_identity() {
        // With C = const the window integrals reduce to products of lengths;
        // checks the Q-combination bookkeeping through the short-time limit.
        let bath = BathSpec::ohmic(0.1, 5.0, Beta::Finite(5.0)).unwrap();
        let grid = TimeGrid::new(1e-4, 3, 3).unwrap();
        let t = eta_table(&bath, &grid, Splitting::SymEnv).unwrap();
        let c0 = bath_correlation(&bath, 0.0).unwrap();
        let dt = grid.dt;
        let rel = |v: Complex64, w: f64| (v - c0 * w).norm() / (c0.norm() * w);
        assert!(rel(t.get(2, EtaRole::Interior).unwrap(), dt * dt) < 1e-2);
        assert!(rel(t.get(2, EtaRole::LeftEndpoint).unwrap(), dt * dt / 2.0) < 1e-2);
        assert!(rel(t.get(2, EtaRole::BothEndpoints).unwrap(), dt * dt / 4.0) < 1e-2);
        assert!(rel(t.get(0, EtaRole::SelfInterior).unwrap(), dt * dt / 2.0) < 1e-2);
        assert!(rel(t.get(0, EtaRole::SelfEndpoint).unwrap(), dt * dt / 8.0) < 1e-2);
    }

    #[test]
    fn factor_matrix_properties() {
        let sys = SystemSpec::spin_boson(1.0, 0.0);
        let grid = TimeGrid::new(0.1, 6, 6).unwrap();
        let table = eta_table(&default_bath(), &grid, Splitting::SymEnv).unwrap();
        for m in 1..=6 {
            let f = influence_factor_matrix(&sys, &table, m, EtaRole::Interior).unwrap();
            assert_eq!(f.kind, FactorKind::Pairwise);
            for a in [FbIndex::new(0, 0), FbIndex::new(1, 1)] {
                for c in 0..4 {
                    assert_eq!(f.matrix.get(a, FbIndex::from_flat(c, 2)), Complex64::new(1.0, 0.0));
                }
            }
            for r in 0..4 {
                for c in 0..4 {
                    let (ri, ci) = (FbIndex::from_flat(r, 2), FbIndex::from_flat(c, 2));
                    let v = f.matrix.get(ri, ci);
                    let w = f.matrix.get(ri.swapped(), ci.swapped());
                    assert!((v - w.conj()).norm() < 1e-12);
                }
            }
        }
        let i0 = influence_factor_matrix(&sys, &table, 0, EtaRole::SelfInterior).unwrap();
        assert_eq!(i0.kind, FactorKind::SelfWeight);
        assert!(i0.weights().iter().all(|w| w.norm() <= 1.0 + 1e-15));
        let missing = influence_factor_matrix(&sys, &table, 9, EtaRole::Interior).unwrap_err();
        assert_eq!(missing.code(), "eta_missing");
    }

    #[test]
    fn factor_matrix_zero_coupling_all_ones() {
        let sys = SystemSpec::spin_boson(1.0, 0.0);
        let bath = BathSpec::ohmic(0.0, 5.0, Beta::Infinite).unwrap();
        let grid = TimeGrid::new(0.1, 3, 3).unwrap();
        let table = eta_table(&bath, &grid, Splitting::Asym).unwrap();
        for m in 1..=3 {
            let f = influence_factor_matrix(&sys, &table, m, EtaRole::Interior).unwrap();
            assert!(f.matrix.matrix().iter().all(|z| *z == Complex64::new(1.0, 0.0)));
        }
        let i0 = influence_factor_matrix(&sys, &table, 0, EtaRole::SelfInterior).unwrap();
        assert!(liou_norm(&(&i0.matrix - &LiouvilleMatrix::identity(2))) == 0.0);
    }

    #[test]
    fn factor_deviation_decays_with_separation() {
        let sys = SystemSpec::spin_boson(1.0, 0.0);
        let grid = TimeGrid::new(0.1, 30, 6).unwrap();
        let table = eta_table(&default_bath(), &grid, Splitting::Asym).unwrap();
        let ones = LiouvilleMatrix::from_fn(2, |_, _| Complex64::new(1.0, 0.0));
        let dev: Vec<f64> = (1..=30)
            .map(|m| liou_norm(&(&influence_factor_matrix(&sys, &table, m, EtaRole::Interior).unwrap().matrix - &ones)))
            .collect();
        let m_star = 3;
        for w in dev[m_star - 1..].windows(2) {
            assert!(w[1] <= w[0], "{dev:?}");
        }
    }
}
