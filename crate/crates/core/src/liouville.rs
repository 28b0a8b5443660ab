// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Forward-backward (Liouville space) types and bare system propagators.
//!
//! A density matrix `rho` of an `n`-state system is flattened into a vector of
//! length `n^2` with the forward (ket) index major: `flat = forward * n + backward`.
//! Every superoperator in the crate acts on vectors in that layout.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Hermiticity tolerance applied when validating a system Hamiltonian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// System Hamiltonian plus the eigenvalues of the (diagonal) system-bath
/// coupling operator.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemSpec {
    hamiltonian: DMatrix<Complex64>,
    coupling: Vec<f64>,
}

impl SystemSpec {
    pub fn new(hamiltonian: DMatrix<Complex64>, coupling: Vec<f64>) -> Result<Self> {
        let n = hamiltonian.nrows();
        if hamiltonian.ncols() != n {
            return Err(Error::InvalidSystem(format!(
                "hamiltonian must be square, got {}x{}",
                n,
                hamiltonian.ncols()
            )));
        }
        if n < 2 {
            return Err(Error::InvalidSystem(format!("need at least 2 states, got {n}")));
        }
        if coupling.len() != n {
            return Err(Error::InvalidSystem(format!(
                "expected {n} coupling eigenvalues, got {}",
                coupling.len()
            )));
        }
        if hamiltonian.iter().any(|z| !z.re.is_finite() || !z.im.is_finite())
            || coupling.iter().any(|s| !s.is_finite())
        {
            return Err(Error::InvalidSystem("non-finite input".into()));
        }
        let dev = hermitian_deviation(&hamiltonian);
        if dev > HERMITIAN_TOL {
            return Err(Error::NonHermitian(dev));
        }
        Ok(Self { hamiltonian, coupling })
    }

    /// Two-level system `H = (tunneling/2) sigma_x + (bias/2) sigma_z`
    /// coupled through `sigma_z`, i.e. coupling eigenvalues `{+1, -1}`.
    pub fn spin_boson(tunneling: f64, bias: f64) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        let h = DMatrix::from_row_slice(
            2,
            2,
            &[c(0.5 * bias), c(0.5 * tunneling), c(0.5 * tunneling), c(-0.5 * bias)],
        );
        Self::new(h, vec![1.0, -1.0]).expect("spin-boson hamiltonian is valid")
    }

    pub fn n(&self) -> usize {
        self.coupling.len()
    }

    pub fn hamiltonian(&self) -> &DMatrix<Complex64> {
        &self.hamiltonian
    }

    pub fn coupling(&self) -> &[f64] {
        &self.coupling
    }

    /// `exp(-i H tau)` in the system Hilbert space.
    pub fn evolution(&self, tau: f64) -> DMatrix<Complex64> {
        let eig = self.hamiltonian.clone().symmetric_eigen();
        let phases = DMatrix::from_diagonal(&DVector::from_iterator(
            self.n(),
            eig.eigenvalues.iter().map(|&e| Complex64::new(0.0, -e * tau).exp()),
        ));
        &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
    }
}

/// Max elementwise deviation `|H - H^dagger|`.
pub fn hermitian_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut dev = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// A forward-backward index pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FbIndex {
    pub forward: usize,
    pub backward: usize,
}

impl FbIndex {
    pub fn new(forward: usize, backward: usize) -> Self {
        Self { forward, backward }
    }

    pub fn flat(self, n: usize) -> usize {
        self.forward * n + self.backward
    }

    pub fn from_flat(flat: usize, n: usize) -> Self {
        Self { forward: flat / n, backward: flat % n }
    }

    /// The pair with forward and backward labels exchanged.
    pub fn swapped(self) -> Self {
        Self { forward: self.backward, backward: self.forward }
    }

    pub fn is_diagonal(self) -> bool {
        self.forward == self.backward
    }
}

/// An `n^2 x n^2` superoperator in forward-backward space.
#[derive(Clone, PartialEq)]
pub struct LiouvilleMatrix {
    n: usize,
    data: DMatrix<Complex64>,
}

impl fmt::Debug for LiouvilleMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LiouvilleMatrix").field("n", &self.n).field("data", &self.data).finish()
    }
}

impl LiouvilleMatrix {
    pub fn from_matrix(n: usize, data: DMatrix<Complex64>) -> Result<Self> {
        let dim = n * n;
        if data.nrows() != dim || data.ncols() != dim {
            return Err(Error::DimMismatch(format!(
                "expected {dim}x{dim} for n={n}, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(Self { n, data })
    }

    pub fn identity(n: usize) -> Self {
        Self { n, data: DMatrix::identity(n * n, n * n) }
    }

    pub fn zeros(n: usize) -> Self {
        Self { n, data: DMatrix::zeros(n * n, n * n) }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(FbIndex, FbIndex) -> Complex64) -> Self {
        let dim = n * n;
        let data = DMatrix::from_fn(dim, dim, |r, c| f(FbIndex::from_flat(r, n), FbIndex::from_flat(c, n)));
        Self { n, data }
    }

    /// Diagonal superoperator from per-pair weights.
    pub fn diagonal(n: usize, mut f: impl FnMut(FbIndex) -> Complex64) -> Self {
        let dim = n * n;
        let diag = DVector::from_fn(dim, |r, _| f(FbIndex::from_flat(r, n)));
        Self { n, data: DMatrix::from_diagonal(&diag) }
    }

    /// Number of system states.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n * self.n
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.data
    }

    pub fn get(&self, row: FbIndex, col: FbIndex) -> Complex64 {
        self.data[(row.flat(self.n), col.flat(self.n))]
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { n: self.n, data: &self.data * Complex64::new(factor, 0.0) }
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimMismatch(format!("n={} vs n={}", self.n, other.n)));
        }
        Ok(())
    }

    /// Max elementwise deviation from `A[(a,b),(c,d)] = conj(A[(b,a),(d,c)])`,
    /// the symmetry every map that preserves Hermiticity of `rho` obeys.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.n;
        let mut dev = 0.0f64;
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                let rs = FbIndex::from_flat(r, n).swapped().flat(n);
                let cs = FbIndex::from_flat(c, n).swapped().flat(n);
                dev = dev.max((self.data[(r, c)] - self.data[(rs, cs)].conj()).norm());
            }
        }
        dev
    }

    /// Max deviation of the column sums over diagonal rows from the identity
    /// pattern, i.e. how far the map is from preserving the trace.
    pub fn trace_defect(&self) -> f64 {
        let n = self.n;
        let mut dev = 0.0f64;
        for c in 0..self.dim() {
            let col = FbIndex::from_flat(c, n);
            let sum: Complex64 = (0..n).map(|a| self.data[(FbIndex::new(a, a).flat(n), c)]).sum();
            let target = if col.is_diagonal() { 1.0 } else { 0.0 };
            dev = dev.max((sum - target).norm());
        }
        dev
    }
}

impl Mul for &LiouvilleMatrix {
    type Output = LiouvilleMatrix;
    fn mul(self, rhs: &LiouvilleMatrix) -> LiouvilleMatrix {
        assert_eq!(self.n, rhs.n, "LiouvilleMatrix product dimension mismatch");
        LiouvilleMatrix { n: self.n, data: &self.data * &rhs.data }
    }
}

impl Add for &LiouvilleMatrix {
    type Output = LiouvilleMatrix;
    fn add(self, rhs: &LiouvilleMatrix) -> LiouvilleMatrix {
        assert_eq!(self.n, rhs.n, "LiouvilleMatrix sum dimension mismatch");
        LiouvilleMatrix { n: self.n, data: &self.data + &rhs.data }
    }
}

impl Sub for &LiouvilleMatrix {
    type Output = LiouvilleMatrix;
    fn sub(self, rhs: &LiouvilleMatrix) -> LiouvilleMatrix {
        assert_eq!(self.n, rhs.n, "LiouvilleMatrix difference dimension mismatch");
        LiouvilleMatrix { n: self.n, data: &self.data - &rhs.data }
    }
}

/// Simulation time grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    pub dt: f64,
    pub n_steps: usize,
    pub r_max: usize,
}

impl TimeGrid {
    pub fn new(dt: f64, n_steps: usize, r_max: usize) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be positive, got {dt}")));
        }
        if n_steps == 0 || r_max == 0 {
            return Err(Error::InvalidParameter("n_steps and r_max must be at least 1".into()));
        }
        if r_max > n_steps {
            return Err(Error::InvalidParameter(format!(
                "r_max ({r_max}) exceeds n_steps ({n_steps})"
            )));
        }
        Ok(Self { dt, n_steps, r_max })
    }
}

/// Forward-backward propagator of the bare system over time `tau`:
/// `G[(a,b),(c,d)] = <a|e^{-iH tau}|c> <d|e^{+iH tau}|b>`.
pub fn fb_propagator(sys: &SystemSpec, tau: f64) -> LiouvilleMatrix {
    let v = sys.evolution(tau);
    let n = sys.n();
    LiouvilleMatrix::from_fn(n, |row, col| {
        v[(row.forward, col.forward)] * v[(row.backward, col.backward)].conj()
    })
}

/// Applies a superoperator to a density matrix.
pub fn apply_map(u: &LiouvilleMatrix, rho0: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    let n = u.n();
    if rho0.nrows() != n || rho0.ncols() != n {
        return Err(Error::DimMismatch(format!(
            "density matrix is {}x{}, map acts on n={n}",
            rho0.nrows(),
            rho0.ncols()
        )));
    }
    let v = DVector::from_fn(n * n, |r, _| {
        let idx = FbIndex::from_flat(r, n);
        rho0[(idx.forward, idx.backward)]
    });
    let out = u.matrix() * v;
    Ok(DMatrix::from_fn(n, n, |a, b| out[FbIndex::new(a, b).flat(n)]))
}

/// Max elementwise absolute value; the decay metric used for kernel matrices.
pub fn liou_norm(a: &LiouvilleMatrix) -> f64 {
    a.matrix().iter().fold(0.0f64, |m, z| m.max(z.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn fb_index_round_trip() {
        for n in 2..5 {
            for flat in 0..n * n {
                assert_eq!(FbIndex::from_flat(flat, n).flat(n), flat);
            }
        }
        assert_eq!(FbIndex::new(1, 0).flat(2), 2);
    }

    #[test]
    fn rejects_non_hermitian() {
        let h = DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.5, 0.0), c(0.0, 0.0)]);
        let err = SystemSpec::new(h, vec![1.0, -1.0]).unwrap_err();
        assert_eq!(err.code(), "non_hermitian");
    }

    #[test]
    fn rejects_bad_shapes() {
        let h = DMatrix::from_element(1, 1, c(0.0, 0.0));
        assert!(SystemSpec::new(h, vec![1.0]).is_err());
        let h = DMatrix::from_element(2, 2, c(0.0, 0.0));
        assert!(SystemSpec::new(h, vec![1.0]).is_err());
    }

    #[test]
    fn propagator_identity_cases() {
        let sys = SystemSpec::spin_boson(1.0, 0.3);
        assert!(liou_norm(&(&fb_propagator(&sys, 0.0) - &LiouvilleMatrix::identity(2))) < 1e-15);
        let free = SystemSpec::spin_boson(0.0, 0.0);
        assert!(liou_norm(&(&fb_propagator(&free, 0.1) - &LiouvilleMatrix::identity(2))) < 1e-15);
    }

    #[test]
    fn half_period_rabi_flip() {
        // H = (1/2) sigma_x, exp(-i pi sigma_x / 2) = -i sigma_x: |0> -> |1>.
        let sys = SystemSpec::spin_boson(1.0, 0.0);
        let g = fb_propagator(&sys, PI);
        let amp = g.get(FbIndex::new(1, 1), FbIndex::new(0, 0));
        assert!((amp.norm() - 1.0).abs() < 1e-12);
        assert!(g.get(FbIndex::new(0, 0), FbIndex::new(0, 0)).norm() < 1e-12);
    }

    #[test]
    fn apply_map_matches_conjugation() {
        let sys = SystemSpec::spin_boson(1.0, 0.4);
        let tau = 0.37;
        let rho = DMatrix::from_row_slice(2, 2, &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)]);
        let out = apply_map(&fb_propagator(&sys, tau), &rho).unwrap();
        let v = sys.evolution(tau);
        let direct = &v * &rho * v.adjoint();
        assert!((out - direct).iter().all(|z| z.norm() < 1e-13));
    }

    #[test]
    fn apply_map_identity_and_zero() {
        let rho = DMatrix::from_row_slice(2, 2, &[c(0.5, 0.0), c(0.0, 0.5), c(0.0, -0.5), c(0.5, 0.0)]);
        assert_eq!(apply_map(&LiouvilleMatrix::identity(2), &rho).unwrap(), rho);
        let zero = apply_map(&LiouvilleMatrix::zeros(2), &rho).unwrap();
        assert!(zero.iter().all(|z| *z == c(0.0, 0.0)));
        let bad = DMatrix::from_element(3, 3, c(0.0, 0.0));
        assert_eq!(apply_map(&LiouvilleMatrix::identity(2), &bad).unwrap_err().code(), "dim_mismatch");
    }

    #[test]
    fn norm_examples() {
        assert_eq!(liou_norm(&LiouvilleMatrix::zeros(2)), 0.0);
        assert_eq!(liou_norm(&LiouvilleMatrix::identity(2)), 1.0);
        let mut m = LiouvilleMatrix::zeros(2).into_matrix();
        m[(1, 3)] = c(3.0, -4.0);
        assert_eq!(liou_norm(&LiouvilleMatrix::from_matrix(2, m).unwrap()), 5.0);
    }

    #[test]
    fn propagator_composes_and_is_unitary() {
        let sys = SystemSpec::spin_boson(1.0, 0.8);
        let a = fb_propagator(&sys, 0.21);
        let b = fb_propagator(&sys, 0.34);
        let ab = fb_propagator(&sys, 0.55);
        assert!(liou_norm(&(&(&a * &b) - &ab)) < 1e-12);
        let gg = LiouvilleMatrix::from_matrix(2, a.matrix() * a.matrix().adjoint()).unwrap();
        assert!(liou_norm(&(&gg - &LiouvilleMatrix::identity(2))) < 1e-12);
        assert!(a.trace_defect() < 1e-12);
        assert!(a.hermiticity_defect() < 1e-12);
    }
}
