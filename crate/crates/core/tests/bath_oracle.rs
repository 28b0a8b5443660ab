// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Bath coefficients against an independent route: the correlation function
//! from its thermal (image) series, integrated over time windows by
//! two-dimensional Gauss-Legendre quadrature.

use approx::assert_relative_eq;
use gauss_quad::GaussLegendre;
use num_complex::Complex64;

use smatpi::{bath_correlation, eta_table, BathSpec, Beta, EtaRole, Splitting, TimeGrid};

const ALPHA: f64 = 0.1;
const OMEGA_C: f64 = 5.0;
const BETA: f64 = 5.0;
const DT: f64 = 0.1;

/// `eta(1,0)`, interior role, frozen from `series_window` at the first run.
const GOLDEN_ETA_1: (f64, f64) = (0.006233598303997986, -0.007094852730208379);

/// `C(t) = (alpha/2) [ 1/(1/wc + i t)^2 + 2 sum_k Re 1/(1/wc + k beta + i t)^2 ]`,
/// the expansion of `coth` in powers of `exp(-beta w)`. The tail past `K` is
/// replaced by its midpoint integral.
fn c_series(t: f64) -> Complex64 {
    const K: usize = 4000;
    let a = 1.0 / OMEGA_C;
    let term = |k: f64| (1.0 / Complex64::new(a + k * BETA, t).powi(2)).re;
    let mut sum: f64 = (1..=K).map(|k| term(k as f64)).sum();
    sum += (1.0 / (BETA * Complex64::new(a + (K as f64 + 0.5) * BETA, t))).re;
    0.5 * ALPHA * (1.0 / Complex64::new(a, t).powi(2) + 2.0 * sum)
}

/// `int_a^b dt int_c^d dt' C(t - t')` by a product Gauss rule on panels.
fn series_window(a: f64, b: f64, c: f64, d: f64) -> Complex64 {
    let rule = GaussLegendre::new(std::num::NonZeroUsize::new(40).unwrap());
    let panels = 8;
    let mut acc = Complex64::new(0.0, 0.0);
    let (hx, hy) = ((b - a) / panels as f64, (d - c) / panels as f64);
    for i in 0..panels {
        for j in 0..panels {
            let (x0, y0) = (a + i as f64 * hx, c + j as f64 * hy);
            for (x, wx) in rule.nodes().zip(rule.weights()) {
                for (y, wy) in rule.nodes().zip(rule.weights()) {
                    let t = x0 + 0.5 * hx * (x + 1.0);
                    let tp = y0 + 0.5 * hy * (y + 1.0);
                    acc += c_series(t - tp) * (wx * wy * 0.25 * hx * hy);
                }
            }
        }
    }
    acc
}

fn bath() -> BathSpec {
    BathSpec::ohmic(ALPHA, OMEGA_C, Beta::Finite(BETA)).unwrap()
}

#[test]
fn zero_temperature_correlation_at_origin() {
    let b = BathSpec::ohmic(ALPHA, OMEGA_C, Beta::Infinite).unwrap();
    assert_relative_eq!(bath_correlation(&b, 0.0).unwrap().re, 1.25, max_relative = 1e-14);
    assert_eq!(bath_correlation(&b, 0.0).unwrap().im, 0.0);
}

#[test]
fn correlation_matches_series() {
    for t in [0.0, 0.05, 0.3, 1.0, 4.0] {
        let got = bath_correlation(&bath(), t).unwrap();
        let want = c_series(t);
        assert!((got - want).norm() < 1e-10 * want.norm().max(1e-3), "t = {t}: {got} vs {want}");
    }
}

#[test]
fn interior_eta_matches_double_quadrature() {
    let table = eta_table(&bath(), &TimeGrid::new(DT, 4, 4).unwrap(), Splitting::SymEnv).unwrap();
    let oracle = series_window(DT, 2.0 * DT, 0.0, DT);
    let got = table.get(1, EtaRole::Interior).unwrap();
    assert!((got - oracle).norm() < 1e-10, "{got} vs {oracle}");
    let golden = Complex64::new(GOLDEN_ETA_1.0, GOLDEN_ETA_1.1);
    assert!((got - golden).norm() < 1e-10, "{got} vs golden {golden}");
}
