// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Composite Gauss-Legendre quadrature with panel doubling.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

const RULE_DEGREE: usize = 20;
const INITIAL_PANELS: usize = 16;
const MAX_PANELS: usize = 1 << 14;

/// Accept once successive refinements agree to this relative level.
const TARGET_REL: f64 = 1e-14;
/// Fail if the last refinement still moved the result by more than this.
pub const FAIL_REL: f64 = 1e-10;

fn rule() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| GaussLegendre::new(NonZeroUsize::new(RULE_DEGREE).unwrap()))
}

fn composite(f: &impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    // fixed summation order keeps the result bit-reproducible
    (0..panels)
        .map(|p| {
            let lo = a + h * p as f64;
            rule().integrate(lo, lo + h, f)
        })
        .sum()
}

/// Integrates `f` over `[a, b]`, doubling the panel count until the result
/// stabilises. `scale` sets the magnitude below which changes count as zero.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, scale: f64) -> Result<f64> {
    let mut panels = INITIAL_PANELS;
    let mut prev = composite(&f, a, b, panels);
    loop {
        panels *= 2;
        let next = composite(&f, a, b, panels);
        let change = (next - prev).abs();
        let reference = next.abs().max(scale.abs()).max(f64::MIN_POSITIVE);
        if change <= TARGET_REL * reference {
            return Ok(next);
        }
        if panels >= MAX_PANELS {
            if change <= FAIL_REL * reference {
                return Ok(next);
            }
            return Err(Error::QuadratureFailed(format!(
                "relative change {:.3e} after {panels} panels on [{a}, {b}]",
                change / reference
            )));
        }
        if !next.is_finite() {
            return Err(Error::QuadratureFailed(format!("non-finite value on [{a}, {b}]")));
        }
        prev = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrates_smooth_functions() {
        let v = integrate(|x| x.exp(), 0.0, 1.0, 0.0).unwrap();
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-14);
        let v = integrate(|x| (3.0 * x).cos(), 0.0, 10.0, 0.0).unwrap();
        assert!((v - (30f64).sin() / 3.0).abs() < 1e-13);
    }

    #[test]
    fn reports_non_convergence() {
        let err = integrate(|x| (1e6 * x * x).sin() / x.sqrt(), 0.0, 50.0, 0.0).unwrap_err();
        assert_eq!(err.code(), "quadrature_failed");
    }
}
