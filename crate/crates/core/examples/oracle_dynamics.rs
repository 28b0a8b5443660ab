// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Exact short-time dynamics of the spin-boson model from brute-force path
//! sums, for each Trotter splitting.
//!
//!     cargo run --release --example oracle_dynamics

use nalgebra::DMatrix;
use num_complex::Complex64;
use smatpi::kernels::oracle_trajectory;
use smatpi::pathsum::DEFAULT_BUDGET;
use smatpi::{apply_map, eta_table, BathSpec, Beta, Splitting, SystemSpec, TimeGrid};

fn main() -> smatpi::Result<()> {
    let sys = SystemSpec::spin_boson(1.0, 0.0);
    let bath = BathSpec::ohmic(0.1, 5.0, Beta::Finite(5.0))?;
    let grid = TimeGrid::new(0.1, 8, 8)?;
    let mut rho0 = DMatrix::zeros(2, 2);
    rho0[(0, 0)] = Complex64::new(1.0, 0.0);

    println!("{:>4} {:>12} {:>12} {:>12}", "k", "sym_env", "sym_sys", "asym");
    let mut columns = Vec::new();
    for sp in Splitting::ALL {
        let traj = oracle_trajectory(&sys, &eta_table(&bath, &grid, sp)?, grid.n_steps, DEFAULT_BUDGET)?;
        let pops = traj
            .maps
            .iter()
            .map(|u| apply_map(u, &rho0).map(|r| (r[(0, 0)] - r[(1, 1)]).re))
            .collect::<smatpi::Result<Vec<_>>>()?;
        columns.push(pops);
    }
    for (k, ((a, b), c)) in columns[0].iter().zip(&columns[1]).zip(&columns[2]).enumerate() {
        println!("{:>4} {a:>12.8} {b:>12.8} {c:>12.8}", k + 1);
    }
    Ok(())
}
