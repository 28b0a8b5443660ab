// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! The two symmetric splittings converge to each other as the time step
//! shrinks. Prints |U_env - U_sys| at t = 1.6 and the observed order.
//!
//!     cargo run --release --example splitting_discrepancy

use smatpi::kernels::{extract_smatpi, propagate, AuxZeroConvention};
use smatpi::{eta_table, liou_norm, BathSpec, Beta, LiouvilleMatrix, Splitting, SystemSpec, TimeGrid};

fn final_map(sys: &SystemSpec, bath: &BathSpec, dt: f64, sp: Splitting) -> smatpi::Result<LiouvilleMatrix> {
    let n = (1.6 / dt).round() as usize;
    let r = n.min(10);
    let table = eta_table(bath, &TimeGrid::new(dt, n, r)?, sp)?;
    let set = extract_smatpi(sys, &table, r, AuxZeroConvention::default(), u128::MAX)?;
    Ok(propagate(&set, n, None)?.at(n).clone())
}

fn main() -> smatpi::Result<()> {
    let sys = SystemSpec::spin_boson(1.0, 0.0);
    let bath = BathSpec::ohmic(0.1, 5.0, Beta::Finite(5.0))?;
    let mut previous: Option<f64> = None;
    for dt in [0.2, 0.1, 0.05] {
        let gap = liou_norm(&(&final_map(&sys, &bath, dt, Splitting::SymEnv)? - &final_map(&sys, &bath, dt, Splitting::SymSys)?));
        match previous {
            Some(p) => println!("dt = {dt:<5} |U_env - U_sys| = {gap:.4e}  order {:.2}", (p / gap).log2()),
            None => println!("dt = {dt:<5} |U_env - U_sys| = {gap:.4e}"),
        }
        previous = Some(gap);
    }
    Ok(())
}
