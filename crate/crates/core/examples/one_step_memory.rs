// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! With bath memory cut after one step, SMatPI matrices vanish beyond k = 1
//! while transfer tensors from the same dynamics do not.
//!
//!     cargo run --release --example one_step_memory

use smatpi::kernels::{extract_smatpi, extract_ttm_set, AuxZeroConvention};
use smatpi::pathsum::DEFAULT_BUDGET;
use smatpi::{eta_table, liou_norm, BathSpec, Beta, Splitting, SystemSpec, TimeGrid};

fn main() -> smatpi::Result<()> {
    let sys = SystemSpec::spin_boson(1.0, 0.0);
    let bath = BathSpec::ohmic(0.1, 5.0, Beta::Finite(5.0))?;
    let table = eta_table(&bath, &TimeGrid::new(0.1, 6, 6)?, Splitting::SymEnv)?.truncated(1);

    let smatpi = extract_smatpi(&sys, &table, 6, AuxZeroConvention::default(), DEFAULT_BUDGET)?;
    let ttm = extract_ttm_set(&sys, &table, 6, DEFAULT_BUDGET)?;
    let term = smatpi.termination.as_ref().expect("sym_env sets carry termination matrices");
    println!("{:>3} {:>12} {:>12} {:>12}", "k", "|M_k|", "|T_k|", "|T^C_k|");
    for k in 1..=6 {
        println!(
            "{k:>3} {:>12.3e} {:>12.3e} {:>12.3e}",
            liou_norm(&smatpi.midpoint[k - 1]),
            liou_norm(&term[k - 1]),
            liou_norm(&ttm.midpoint[k - 1])
        );
    }
    Ok(())
}
