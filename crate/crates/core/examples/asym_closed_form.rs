// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Under the asymmetric splitting the first two termination matrices have a
//! closed form in the bare propagator and influence factors.
//!
//!     cargo run --release --example asym_closed_form

use smatpi::kernels::{closed_form_asym, extract_smatpi, AuxZeroConvention};
use smatpi::pathsum::DEFAULT_BUDGET;
use smatpi::{eta_table, liou_norm, BathSpec, Beta, Splitting, SystemSpec, TimeGrid};

fn main() -> smatpi::Result<()> {
    let sys = SystemSpec::spin_boson(1.0, 0.0);
    let bath = BathSpec::ohmic(0.1, 5.0, Beta::Finite(5.0))?;
    let table = eta_table(&bath, &TimeGrid::new(0.1, 4, 4)?, Splitting::Asym)?;
    let set = extract_smatpi(&sys, &table, 4, AuxZeroConvention::default(), DEFAULT_BUDGET)?;
    let term = set.termination.as_ref().expect("asym sets carry termination matrices");
    for order in 1..=2 {
        let closed = closed_form_asym(&sys, &table, order)?;
        println!(
            "T_{order}: |closed form| = {:.6e}, |closed - extracted| = {:.1e}",
            liou_norm(&closed),
            liou_norm(&(&closed - &term[order - 1]))
        );
    }
    Ok(())
}
