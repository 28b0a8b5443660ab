// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Saves a kernel set, reloads it bit for bit and propagates from the file.
//!
//!     cargo run --release --example kernel_persistence

use smatpi::cli::KernelFile;
use smatpi::kernels::{extract_smatpi, propagate, AuxZeroConvention};
use smatpi::pathsum::DEFAULT_BUDGET;
use smatpi::{eta_table, liou_norm, BathSpec, Beta, Splitting, SystemSpec, TimeGrid};

fn main() -> smatpi::Result<()> {
    let sys = SystemSpec::spin_boson(1.0, 0.0);
    let bath = BathSpec::ohmic(0.1, 5.0, Beta::Finite(5.0))?;
    let table = eta_table(&bath, &TimeGrid::new(0.1, 30, 6)?, Splitting::SymSys)?;
    let set = extract_smatpi(&sys, &table, 6, AuxZeroConvention::default(), DEFAULT_BUDGET)?;

    let mut file = KernelFile::new(set);
    file.metadata.insert("note".into(), "spin-boson defaults".into());
    let path = std::env::temp_dir().join("smatpi_kernels.txt");
    file.save(&path)?;
    let loaded = KernelFile::load(&path)?;
    println!("wrote {}; identical after reload: {}", path.display(), loaded == file);

    let a = propagate(&file.set, 30, None)?;
    let b = propagate(&loaded.set, 30, None)?;
    println!("|U_30(saved) - U_30(loaded)| = {:e}", liou_norm(&(a.at(30) - b.at(30))));
    Ok(())
}
