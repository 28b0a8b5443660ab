// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Catalan numbers, Dyck paths and the term census of the expanded
//! transfer-tensor hierarchy.
//!
//!     cargo run --example dyck_census

use smatpi::combinatorics::{catalan, census, enumerate_dyck, expand_hierarchy, DEFAULT_EXPANSION_BUDGET};

fn main() -> smatpi::Result<()> {
    for m in 0..=8 {
        let paths = enumerate_dyck(m)?;
        println!("m = {m}: C_m = {}, enumerated {}", catalan(m)?, paths.len());
    }
    for p in enumerate_dyck(3)? {
        println!("  {p}  peaks {} height {}", p.peaks(), p.height());
    }
    for k in 1..=6 {
        let terms = expand_hierarchy(k, DEFAULT_EXPANSION_BUDGET)?;
        let c = census(&terms);
        println!("T_{k}: {} terms (+{} / -{}), by part count {:?}", c.terms, c.positive, c.negative, c.by_parts);
    }
    let four: Vec<String> = expand_hierarchy(4, DEFAULT_EXPANSION_BUDGET)?.iter().map(ToString::to_string).collect();
    println!("T_4 = {}", four.join(" "));
    Ok(())
}
