// Copyright 2026 The smatpi Authors
// SPDX-License-Identifier: Apache-2.0

//! Structural properties of the extracted hierarchies on the default set.

use smatpi::kernels::{
    extract_smatpi, extract_ttm, gqme_kernel, oracle_trajectory, propagate, AuxZeroConvention, KernelSet,
};
use smatpi::pathsum::{aux_rdm_exact, PathSumRequest, Target, DEFAULT_BUDGET};
use smatpi::{eta_table, liou_norm, BathSpec, Beta, EtaTable, LiouvilleMatrix, Splitting, SystemSpec, TimeGrid};

fn sys() -> SystemSpec {
    SystemSpec::spin_boson(1.0, 0.0)
}

fn table(alpha: f64, splitting: Splitting, steps: usize) -> EtaTable {
    let bath = BathSpec::ohmic(alpha, 5.0, Beta::Finite(5.0)).unwrap();
    eta_table(&bath, &TimeGrid::new(0.1, steps, steps).unwrap(), splitting).unwrap()
}

fn smatpi(t: &EtaTable, r: usize, convention: AuxZeroConvention) -> KernelSet {
    extract_smatpi(&sys(), t, r, convention, DEFAULT_BUDGET).unwrap()
}

fn dist(a: &LiouvilleMatrix, b: &LiouvilleMatrix) -> f64 {
    liou_norm(&(a - b))
}

#[test]
fn endpoint_matrices_are_distinct() {
    let t = table(0.1, Splitting::SymEnv, 6);
    let set = smatpi(&t, 6, AuxZeroConvention::default());
    let u1 = oracle_trajectory(&sys(), &t, 1, DEFAULT_BUDGET).unwrap().at(1).clone();
    let (m1, t1) = (&set.midpoint[0], &set.termination.as_ref().unwrap()[0]);
    assert!(dist(m1, t1) > 1e-10, "M_1 vs T_1 {:e}", dist(m1, t1));
    assert!(dist(t1, &u1) > 1e-10, "T_1 vs U_1 {:e}", dist(t1, &u1));
    assert!(dist(m1, &u1) > 1e-10, "M_1 vs U_1 {:e}", dist(m1, &u1));
}

#[test]
fn interior_auxiliary_differs_from_full_map() {
    let t = table(0.1, Splitting::SymEnv, 6);
    let req = |target| PathSumRequest::with_table(&sys(), t.clone(), target, 2);
    let aux = aux_rdm_exact(&req(Target::AuxU)).unwrap();
    let full = aux_rdm_exact(&req(Target::FullU)).unwrap();
    assert!(dist(&aux, &full) > 1e-6);
}

#[test]
fn spurious_memory_at_weaker_coupling() {
    let t = table(0.05, Splitting::SymEnv, 6).truncated(1);
    let traj = oracle_trajectory(&sys(), &t, 6, DEFAULT_BUDGET).unwrap();
    assert!(liou_norm(&extract_ttm(&traj.maps).unwrap()[1]) > 1e-6);
    let set = smatpi(&t, 6, AuxZeroConvention::default());
    for k in 2..=6 {
        assert!(liou_norm(&set.midpoint[k - 1]) < 1e-12);
    }
}

#[test]
fn standalone_convention_keeps_one_step_memory_alive() {
    // Recorded contrast: only the terminal-times-I0 convention gives nullity.
    let t = table(0.1, Splitting::SymEnv, 6).truncated(1);
    let set = smatpi(&t, 6, AuxZeroConvention::Standalone);
    assert!(liou_norm(&set.midpoint[1]) > 1e-6);
}

#[test]
fn gqme_profile_is_shifted_transfer_tensor_profile() {
    let t = table(0.1, Splitting::SymEnv, 6);
    let ttm = extract_ttm(&oracle_trajectory(&sys(), &t, 6, DEFAULT_BUDGET).unwrap().maps).unwrap();
    let k = gqme_kernel(&ttm, 0.1).unwrap();
    assert_eq!(k.len(), 5);
    for (i, kk) in k.iter().enumerate() {
        let want = liou_norm(&ttm[i + 1]) / (0.1 * 0.1);
        assert!((liou_norm(kk) - want).abs() <= 1e-14 * want);
    }
}

#[test]
fn both_conventions_reproduce_the_oracle_for_every_splitting() {
    for sp in Splitting::ALL {
        let t = table(0.1, sp, 6);
        let oracle = oracle_trajectory(&sys(), &t, 6, DEFAULT_BUDGET).unwrap();
        for conv in [AuxZeroConvention::Standalone, AuxZeroConvention::TerminalTimesI0] {
            let out = propagate(&smatpi(&t, 6, conv), 6, None).unwrap();
            for k in 1..=6 {
                assert!(dist(out.at(k), oracle.at(k)) < 1e-12, "{sp} {conv} k={k}");
            }
        }
    }
}
