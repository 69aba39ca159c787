use std::f64::consts::PI;

use proptest::prelude::*;
use rmpump::bands::{
    bloch_hamiltonian_single, com_band_structure, effective_subspace_hamiltonian, rice_mele_bands, EigenGrid,
};
use rmpump::model::{build_fock_basis, build_many_body_hamiltonian, instantaneous_params};
use rmpump::{BandLabel, BlochGrid, DriveProtocol, Error, LatticeSpec};

const MHZ: f64 = 2.0 * PI;

fn fig1e() -> DriveProtocol {
    DriveProtocol::bulk(8.0 * MHZ, 8.0 * MHZ, 80.0 * MHZ, 0.4)
}

#[test]
fn fig1e_chern_numbers_and_gap() {
    let r = rice_mele_bands(&fig1e(), BlochGrid::square(64).unwrap()).unwrap();
    assert_eq!(r.chern, vec![1, -1]);
    // smallest direct gap 2·2δ₀ = 32 MHz, at Δ = 0 and k = π
    assert!((r.gap_min / MHZ - 32.0).abs() < 0.5, "gap {}", r.gap_min / MHZ);
    let fine = rice_mele_bands(&fig1e(), BlochGrid::square(128).unwrap()).unwrap();
    assert_eq!(fine.chern, vec![1, -1]);
    let total: f64 = r.curvature[0].iter().sum::<f64>() / (2.0 * PI);
    assert!((total - 1.0).abs() < 1e-9);
}

#[test]
fn reversing_the_stagger_reverses_chern() {
    let mut d = fig1e();
    d.capdelta0 = -d.capdelta0;
    let r = rice_mele_bands(&d, BlochGrid::square(32).unwrap()).unwrap();
    assert_eq!(r.chern, vec![-1, 1]);
}

#[test]
fn chern_is_gauge_invariant() {
    let d = fig1e();
    let grid = BlochGrid::square(32).unwrap();
    let eg = EigenGrid::compute(grid, |i, j| bloch_hamiltonian_single(grid.k(i, 1.0), grid.t(j, d.period), &d))
        .unwrap();
    let base = eg.curvature(0..1);
    for seed in 0..20 {
        let g = eg.with_random_gauge(seed);
        assert_eq!(g.chern(0..1), 1);
        assert_eq!(g.chern(1..2), -1);
        let c = g.curvature(0..1);
        let dev = base.iter().zip(&c).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        assert!(dev < 1e-10, "seed {seed}: {dev}");
    }
}

#[test]
fn gapless_cycle_is_reported() {
    let mut d = fig1e();
    d.delta0 = 0.0;
    match rice_mele_bands(&d, BlochGrid::square(16).unwrap()) {
        Err(Error::GapClosure { .. }) => {}
        other => panic!("expected GapClosure, got {other:?}"),
    }
}

#[test]
fn grid_too_small_is_rejected() {
    assert!(BlochGrid::new(4, 64).is_err());
}

#[test]
fn bound_state_com_bands() {
    let spec = LatticeSpec::new(12, 3, -190.0 * MHZ).unwrap();
    let drive = DriveProtocol::bulk(12.0 * MHZ, 12.0 * MHZ, -8.0 * MHZ, 0.4);
    let r = com_band_structure(&spec, &drive, 2, 6, BlochGrid::square(64).unwrap()).unwrap();
    let mut bound: Vec<f64> = r.labelled(BandLabel::BoundState).map(|b| b.com_chern).collect();
    bound.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(bound, vec![-1.0, 1.0]);
    let total: i64 = r.bands.iter().map(|b| b.ring_chern).sum();
    assert_eq!(total, 0);
}

#[test]
fn resonant_isolated_com_band() {
    let spec = LatticeSpec::new(12, 3, -190.0 * MHZ).unwrap();
    let drive = DriveProtocol::bulk(12.0 * MHZ, 12.0 * MHZ, -150.0 * MHZ, 0.4);
    let r = com_band_structure(&spec, &drive, 2, 6, BlochGrid::square(64).unwrap()).unwrap();
    let res: Vec<_> = r.labelled(BandLabel::ResonantIsolated).collect();
    assert_eq!(res.len(), 1);
    assert_eq!(res[0].com_chern, 1.0);
    // near zero on the scale of the interaction (doublons alone sit near U)
    assert!(res[0].mean_energy.abs() < 0.5 * 190.0 * MHZ);
}

#[test]
fn effective_model_tracks_full_spectrum() {
    let spec = LatticeSpec::new(6, 3, -190.0 * MHZ).unwrap().with_origin(19).unwrap();
    let basis = build_fock_basis(&spec, 2).unwrap();
    let drive = DriveProtocol::edge(12.0 * MHZ, 12.0 * MHZ, -0.5 * MHZ, 4.0);
    let mut worst = 0.0f64;
    for s in 0..50 {
        let t = drive.period * s as f64 / 50.0;
        let p = instantaneous_params(&drive, t, 6);
        let full = build_many_body_hamiltonian(&spec, &basis, &p.capdelta, p.smalldelta, drive.j_hop)
            .unwrap()
            .eigenvalues()
            .unwrap();
        let eff = effective_subspace_hamiltonian(&spec, p.capdelta[0], p.smalldelta, drive.j_hop)
            .unwrap()
            .eigenvalues()
            .unwrap();
        for (a, b) in full.iter().zip(&eff).take(6) {
            worst = worst.max((a - b).abs());
        }
    }
    assert!(worst < 0.5 * MHZ, "worst {} MHz", worst / MHZ);
}

#[test]
fn interaction_breaks_spectral_symmetry() {
    let drive = DriveProtocol::bulk(12.0 * MHZ, 12.0 * MHZ, -8.0 * MHZ, 0.4);
    let asym = |u: f64| {
        let spec = LatticeSpec::new(6, 3, u).unwrap().with_origin(19).unwrap();
        let basis = build_fock_basis(&spec, 2).unwrap();
        let p = instantaneous_params(&drive, 0.05, 6);
        let e = build_many_body_hamiltonian(&spec, &basis, &p.capdelta, p.smalldelta, drive.j_hop)
            .unwrap()
            .eigenvalues()
            .unwrap();
        let c = (e[0] + e[e.len() - 1]) / 2.0;
        e.iter().zip(e.iter().rev()).fold(0.0f64, |m, (a, b)| m.max((a - c + b - c).abs()))
    };
    assert!(asym(0.0) < 1e-9);
    assert!(asym(-190.0 * MHZ) > 10.0 * MHZ);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn two_band_spectrum_is_symmetric(k in -3.1..3.1f64, t in 0.0..1.0f64, j in 0.1..3.0f64, dd in 0.1..3.0f64, cd in -5.0..5.0f64) {
        let d = DriveProtocol::bulk(j, dd, cd, 1.0);
        let e = rmpump::linalg::eigvalsh(bloch_hamiltonian_single(k, t, &d)).unwrap();
        prop_assert!((e[0] + e[1]).abs() < 1e-12);
    }

    #[test]
    fn chern_numbers_sum_to_zero(j in 0.3..2.0f64, dd in 0.3..2.0f64, cd in 0.3..4.0f64, sign in prop::bool::ANY) {
        let d = DriveProtocol::bulk(j, dd, if sign { cd } else { -cd }, 1.0);
        let r = rice_mele_bands(&d, BlochGrid::square(24).unwrap()).unwrap();
        prop_assert_eq!(r.chern.iter().sum::<i64>(), 0);
        prop_assert_eq!(r.chern[0].abs(), 1);
    }
}
