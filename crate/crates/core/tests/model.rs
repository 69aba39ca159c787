use std::f64::consts::PI;

use proptest::prelude::*;
use rmpump::model::{
    build_fock_basis, build_many_body_hamiltonian, build_single_particle_hamiltonian, instantaneous_params,
    DrivenHamiltonian,
};
use rmpump::{Boundary, DriveProtocol, FockBasis, LatticeSpec};

const MHZ: f64 = 2.0 * PI;

fn fig1_drive() -> DriveProtocol {
    DriveProtocol::bulk(8.0 * MHZ, 8.0 * MHZ, 80.0 * MHZ, 0.4)
}

#[test]
fn basis_dimensions() {
    let spec = LatticeSpec::new(6, 3, -190.0 * MHZ).unwrap();
    assert_eq!(build_fock_basis(&spec, 1).unwrap().dim(), 6);
    assert_eq!(build_fock_basis(&spec, 2).unwrap().dim(), 21);
    let hard = LatticeSpec::new(6, 2, 0.0).unwrap();
    assert_eq!(build_fock_basis(&hard, 2).unwrap().dim(), 15);
    let all = FockBasis::with_sectors_up_to(&spec, 2).unwrap();
    assert_eq!(all.dim(), 1 + 6 + 21);
    assert!(build_fock_basis(&hard, 7).is_err());
}

#[test]
fn single_particle_sector_matches_matrix_form() {
    let spec = LatticeSpec::new(9, 3, -190.0 * MHZ).unwrap().with_origin(18).unwrap();
    let basis = build_fock_basis(&spec, 1).unwrap();
    let drive = fig1_drive();
    for &t in &[0.0, 0.07, 0.21, 0.33] {
        let p = instantaneous_params(&drive, t, spec.n_sites());
        let (cd, sd) = drive.uniform_at(t);
        let mb = build_many_body_hamiltonian(&spec, &basis, &p.capdelta, p.smalldelta, drive.j_hop).unwrap();
        let sp = build_single_particle_hamiltonian(&spec, cd, sd, drive.j_hop);
        let a = mb.eigenvalues().unwrap();
        let b = sp.eigenvalues().unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-9);
        }
    }
}

#[test]
fn periodic_ring_adds_closing_bond() {
    let spec = LatticeSpec::new(4, 2, 0.0).unwrap().with_boundary(Boundary::Periodic).unwrap();
    assert_eq!(spec.bonds().len(), 4);
    let h = build_single_particle_hamiltonian(&spec, 0.0, 0.0, 1.0);
    assert_eq!(h.get(0, 3).re, -1.0);
}

#[test]
fn drives_are_periodic_and_static_is_frozen() {
    let d = fig1_drive();
    for &t in &[0.0, 0.013, 0.2, 0.39] {
        let (a, b) = d.uniform_at(t);
        let (c, e) = d.uniform_at(t + 3.0 * d.period);
        assert!((a - c).abs() < 1e-9 && (b - e).abs() < 1e-9);
    }
    let (cd, sd) = d.uniform_at(0.0);
    assert!((cd - 80.0 * MHZ).abs() < 1e-12 && sd.abs() < 1e-12);
    let (cd, sd) = d.uniform_at(0.1);
    assert!(cd.abs() < 1e-9 && (sd - 8.0 * MHZ).abs() < 1e-9);

    let e = DriveProtocol::edge(12.0 * MHZ, 12.0 * MHZ, 0.5 * MHZ, 4.0);
    let (cd, sd) = e.uniform_at(0.0);
    assert!(cd.abs() < 1e-12 && (sd + 12.0 * MHZ).abs() < 1e-12);
}

#[test]
fn disorder_is_reproducible_and_prefix_stable() {
    let mut d = fig1_drive();
    d.disorder_w = 1.0;
    d.disorder_seed = 42;
    let a = d.disorder(10);
    let b = d.disorder(20);
    assert_eq!(a[..], b[..10]);
    assert!(a.iter().all(|x| (-0.5..0.5).contains(x)));
    d.disorder_seed = 43;
    assert_ne!(d.disorder(10), a);
}

#[test]
fn subset_parity_follows_original_index() {
    let full = LatticeSpec::new(36, 2, 0.0).unwrap();
    let sub = LatticeSpec::new(9, 2, 0.0).unwrap().with_origin(18).unwrap();
    for i in 0..9 {
        assert_eq!(sub.parity(i), full.parity(17 + i));
        assert_eq!(sub.original_index(i), 18 + i);
    }
}

#[test]
fn invalid_inputs_are_rejected() {
    assert!(LatticeSpec::new(0, 3, 0.0).is_err());
    assert!(LatticeSpec::new(4, 1, 0.0).is_err());
    assert!(LatticeSpec::new(4, 3, f64::NAN).is_err());
    let mut d = fig1_drive();
    d.period = 0.0;
    assert!(d.validate().is_err());
    let mut d = fig1_drive();
    d.j_hop = -1.0;
    assert!(d.validate().is_err());
}

#[test]
fn generic_over_f32() {
    let spec = rmpump::model::LatticeSpec::<f32>::new(6, 3, -10.0).unwrap();
    let basis = build_fock_basis(&spec, 2).unwrap();
    let drive = rmpump::model::DriveProtocol::<f32>::bulk(1.0, 1.0, 2.0, 1.0);
    let h = DrivenHamiltonian::new(&spec, &basis, &drive).unwrap().at(0.1);
    assert!(h.hermiticity_error() < 1e-6);
    let spec64 = LatticeSpec::new(6, 3, -10.0).unwrap();
    let h64 = DrivenHamiltonian::new(&spec64, &basis, &DriveProtocol::bulk(1.0, 1.0, 2.0, 1.0)).unwrap().at(0.1);
    let a = h.eigenvalues().unwrap();
    let b = h64.eigenvalues().unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert!((*x as f64 - y).abs() < 1e-4);
    }
}

fn arb_params() -> impl Strategy<Value = (usize, usize, f64, f64, f64, f64, f64, usize)> {
    (2usize..7, 1usize..3, -5.0..5.0f64, 0.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, 0.0..1.0f64, 1usize..30)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hamiltonian_is_hermitian((n, np, u, j, cd, sd, t, origin) in arb_params()) {
        let spec = LatticeSpec::new(n, 3, u).unwrap().with_origin(origin).unwrap();
        let basis = build_fock_basis(&spec, np).unwrap();
        let drive = DriveProtocol::bulk(j, sd, cd, 1.0);
        let h = DrivenHamiltonian::new(&spec, &basis, &drive).unwrap().at(t);
        prop_assert!(h.hermiticity_error() < 1e-14);
    }

    #[test]
    fn particle_number_sectors_decouple((n, _np, u, j, cd, sd, t, origin) in arb_params()) {
        let spec = LatticeSpec::new(n, 3, u).unwrap().with_origin(origin).unwrap();
        let basis = FockBasis::with_sectors_up_to(&spec, 2).unwrap();
        let drive = DriveProtocol::bulk(j, sd, cd, 1.0);
        let h = DrivenHamiltonian::new(&spec, &basis, &drive).unwrap().at(t);
        for (r, c, v) in h.csr().triplet_iter() {
            if v.norm() > 0.0 {
                prop_assert_eq!(basis.particle_number(r), basis.particle_number(c));
            }
        }
    }

    #[test]
    fn one_particle_ignores_interaction((n, _np, u, j, cd, sd, t, origin) in arb_params()) {
        let drive = DriveProtocol::bulk(j, sd, cd, 1.0);
        let a = LatticeSpec::new(n, 3, u).unwrap().with_origin(origin).unwrap();
        let b = LatticeSpec::new(n, 3, 0.0).unwrap().with_origin(origin).unwrap();
        let ha = DrivenHamiltonian::new(&a, &build_fock_basis(&a, 1).unwrap(), &drive).unwrap().at(t);
        let hb = DrivenHamiltonian::new(&b, &build_fock_basis(&b, 1).unwrap(), &drive).unwrap().at(t);
        prop_assert!((ha.to_dense() - hb.to_dense()).norm() < 1e-14);
    }

    #[test]
    fn drive_period_is_exact(t in 0.0..1.0f64, cycles in 1u32..5, phi in -3.0..3.0f64) {
        let mut d = DriveProtocol::bulk(1.0, 0.7, 2.0, 0.4);
        d.phase0 = phi;
        let (a, b) = d.uniform_at(t);
        let (c, e) = d.uniform_at(t + cycles as f64 * d.period);
        prop_assert!((a - c).abs() < 1e-9 && (b - e).abs() < 1e-9);
    }
}
