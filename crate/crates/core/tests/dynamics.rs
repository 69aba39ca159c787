use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use proptest::prelude::*;
use rmpump::dynamics::{
    evolve_lindblad, evolve_unitary, measure_correlations, measure_populations, neighbour_pair_population,
    off_diagonal_fraction, prepare_site_excitation, EvolveOptions,
};
use rmpump::model::{build_fock_basis, DrivenHamiltonian};
use rmpump::{DensityMatrix, DriveProtocol, FockBasis, HamiltonianMatrix, LatticeSpec, NoiseModel, QuantumState, C};

const MHZ: f64 = 2.0 * PI;

fn chain(n: usize, ld: usize, u: f64, np: usize) -> (LatticeSpec, Arc<FockBasis>) {
    let spec = LatticeSpec::new(n, ld, u).unwrap();
    let basis = Arc::new(build_fock_basis(&spec, np).unwrap());
    (spec, basis)
}

fn fig1_drive() -> DriveProtocol {
    DriveProtocol::bulk(8.0 * MHZ, 8.0 * MHZ, 80.0 * MHZ, 0.4)
}

#[test]
fn single_particle_pumps_about_one_cell() {
    let (spec, basis) = chain(36, 2, 0.0, 1);
    let d = fig1_drive();
    let h = DrivenHamiltonian::new(&spec, &basis, &d).unwrap();
    for (site, sign) in [(19, 1.0), (18, -1.0)] {
        let psi = prepare_site_excitation(&basis, site, 1).unwrap();
        let r = evolve_unitary(|t| h.at(t), &psi, d.period, &EvolveOptions::default()).unwrap();
        assert_eq!(r.trace.frames(), 101);
        let dx = r.trace.final_delta_x();
        assert!((dx - sign * 0.9476).abs() < 1e-3, "site {site}: {dx}");
        assert!(r.trace.norm_drift() < 1e-8);
        assert!(r.diagnostics.max_phase_used <= 0.1 + 1e-12);
    }
}

#[test]
fn stationary_eigenstate_has_unit_echo() {
    let (spec, basis) = chain(6, 3, -5.0, 2);
    let mut d = DriveProtocol::bulk(1.0, 0.5, 2.0, 1.0);
    d.kind = rmpump::DriveKind::Static;
    let h = DrivenHamiltonian::new(&spec, &basis, &d).unwrap();
    let (_, vecs) = h.at(0.0).eigh().unwrap();
    let psi = QuantumState::new(basis.clone(), vecs.column(0).into_owned()).unwrap();
    let r = evolve_unitary(|t| h.at(t), &psi, 3.0, &EvolveOptions::default()).unwrap();
    assert!(r.trace.loschmidt.iter().all(|&l| (l - 1.0).abs() < 1e-10));
}

#[test]
fn time_reversal_recovers_initial_state() {
    let spec = LatticeSpec::new(6, 3, -190.0 * MHZ).unwrap().with_origin(19).unwrap();
    let basis = Arc::new(build_fock_basis(&spec, 2).unwrap());
    let d = DriveProtocol::bulk(12.0 * MHZ, 12.0 * MHZ, -8.0 * MHZ, 0.4);
    let h = DrivenHamiltonian::new(&spec, &basis, &d).unwrap();
    let psi = prepare_site_excitation(&basis, 2, 2).unwrap();
    let opts = EvolveOptions::default();
    let fwd = evolve_unitary(|t| h.at(t), &psi, d.period, &opts).unwrap();
    let back = evolve_unitary(|s| h.at(d.period - s).scaled(-1.0), &fwd.final_state, d.period, &opts).unwrap();
    assert!(back.final_state.fidelity(&psi) > 1.0 - 1e-6);
}

#[test]
fn midpoint_stepper_is_second_order() {
    let (spec, basis) = chain(36, 2, 0.0, 1);
    let d = fig1_drive();
    let h = DrivenHamiltonian::new(&spec, &basis, &d).unwrap();
    let psi = prepare_site_excitation(&basis, 19, 1).unwrap();
    let run = |m: usize| {
        let opts = EvolveOptions { steps_per_frame: Some(m), record_correlations: false, ..Default::default() };
        evolve_unitary(|t| h.at(t), &psi, d.period, &opts).unwrap().final_state
    };
    let coarse = run(8);
    let half = run(16);
    let reference = run(32);
    let err = |s: &QuantumState| (s.amplitudes() - reference.amplitudes()).norm();
    let ratio = err(&coarse) / err(&half);
    assert!(ratio >= 4.0, "ratio {ratio}");
}

#[test]
fn two_particle_observables() {
    let spec = LatticeSpec::new(9, 3, -190.0 * MHZ).unwrap().with_origin(18).unwrap();
    let basis = Arc::new(build_fock_basis(&spec, 2).unwrap());
    let d = DriveProtocol::bulk(12.0 * MHZ, 12.0 * MHZ, -8.0 * MHZ, 0.4);
    let h = DrivenHamiltonian::new(&spec, &basis, &d).unwrap();
    let psi = prepare_site_excitation(&basis, 2, 2).unwrap();
    let r = evolve_unitary(|t| h.at(t), &psi, d.period, &EvolveOptions::default()).unwrap();
    for (g, pops) in r.trace.correlations.iter().zip(&r.trace.populations) {
        assert!((g.sum() - 2.0).abs() < 1e-8);
        assert!((g - g.transpose()).norm() < 1e-12);
        assert!(g.iter().all(|&x| x >= -1e-10));
        for p in pops {
            assert!((p[0] + p[1] + p[2] - 1.0).abs() < 1e-8);
        }
    }
    let off = r.trace.correlations.iter().map(off_diagonal_fraction).fold(0.0, f64::max);
    assert!(off < 0.1);
    assert!(r.trace.max_single_occupancy() < 0.05);
    let dx = r.trace.final_delta_x();
    assert!((0.85..=1.0).contains(&dx), "{dx}");
}

#[test]
fn observables_of_fock_states() {
    let (_, basis) = chain(4, 3, 0.0, 2);
    let psi = QuantumState::from_occupation(basis.clone(), &[0, 2, 0, 0]).unwrap();
    let p = measure_populations(&psi);
    assert_eq!(p[1], [0.0, 0.0, 1.0]);
    assert_eq!(p[0], [1.0, 0.0, 0.0]);
    let g = measure_correlations(&psi);
    assert_eq!(g[(1, 1)], 2.0);
    assert_eq!(g.sum(), 2.0);
    let pair = QuantumState::from_occupation(basis.clone(), &[0, 1, 1, 0]).unwrap();
    assert_eq!(neighbour_pair_population(&pair), 1.0);
    assert_eq!(neighbour_pair_population(&psi), 0.0);
}

#[test]
fn invalid_excitations_are_rejected() {
    let (_, basis) = chain(4, 3, 0.0, 2);
    assert!(prepare_site_excitation::<f64>(&basis, 0, 2).is_err());
    assert!(prepare_site_excitation::<f64>(&basis, 5, 2).is_err());
    assert!(prepare_site_excitation::<f64>(&basis, 1, 1).is_err());
}

#[test]
fn relaxation_matches_analytic_decay() {
    let spec = LatticeSpec::new(2, 2, 0.0).unwrap();
    let basis = Arc::new(FockBasis::with_sectors_up_to(&spec, 1).unwrap());
    let psi = QuantumState::from_occupation(basis.clone(), &[1, 0]).unwrap();
    let rho = DensityMatrix::from_state(&psi, basis.clone()).unwrap();
    let zero = HamiltonianMatrix::from_dense(&DMatrix::zeros(basis.dim(), basis.dim()));
    let noise = NoiseModel { dephasing: false, ..NoiseModel::default() };
    let r = evolve_lindblad(|_| zero.clone(), &rho, &noise, 10.0, &EvolveOptions::default()).unwrap();
    for (t, pops) in r.trace.times.iter().zip(&r.trace.populations) {
        assert!((pops[0][1] - (-t / 25.0).exp()).abs() < 1e-4);
    }
    assert!(r.trace.norm_drift() < 1e-6);
}

#[test]
fn dephasing_rate_of_a_two_level_site() {
    let spec = LatticeSpec::new(2, 2, 0.0).unwrap();
    let basis = Arc::new(FockBasis::with_sectors_up_to(&spec, 1).unwrap());
    let amp = C::new(0.5f64.sqrt(), 0.0);
    let psi = QuantumState::superposition(basis.clone(), &[(&[1, 0], amp), (&[0, 1], amp)]).unwrap();
    let rho = DensityMatrix::from_state(&psi, basis.clone()).unwrap();
    let zero = HamiltonianMatrix::from_dense(&DMatrix::zeros(basis.dim(), basis.dim()));
    let noise = NoiseModel { relaxation: false, ..NoiseModel::default() };
    let r = evolve_lindblad(|_| zero.clone(), &rho, &noise, 2.0, &EvolveOptions::default()).unwrap();
    let a = basis.index_of(&[1, 0]).unwrap();
    let b = basis.index_of(&[0, 1]).unwrap();
    // each site contributes 1/Tφ to the decay of |10⟩⟨01|
    let coh = r.final_state.matrix()[(a, b)].norm();
    assert!((coh - 0.5 * (-2.0f64 * 2.0).exp()).abs() < 1e-6, "{coh}");
}

#[test]
fn noiseless_lindblad_matches_unitary() {
    let spec = LatticeSpec::new(6, 3, -190.0 * MHZ).unwrap().with_origin(19).unwrap();
    let sector = Arc::new(build_fock_basis(&spec, 2).unwrap());
    let full = Arc::new(FockBasis::with_sectors_up_to(&spec, 2).unwrap());
    let d = DriveProtocol::bulk(12.0 * MHZ, 12.0 * MHZ, -8.0 * MHZ, 0.4);
    let hs = DrivenHamiltonian::new(&spec, &sector, &d).unwrap();
    let hf = DrivenHamiltonian::new(&spec, &full, &d).unwrap();
    let psi = prepare_site_excitation(&sector, 2, 2).unwrap();
    let rho = DensityMatrix::from_state(&psi, full.clone()).unwrap();
    let opts = EvolveOptions::default();
    let u = evolve_unitary(|t| hs.at(t), &psi, d.period, &opts).unwrap();
    let l = evolve_lindblad(|t| hf.at(t), &rho, &NoiseModel::disabled(), d.period, &opts).unwrap();
    for (a, b) in u.trace.populations.iter().zip(&l.trace.populations) {
        for (x, y) in a.iter().zip(b) {
            for k in 0..3 {
                assert!((x[k] - y[k]).abs() < 1e-6);
            }
        }
    }
}

#[test]
fn noisy_two_particle_run_keeps_trace_and_positivity() {
    let spec = LatticeSpec::new(6, 3, -190.0 * MHZ).unwrap().with_origin(19).unwrap();
    let full = Arc::new(FockBasis::with_sectors_up_to(&spec, 2).unwrap());
    let d = DriveProtocol::bulk(12.0 * MHZ, 12.0 * MHZ, -8.0 * MHZ, 0.4);
    let h = DrivenHamiltonian::new(&spec, &full, &d).unwrap();
    let mut occ = vec![0u8; 6];
    occ[1] = 2;
    let psi = QuantumState::from_occupation(full.clone(), &occ).unwrap();
    let rho = DensityMatrix::from_state(&psi, full.clone()).unwrap();
    let r = evolve_lindblad(|t| h.at(t), &rho, &NoiseModel::default(), 2.0 * d.period, &EvolveOptions::default())
        .unwrap();
    assert!(r.trace.norm_drift() < 1e-6);
    assert!(r.diagnostics.positivity_warnings.is_empty());
    for pops in &r.trace.populations {
        for p in pops {
            assert!((p[0] + p[1] + p[2] - 1.0).abs() < 1e-6);
        }
    }
    // relaxation leaks weight into the one-particle sector
    let one: f64 = (0..full.dim()).filter(|&i| full.particle_number(i) == 1).map(|i| r.final_state.matrix()[(i, i)].re).sum();
    assert!(one > 0.0);
}

#[test]
fn mismatched_hamiltonian_is_an_error() {
    let (_, basis) = chain(4, 2, 0.0, 1);
    let psi = prepare_site_excitation(&basis, 1, 1).unwrap();
    let wrong = HamiltonianMatrix::from_dense(&DMatrix::zeros(3, 3));
    assert!(evolve_unitary(|_| wrong.clone(), &psi, 1.0, &EvolveOptions::default()).is_err());
}

#[test]
fn generic_over_f32() {
    let spec32 = rmpump::model::LatticeSpec::<f32>::new(12, 2, 0.0).unwrap();
    let basis = Arc::new(build_fock_basis(&spec32, 1).unwrap());
    let d32 = rmpump::model::DriveProtocol::<f32>::bulk(8.0 * MHZ as f32, 8.0 * MHZ as f32, 80.0 * MHZ as f32, 0.4);
    let h32 = DrivenHamiltonian::new(&spec32, &basis, &d32).unwrap();
    let psi32 = prepare_site_excitation::<f32>(&basis, 7, 1).unwrap();
    let r32 = evolve_unitary(|t| h32.at(t), &psi32, 0.4, &EvolveOptions::default()).unwrap();

    let spec = LatticeSpec::new(12, 2, 0.0).unwrap();
    let h = DrivenHamiltonian::new(&spec, &basis, &fig1_drive()).unwrap();
    let psi = prepare_site_excitation(&basis, 7, 1).unwrap();
    let r = evolve_unitary(|t| h.at(t), &psi, 0.4, &EvolveOptions::default()).unwrap();

    assert!((r32.trace.final_delta_x() as f64 - r.trace.final_delta_x()).abs() < 1e-3);
    assert!(r32.trace.norm_drift() < 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn unitary_run_preserves_norm_and_number(j in 0.5..3.0f64, dd in 0.2..2.0f64, cd in -4.0..4.0f64, u in -6.0..0.0f64, site in 1usize..6) {
        let spec = LatticeSpec::new(6, 3, u).unwrap();
        let basis = Arc::new(build_fock_basis(&spec, 2).unwrap());
        let d = DriveProtocol::bulk(j, dd, cd, 2.0);
        let h = DrivenHamiltonian::new(&spec, &basis, &d).unwrap();
        let psi = prepare_site_excitation(&basis, site, 2).unwrap();
        let opts = EvolveOptions { frames: 11, ..Default::default() };
        let r = evolve_unitary(|t| h.at(t), &psi, 2.0, &opts).unwrap();
        prop_assert!(r.trace.norm_drift() < 1e-8);
        for (g, pops) in r.trace.correlations.iter().zip(&r.trace.populations) {
            prop_assert!((g.sum() - 2.0).abs() < 1e-8);
            let n: f64 = pops.iter().map(|p| p[1] + 2.0 * p[2]).sum();
            prop_assert!((n - 2.0).abs() < 1e-10);
        }
    }
}
