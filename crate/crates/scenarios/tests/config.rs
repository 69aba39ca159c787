use std::f64::consts::PI;
use std::path::PathBuf;

use rmpump_scenarios::sweep::cartesian;
use rmpump_scenarios::{ScenarioConfig, ScenarioError, ScenarioId, ScenarioKind, SweepParam};

fn configs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn parse(text: &str) -> Result<rmpump_scenarios::Resolved, ScenarioError> {
    ScenarioConfig::from_toml_str(text)?.resolve()
}

fn config_error(text: &str) -> String {
    match parse(text) {
        Err(e @ ScenarioError::Config(_)) | Err(e @ ScenarioError::Parse(_)) => {
            assert_eq!(e.kind(), "config");
            e.to_string()
        }
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn every_catalog_scenario_resolves() {
    for id in ScenarioId::ALL {
        let r = ScenarioConfig::new(id).resolve().unwrap_or_else(|e| panic!("{id}: {e}"));
        assert_eq!(r.scenario, id);
        assert_eq!(r.original_sites().len(), r.n_sites());
        if id.kind() == ScenarioKind::Sweep {
            assert!(!r.sweep.is_empty());
        }
    }
}

#[test]
fn shipped_configs_validate() {
    let mut n = 0;
    for entry in std::fs::read_dir(configs_dir()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            ScenarioConfig::from_path(&path).and_then(|c| c.resolve()).unwrap_or_else(|e| panic!("{path:?}: {e}"));
            n += 1;
        }
    }
    assert!(n >= ScenarioId::ALL.len());
}

#[test]
fn frequencies_are_converted_from_mhz() {
    let r = parse("scenario = \"fig1_forward\"\n[drive]\nj_mhz = 5.0\n").unwrap();
    let d = r.drive_protocol(0).unwrap();
    assert!((d.j_hop - 5.0 * 2.0 * PI).abs() < 1e-12);
    assert!((d.capdelta0 - 80.0 * 2.0 * PI).abs() < 1e-12);
    assert_eq!(d.period, 0.4);
}

#[test]
fn subsets_keep_original_indices() {
    let r = ScenarioConfig::new(ScenarioId::Fig2Bound).resolve().unwrap();
    assert_eq!(r.original_sites(), (18..=26).collect::<Vec<_>>());
    let spec = r.lattice().unwrap();
    assert_eq!(spec.origin(), 18);
    let occ = r.initial_occupation();
    assert_eq!(occ[1], 2);
    assert_eq!(occ.iter().map(|&o| o as usize).sum::<usize>(), 2);
}

#[test]
fn site_overrides_and_initial_state() {
    let r = parse("scenario = \"fig1_forward\"\n[lattice]\nsites = [1, 100]\n[initial]\nsites = [51]\noccupancy = [1]\n")
        .unwrap();
    assert_eq!(r.n_sites(), 100);
    assert_eq!(r.initial_occupation()[50], 1);
}

#[test]
fn invalid_configs_are_rejected() {
    assert!(config_error("scenario = \"fig2_bound\"\n[initial]\nsites = [40]\noccupancy = [2]\n").contains("outside"));
    assert!(config_error("scenario = \"fig2_bound\"\n[lattice]\nsites = [5, 5]\n").contains("site range"));
    assert!(config_error("scenario = \"fig1_forward\"\n[initial]\nsites = [19]\noccupancy = [2]\n").contains("local_dim"));
    assert!(config_error("scenario = \"fig1_forward\"\n[initial]\nsites = [19, 19]\noccupancy = [1, 0]\n").contains("twice"));
    assert!(config_error("scenario = \"fig1_forward\"\n[drive]\nperiod_us = 0.0\n").contains("positive"));
    assert!(config_error("scenario = \"fig1_forward\"\nframes = 1\n").contains("frames"));
    assert!(config_error("scenario = \"sweep_offset\"\n[[sweep]]\nname = \"offset_r\"\nvalues = []\n").contains("empty"));
    assert!(config_error("scenario = \"sweep_offset\"\nsweep = []\n").contains("at least one axis"));
    assert!(config_error("scenario = \"sweep_period\"\n[[sweep]]\nname = \"noise_enabled\"\nvalues = [0.5]\n")
        .contains("0 or 1"));
    config_error("scenario = \"fig1_forward\"\nbogus = 1\n");
    config_error("scenario = \"fig9\"\n");
    config_error("scenario = \"sweep_offset\"\n[[sweep]]\nname = \"offset_r\"\nvalues = [nan]\n");
}

#[test]
fn sweep_points_are_row_major() {
    let r = parse(
        "scenario = \"sweep_period\"\n[[sweep]]\nname = \"noise_enabled\"\nvalues = [0, 1]\n\
         [[sweep]]\nname = \"period_us\"\nvalues = [0.1, 0.2, 0.4]\n",
    )
    .unwrap();
    let pts = cartesian(&r);
    assert_eq!(pts.len(), 6);
    assert_eq!(pts[0], vec![(SweepParam::NoiseEnabled, 0.0), (SweepParam::PeriodUs, 0.1)]);
    assert_eq!(pts[2], vec![(SweepParam::NoiseEnabled, 0.0), (SweepParam::PeriodUs, 0.4)]);
    assert_eq!(pts[3], vec![(SweepParam::NoiseEnabled, 1.0), (SweepParam::PeriodUs, 0.1)]);
}

#[test]
fn catalog_axes_match_the_scans() {
    let off = ScenarioConfig::new(ScenarioId::SweepOffset).resolve().unwrap();
    assert_eq!(off.sweep[0].values.len(), 21);
    assert_eq!(off.sweep[0].values[3], 0.3);
    assert_eq!(off.echo_cycles, vec![2.0, 4.0, 6.0, 8.0]);
    assert!((off.drive.phase0 + PI / 2.0).abs() < 1e-15);
    let dis = ScenarioConfig::new(ScenarioId::SweepDisorder).resolve().unwrap();
    assert_eq!(dis.sweep[0].values, vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]);
    assert_eq!(dis.realizations, 50);
}
