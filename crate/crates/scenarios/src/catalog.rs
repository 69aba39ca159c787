//! Default parameters of every named scenario (MHz, µs, original site indices).
//!
//! Two-particle scenarios use a negative `Δ₀`: with the `(−1)^j Δ` stagger this
//! puts the higher on-site energy on the even site of each bond, the
//! orientation in which the doublon on site 19 pumps forward.

use std::f64::consts::FRAC_PI_2;

use rmpump::DriveKind;

use crate::config::{
    BandSettings, DriveSettings, InitialState, IntegratorSettings, NoiseSettings, Resolved, ScenarioId, SweepAxis,
    SweepParam,
};

pub const DEFAULT_SEED: u64 = 20_240_601;

fn bulk(j: f64, delta0: f64, capdelta0: f64, period: f64) -> DriveSettings {
    DriveSettings {
        kind: DriveKind::BulkPump,
        j_mhz: j,
        delta0_mhz: delta0,
        capdelta0_mhz: capdelta0,
        period_us: period,
        phase0: 0.0,
        offset_r: 0.0,
        disorder_w: 0.0,
    }
}

fn edge(j: f64, delta0: f64, capdelta0: f64, period: f64) -> DriveSettings {
    DriveSettings { kind: DriveKind::EdgePump, ..bulk(j, delta0, capdelta0, period) }
}

/// Single-particle chain of 36 sites under the 80/8/8 MHz, 0.4 µs pump.
fn single_particle(id: ScenarioId, site: usize) -> Resolved {
    Resolved {
        scenario: id,
        first_site: 1,
        last_site: 36,
        local_dim: 2,
        interaction_mhz: 0.0,
        drive: bulk(8.0, 8.0, 80.0, 0.4),
        noise: NoiseSettings { enabled: false, t1_us: 25.0, tphi_us: 1.0 },
        initial: InitialState::single(site, 1),
        cycles: 1.0,
        frames: 101,
        seed: DEFAULT_SEED,
        realizations: 1,
        echo_cycles: vec![1.0],
        sweep: Vec::new(),
        bands: BandSettings { grid: 64, ring_cells: 6 },
        integrator: IntegratorSettings {
            method: "exponential midpoint, Taylor action; Strang splitting for the dissipator".into(),
            max_phase: 0.1,
            steps_per_frame: None,
        },
    }
}

/// Doublon `|2_19⟩` on sites 18–26 with `U/2π = −190 MHz`.
fn pair(id: ScenarioId, capdelta0: f64) -> Resolved {
    Resolved {
        first_site: 18,
        last_site: 26,
        local_dim: 3,
        interaction_mhz: -190.0,
        drive: bulk(12.0, 12.0, capdelta0, 0.4),
        initial: InitialState::single(19, 2),
        ..single_particle(id, 19)
    }
}

/// Sites 19–24 under the edge protocol.
fn edge_pair(id: ScenarioId, j: f64, period: f64, site: usize) -> Resolved {
    Resolved {
        first_site: 19,
        last_site: 24,
        drive: edge(j, j, -0.5, period),
        initial: InitialState::single(site, 2),
        ..pair(id, -0.5)
    }
}

/// Eight cycles of the pump started at `Δ = 0` (phase `−π/2`) from site 18.
fn scan(id: ScenarioId, axis: SweepAxis) -> Resolved {
    let mut r = single_particle(id, 18);
    r.drive.phase0 = -FRAC_PI_2;
    r.cycles = 8.0;
    r.echo_cycles = vec![2.0, 4.0, 6.0, 8.0];
    r.sweep = vec![axis];
    r
}

fn grid(start: f64, step: f64, n: usize) -> Vec<f64> {
    // rounded so the values print as written, e.g. 0.3 rather than 0.30000000000000004
    (0..n).map(|i| ((start + step * i as f64) * 1e9).round() / 1e9).collect()
}

pub fn defaults(id: ScenarioId) -> Resolved {
    use ScenarioId::*;
    match id {
        Fig1Forward => single_particle(id, 19),
        Fig1Backward => single_particle(id, 18),
        Fig2Bound => pair(id, -8.0),
        Fig3Resonant => pair(id, -150.0),
        Fig4EdgeLeft => edge_pair(id, 12.0, 4.0, 19),
        Fig4EdgeRight => edge_pair(id, 12.0, 4.0, 24),
        EdgeSlow => edge_pair(id, 25.0, 40.0, 19),
        ControlNointeraction => Resolved {
            interaction_mhz: 0.0,
            initial: InitialState { sites: vec![21, 22], occupancy: vec![1, 1] },
            ..pair(id, -150.0)
        },
        SweepPeriod => {
            let mut r = single_particle(id, 19);
            r.noise.enabled = true;
            r.sweep = vec![
                SweepAxis { name: SweepParam::NoiseEnabled, values: vec![0.0, 1.0] },
                SweepAxis { name: SweepParam::PeriodUs, values: vec![0.1, 0.2, 0.4, 0.8, 1.5, 3.0] },
            ];
            r
        }
        SweepOffset => scan(id, SweepAxis { name: SweepParam::OffsetR, values: grid(0.0, 0.1, 21) }),
        SweepDisorder => {
            let mut r = scan(id, SweepAxis { name: SweepParam::DisorderW, values: grid(0.5, 0.5, 8) });
            r.realizations = 50;
            r
        }
        BandsFig1e => single_particle(id, 19),
        BandsBound => pair(id, -8.0),
        BandsResonant => pair(id, -150.0),
    }
}
