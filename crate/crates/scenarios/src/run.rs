//! Single-scenario runs: dynamics (unitary or Lindblad, optionally averaged
//! over disorder realizations) and band-structure exports.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use rmpump::bands::{com_band_structure, rice_mele_bands};
use rmpump::dynamics::{evolve_lindblad, evolve_unitary, off_diagonal_fraction, EvolveOptions, RunDiagnostics};
use rmpump::model::build_fock_basis;
use rmpump::{
    BandLabel, BlochGrid, DensityMatrix, DriveKind, DrivenHamiltonian, FockBasis, LatticeSpec, ObservableTrace,
    QuantumState,
};

use crate::config::{Resolved, ScenarioConfig, ScenarioKind, MHZ};
use crate::error::{io_err, CoreContext, Result, ScenarioError};
use crate::heatmap::{emit_heatmap, HeatmapOptions};
use crate::manifest::RunManifest;

pub const SUMMARY_FILE: &str = "summary.json";

/// Scalar metrics and vector results of one run, written to `summary.json`.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub scenario: String,
    pub metrics: BTreeMap<String, f64>,
    pub lists: BTreeMap<String, Vec<f64>>,
}

impl Summary {
    pub fn metric(&self, key: &str) -> Option<f64> {
        self.metrics.get(key).copied()
    }

    pub fn list(&self, key: &str) -> Option<&[f64]> {
        self.lists.get(key).map(Vec::as_slice)
    }

    fn set(&mut self, key: impl Into<String>, v: f64) {
        self.metrics.insert(key.into(), v);
    }
}

#[derive(Debug, Clone)]
pub struct RunOutput {
    pub dir: PathBuf,
    pub manifest: RunManifest,
    pub summary: Summary,
}

/// Resolves `config` and runs it into `out`.
pub fn run_scenario(config: &ScenarioConfig, out: &Path) -> Result<RunOutput> {
    run_resolved(&config.resolve()?, out)
}

/// Runs one fully resolved parameter set (sweep axes are ignored).
pub fn run_resolved(params: &Resolved, out: &Path) -> Result<RunOutput> {
    std::fs::create_dir_all(out).map_err(io_err(out))?;
    let mut manifest = RunManifest::start(params);
    manifest.write(out)?;
    let mut emit = Emitter { dir: out, files: Vec::new() };
    let summary = match params.scenario.kind() {
        ScenarioKind::Bands => run_bands(params, &mut emit)?,
        ScenarioKind::Dynamics | ScenarioKind::Sweep => run_dynamics(params, &mut emit)?,
    };
    emit.json(SUMMARY_FILE, &summary)?;
    manifest.finalize(out, &emit.files)?;
    Ok(RunOutput { dir: out.to_path_buf(), manifest, summary })
}

/// Collects the relative paths of everything written into a run directory.
pub(crate) struct Emitter<'a> {
    pub dir: &'a Path,
    pub files: Vec<PathBuf>,
}

impl Emitter<'_> {
    pub fn csv<I>(&mut self, name: &str, header: &[&str], rows: I) -> Result<()>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let path = self.dir.join(name);
        let err = |source| ScenarioError::Csv { path: path.clone(), source };
        let mut w = csv::Writer::from_path(&path).map_err(err)?;
        w.write_record(header).map_err(err)?;
        for row in rows {
            w.write_record(&row).map_err(err)?;
        }
        w.flush().map_err(io_err(&path))?;
        self.files.push(PathBuf::from(name));
        Ok(())
    }

    pub fn heatmap(&mut self, name: &str, data: &[Vec<f64>], opts: &HeatmapOptions) -> Result<()> {
        emit_heatmap(data, &self.dir.join(format!("{name}.svg")), opts)?;
        self.files.push(PathBuf::from(format!("{name}.svg")));
        self.files.push(PathBuf::from(format!("{name}.csv")));
        Ok(())
    }

    pub fn json<S: Serialize>(&mut self, name: &str, value: &S) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, serde_json::to_string_pretty(value)? + "\n").map_err(io_err(&path))?;
        self.files.push(PathBuf::from(name));
        Ok(())
    }
}

fn s(v: f64) -> String {
    v.to_string()
}

/// Trajectory and diagnostics of one simulated realization.
pub struct Simulation {
    pub basis: Arc<FockBasis>,
    pub trace: ObservableTrace,
    pub diagnostics: RunDiagnostics<f64>,
    pub lindblad: bool,
}

/// Evolves the configured initial state for `cycles` periods; `seed` keys the disorder.
pub fn simulate(r: &Resolved, seed: u64) -> Result<Simulation> {
    let spec = r.lattice()?;
    let drive = r.drive_protocol(seed)?;
    let np = r.n_particles();
    let occ = r.initial_occupation();
    let opts = EvolveOptions {
        frames: r.frames,
        max_phase: r.integrator.max_phase,
        steps_per_frame: r.integrator.steps_per_frame,
        record_correlations: np >= 2,
        ..EvolveOptions::default()
    };
    let ctx = || format!("{} (seed {seed})", r.scenario);
    if let Some(noise) = r.noise_model() {
        let basis = Arc::new(FockBasis::with_sectors_up_to(&spec, np).context(ctx)?);
        let h = DrivenHamiltonian::new(&spec, &basis, &drive).context(ctx)?;
        let psi = QuantumState::from_occupation(basis.clone(), &occ).context(ctx)?;
        let rho = DensityMatrix::from_state(&psi, basis.clone()).context(ctx)?;
        let run = evolve_lindblad(|t| h.at(t), &rho, &noise, r.t_final(), &opts).context(ctx)?;
        Ok(Simulation { basis, trace: run.trace, diagnostics: run.diagnostics, lindblad: true })
    } else {
        let basis = Arc::new(build_fock_basis(&spec, np).context(ctx)?);
        let h = DrivenHamiltonian::new(&spec, &basis, &drive).context(ctx)?;
        let psi = QuantumState::from_occupation(basis.clone(), &occ).context(ctx)?;
        let run = evolve_unitary(|t| h.at(t), &psi, r.t_final(), &opts).context(ctx)?;
        Ok(Simulation { basis, trace: run.trace, diagnostics: run.diagnostics, lindblad: false })
    }
}

/// Frame index closest to `cycles` drive periods.
fn frame_at(r: &Resolved, cycles: f64) -> usize {
    let f = (cycles / r.cycles * (r.frames - 1) as f64).round() as usize;
    f.min(r.frames - 1)
}

/// Metric key of the Loschmidt echo after `c` periods, e.g. `loschmidt_8T`.
pub fn echo_key(c: f64) -> String {
    format!("loschmidt_{c}T")
}

pub fn dynamics_metrics(r: &Resolved, sim: &Simulation) -> Summary {
    let tr = &sim.trace;
    let np = r.n_particles();
    let mut m = Summary { scenario: r.scenario.name().into(), ..Summary::default() };
    let dx = tr.final_delta_x();
    m.set("delta_x_over_d", dx);
    m.set("delta_x_per_cycle", dx / r.cycles);
    m.set(if sim.lindblad { "trace_drift" } else { "norm_drift" }, tr.norm_drift());
    m.set("max_single_occupancy", tr.max_single_occupancy());
    m.set("max_pair_population", tr.pair_population.iter().fold(0.0, |a: f64, &b| a.max(b)));

    let period = r.drive.period_us;
    let n_cycles = r.cycles.ceil() as usize;
    let per_cycle: Vec<f64> = (0..n_cycles)
        .map(|c| {
            let (a, b) = (c as f64 * period, ((c + 1) as f64 * period).min(r.t_final()));
            tr.times
                .iter()
                .zip(&tr.pair_population)
                .filter(|(&t, _)| t >= a - 1e-12 && t <= b + 1e-12)
                .fold(0.0, |acc: f64, (_, &p)| acc.max(p))
        })
        .collect();
    m.set("min_cycle_max_pair_population", per_cycle.iter().copied().fold(f64::INFINITY, f64::min));
    m.lists.insert("cycle_max_pair_population".into(), per_cycle);

    if !tr.correlations.is_empty() {
        let off = tr.correlations.iter().map(off_diagonal_fraction).fold(0.0, f64::max);
        m.set("max_offdiag_fraction", off);
        if !sim.lindblad {
            let target = (np * (np - 1)) as f64;
            let err = tr.correlations.iter().map(|g| (g.sum() - target).abs()).fold(0.0, f64::max);
            m.set("gamma_sum_error", err);
        }
    }
    if let Some(last) = tr.populations.last() {
        let n = last.len();
        m.set("final_p1_first_site", last[0][1]);
        m.set("final_p2_first_site", last[0][2]);
        m.set("final_p1_last_site", last[n - 1][1]);
        m.set("final_p2_last_site", last[n - 1][2]);
    }
    for &c in &r.echo_cycles {
        m.set(echo_key(c), tr.loschmidt[frame_at(r, c)]);
    }
    let d = &sim.diagnostics;
    m.set("steps", d.steps as f64);
    m.set("max_phase_used", d.max_phase_used);
    m.set("max_step_drift", d.max_step_drift);
    if let Some(e) = d.min_eigenvalue {
        m.set("min_eigenvalue", e);
    }
    if sim.lindblad {
        m.set("positivity_warnings", d.positivity_warnings.len() as f64);
    }
    m
}

/// Seed of disorder realization `k` of a run seeded with `seed`.
pub fn realization_seed(seed: u64, k: usize) -> u64 {
    seed ^ ((k as u64) << 32)
}

fn run_dynamics(r: &Resolved, emit: &mut Emitter) -> Result<Summary> {
    let seeds: Vec<u64> = (0..r.realizations).map(|k| realization_seed(r.seed, k)).collect();
    let sims: Vec<Simulation> = seeds.par_iter().map(|&s| simulate(r, s)).collect::<Result<_>>()?;
    let mut summary = dynamics_metrics(r, &sims[0]);
    if sims.len() > 1 {
        let per: Vec<Summary> = sims.iter().map(|s| dynamics_metrics(r, s)).collect();
        let keys: Vec<String> = summary.metrics.keys().cloned().collect();
        let mut header = vec!["realization".to_string(), "seed".to_string()];
        header.extend(keys.iter().cloned());
        let rows: Vec<Vec<String>> = per
            .iter()
            .enumerate()
            .map(|(k, p)| {
                let mut row = vec![k.to_string(), seeds[k].to_string()];
                row.extend(keys.iter().map(|key| p.metric(key).map_or_else(String::new, s)));
                row
            })
            .collect();
        let header: Vec<&str> = header.iter().map(String::as_str).collect();
        emit.csv("realizations.csv", &header, rows)?;
        let n = per.len() as f64;
        for key in keys {
            let vals: Vec<f64> = per.iter().filter_map(|p| p.metric(&key)).collect();
            let mean = vals.iter().sum::<f64>() / n;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            summary.set(format!("{key}_mean"), mean);
            summary.set(format!("{key}_sem"), (var / n).sqrt());
        }
        summary.set("realizations", n);
    }
    write_trace(r, &sims[0], emit)?;
    if r.drive.kind == DriveKind::EdgePump {
        write_edge_spectrum(r, &sims[0].trace.times, emit)?;
    }
    Ok(summary)
}

fn write_trace(r: &Resolved, sim: &Simulation, emit: &mut Emitter) -> Result<()> {
    let tr = &sim.trace;
    let sites = r.original_sites();
    let mut rows = Vec::new();
    for (f, (t, pops)) in tr.times.iter().zip(&tr.populations).enumerate() {
        for (site, p) in sites.iter().zip(pops) {
            rows.push(vec![f.to_string(), s(*t), site.to_string(), s(p[0]), s(p[1]), s(p[2])]);
        }
    }
    emit.csv("populations.csv", &["frame", "time_us", "site", "p0", "p1", "p2"], rows)?;

    let dx = tr.delta_x();
    let rows = (0..tr.frames()).map(|f| {
        vec![
            f.to_string(),
            s(tr.times[f]),
            s(tr.com_position[f]),
            s(dx[f]),
            s(tr.loschmidt[f]),
            s(tr.norm[f]),
            s(tr.pair_population[f]),
        ]
    });
    emit.csv("com.csv", &["frame", "time_us", "com", "delta_x", "loschmidt", "norm", "pair_population"], rows)?;

    let time_cols: Vec<String> = tr.times.iter().map(|t| format!("t={t}")).collect();
    let map = |g: &dyn Fn(&[f64; 3]) -> f64| -> Vec<Vec<f64>> {
        (0..sites.len()).map(|j| tr.populations.iter().map(|f| g(&f[j])).collect()).collect()
    };
    let opts = |title: String| HeatmapOptions {
        title,
        x_label: "time (frames)".into(),
        y_label: format!("site {}–{}", r.first_site, r.last_site),
        range: None,
        column_names: time_cols.clone(),
    };
    emit.heatmap("occupation", &map(&|p| p[1] + 2.0 * p[2]), &opts(format!("{}: ⟨n_j⟩", r.scenario)))?;
    if r.n_particles() >= 2 {
        emit.heatmap("doublon", &map(&|p| p[2]), &opts(format!("{}: P(2_j)", r.scenario)))?;
        emit.heatmap("single", &map(&|p| p[1]), &opts(format!("{}: P(1_j)", r.scenario)))?;
    }

    if !tr.correlations.is_empty() {
        let mut rows = Vec::new();
        for (f, (t, g)) in tr.times.iter().zip(&tr.correlations).enumerate() {
            for (i, si) in sites.iter().enumerate() {
                for (j, sj) in sites.iter().enumerate() {
                    rows.push(vec![f.to_string(), s(*t), si.to_string(), sj.to_string(), s(g[(i, j)])]);
                }
            }
        }
        emit.csv("correlations.csv", &["frame", "time_us", "i", "j", "gamma"], rows)?;
        let f = frame_at(r, 0.5);
        let g = &tr.correlations[f];
        let data: Vec<Vec<f64>> = (0..sites.len()).map(|i| (0..sites.len()).map(|j| g[(i, j)]).collect()).collect();
        emit.heatmap(
            "correlation_half_period",
            &data,
            &HeatmapOptions {
                title: format!("{}: Γ_ij at t = {:.4} µs", r.scenario, tr.times[f]),
                x_label: "site j".into(),
                y_label: "site i".into(),
                range: None,
                column_names: sites.iter().map(|x| x.to_string()).collect(),
            },
        )?;
    }
    Ok(())
}

/// Instantaneous open-chain spectrum at every frame time, with the weight of
/// each eigenstate on "all particles on the first/last site" for colouring.
fn write_edge_spectrum(r: &Resolved, times: &[f64], emit: &mut Emitter) -> Result<()> {
    let spec = r.lattice()?;
    let drive = r.drive_protocol(r.seed)?;
    let np = r.n_particles();
    let ctx = || format!("{}: edge spectrum", r.scenario);
    let basis = build_fock_basis(&spec, np).context(ctx)?;
    let h = DrivenHamiltonian::new(&spec, &basis, &drive).context(ctx)?;
    let n = r.n_sites();
    let piled = |site: usize| {
        let mut occ = vec![0u8; n];
        occ[site] = np as u8;
        basis.index_of(&occ)
    };
    let (first, last) = (piled(0), piled(n - 1));
    let mut rows = Vec::new();
    for (f, &t) in times.iter().enumerate() {
        let (e, v) = h.at(t).eigh().context(ctx)?;
        for (level, &energy) in e.iter().enumerate() {
            let w = |i: Option<usize>| i.map_or(0.0, |i| v[(i, level)].norm_sqr());
            rows.push(vec![f.to_string(), s(t), level.to_string(), s(energy / MHZ), s(w(first)), s(w(last))]);
        }
    }
    emit.csv("edge_spectrum.csv", &["frame", "time_us", "level", "energy_mhz", "weight_first", "weight_last"], rows)
}

fn run_bands(r: &Resolved, emit: &mut Emitter) -> Result<Summary> {
    let drive = r.drive_protocol(r.seed)?;
    let grid = BlochGrid::square(r.bands.grid).context(|| format!("{}: grid", r.scenario))?;
    let ctx = || format!("{}: band structure", r.scenario);
    let mut m = Summary { scenario: r.scenario.name().into(), ..Summary::default() };
    if r.n_particles() == 1 {
        let b = rice_mele_bands(&drive, grid).context(ctx)?;
        let mut rows = Vec::new();
        for i in 0..grid.n_k {
            for j in 0..grid.n_t {
                let p = grid.index(i, j);
                for (band, e) in b.energies[p].iter().enumerate() {
                    rows.push(vec![
                        i.to_string(),
                        j.to_string(),
                        s(grid.k(i, 1.0)),
                        s(grid.t(j, drive.period)),
                        band.to_string(),
                        s(e / MHZ),
                        s(b.curvature[band][p]),
                    ]);
                }
            }
        }
        emit.csv("bands.csv", &["i_k", "i_t", "k", "t_us", "band", "energy_mhz", "curvature"], rows)?;
        m.lists.insert("chern".into(), b.chern.iter().map(|&c| c as f64).collect());
        m.set("gap_min_mhz", b.gap_min / MHZ);
        return Ok(m);
    }

    let cells = r.bands.ring_cells;
    let spec = LatticeSpec::new(2 * cells, r.local_dim, r.interaction_mhz * MHZ).context(ctx)?;
    let b = com_band_structure(&spec, &drive, r.n_particles(), cells, grid).context(ctx)?;
    let label = |l: BandLabel| match l {
        BandLabel::BoundState => "bound_state",
        BandLabel::Scattering => "scattering",
        BandLabel::ResonantIsolated => "resonant_isolated",
    };
    let rows = b.bands.iter().enumerate().map(|(g, band)| {
        vec![
            g.to_string(),
            band.levels.start.to_string(),
            band.levels.end.to_string(),
            label(band.label).into(),
            band.ring_chern.to_string(),
            s(band.com_chern),
            s(band.doublon_weight),
            s(band.pair_weight),
            s(band.mean_energy / MHZ),
            s(band.min_overlap),
        ]
    });
    emit.csv(
        "com_groups.csv",
        &[
            "group",
            "level_start",
            "level_end",
            "label",
            "ring_chern",
            "com_chern",
            "doublon_weight",
            "pair_weight",
            "mean_energy_mhz",
            "min_overlap",
        ],
        rows,
    )?;
    // Energies of the labelled (non-scattering) groups only; the continuum is
    // summarised by its group row.
    let mut rows = Vec::new();
    for (g, band) in b.bands.iter().enumerate().filter(|(_, band)| band.label != BandLabel::Scattering) {
        for i in 0..grid.n_k {
            for j in 0..grid.n_t {
                let p = grid.index(i, j);
                for level in band.levels.clone() {
                    rows.push(vec![
                        g.to_string(),
                        i.to_string(),
                        j.to_string(),
                        s(grid.t(j, drive.period)),
                        level.to_string(),
                        s(b.energies[p][level] / MHZ),
                    ]);
                }
            }
        }
    }
    emit.csv("com_energies.csv", &["group", "i_theta", "i_t", "t_us", "level", "energy_mhz"], rows)?;
    m.lists.insert("com_chern".into(), b.chern());
    m.lists.insert("ring_chern".into(), b.bands.iter().map(|x| x.ring_chern as f64).collect());
    for l in [BandLabel::BoundState, BandLabel::ResonantIsolated] {
        let c: Vec<f64> = b.labelled(l).map(|x| x.com_chern).collect();
        let e: Vec<f64> = b.labelled(l).map(|x| x.mean_energy / MHZ).collect();
        m.lists.insert(format!("com_chern_{}", label(l)), c);
        m.lists.insert(format!("mean_energy_mhz_{}", label(l)), e);
    }
    m.set("gap_min_mhz", b.gap_min / MHZ);
    m.set("groups", b.bands.len() as f64);
    Ok(m)
}
