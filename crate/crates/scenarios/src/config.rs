//! Scenario configuration.
//!
//! Config files are TOML with frequencies in MHz (the `f` of `2πf`) and times
//! in µs; they are converted to rad/µs only when the core types are built.
//! Every field except `scenario` is optional and overrides the catalog
//! default for that scenario. See `docs/config.md` for the schema.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use rmpump::{DriveKind, DriveProtocol, LatticeSpec, NoiseModel};

use crate::catalog;
use crate::error::{io_err, CoreContext, Result, ScenarioError};

/// `2π`: MHz → rad/µs.
pub const MHZ: f64 = 2.0 * PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioId {
    Fig1Forward,
    Fig1Backward,
    Fig2Bound,
    Fig3Resonant,
    Fig4EdgeLeft,
    Fig4EdgeRight,
    EdgeSlow,
    ControlNointeraction,
    SweepPeriod,
    SweepOffset,
    SweepDisorder,
    BandsFig1e,
    BandsBound,
    BandsResonant,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    Dynamics,
    Sweep,
    Bands,
}

impl ScenarioId {
    pub const ALL: [ScenarioId; 14] = [
        Self::Fig1Forward,
        Self::Fig1Backward,
        Self::Fig2Bound,
        Self::Fig3Resonant,
        Self::Fig4EdgeLeft,
        Self::Fig4EdgeRight,
        Self::EdgeSlow,
        Self::ControlNointeraction,
        Self::SweepPeriod,
        Self::SweepOffset,
        Self::SweepDisorder,
        Self::BandsFig1e,
        Self::BandsBound,
        Self::BandsResonant,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fig1Forward => "fig1_forward",
            Self::Fig1Backward => "fig1_backward",
            Self::Fig2Bound => "fig2_bound",
            Self::Fig3Resonant => "fig3_resonant",
            Self::Fig4EdgeLeft => "fig4_edge_left",
            Self::Fig4EdgeRight => "fig4_edge_right",
            Self::EdgeSlow => "edge_slow",
            Self::ControlNointeraction => "control_nointeraction",
            Self::SweepPeriod => "sweep_period",
            Self::SweepOffset => "sweep_offset",
            Self::SweepDisorder => "sweep_disorder",
            Self::BandsFig1e => "bands_fig1e",
            Self::BandsBound => "bands_bound",
            Self::BandsResonant => "bands_resonant",
        }
    }

    pub fn kind(self) -> ScenarioKind {
        match self {
            Self::SweepPeriod | Self::SweepOffset | Self::SweepDisorder => ScenarioKind::Sweep,
            Self::BandsFig1e | Self::BandsBound | Self::BandsResonant => ScenarioKind::Bands,
            _ => ScenarioKind::Dynamics,
        }
    }
}

impl fmt::Display for ScenarioId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters a sweep axis can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    PeriodUs,
    OffsetR,
    DisorderW,
    Phase0,
    JMhz,
    Delta0Mhz,
    Capdelta0Mhz,
    InteractionMhz,
    /// 0 or 1.
    NoiseEnabled,
    T1Us,
    TphiUs,
}

impl SweepParam {
    pub fn name(self) -> &'static str {
        match self {
            Self::PeriodUs => "period_us",
            Self::OffsetR => "offset_r",
            Self::DisorderW => "disorder_w",
            Self::Phase0 => "phase0",
            Self::JMhz => "j_mhz",
            Self::Delta0Mhz => "delta0_mhz",
            Self::Capdelta0Mhz => "capdelta0_mhz",
            Self::InteractionMhz => "interaction_mhz",
            Self::NoiseEnabled => "noise_enabled",
            Self::T1Us => "t1_us",
            Self::TphiUs => "tphi_us",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    pub name: SweepParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeSection {
    /// Inclusive range of original site indices, e.g. `[18, 26]`.
    pub sites: Option<[usize; 2]>,
    pub interaction_mhz: Option<f64>,
    pub local_dim: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveSection {
    pub kind: Option<DriveKind>,
    pub j_mhz: Option<f64>,
    pub delta0_mhz: Option<f64>,
    pub capdelta0_mhz: Option<f64>,
    pub period_us: Option<f64>,
    pub phase0: Option<f64>,
    pub offset_r: Option<f64>,
    pub disorder_w: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoiseSection {
    pub enabled: Option<bool>,
    pub t1_us: Option<f64>,
    pub tphi_us: Option<f64>,
}

/// Fock state with `occupancy[i]` bosons on original site `sites[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    pub sites: Vec<usize>,
    pub occupancy: Vec<u8>,
}

impl InitialState {
    pub fn single(site: usize, occupancy: u8) -> Self {
        Self { sites: vec![site], occupancy: vec![occupancy] }
    }

    pub fn n_particles(&self) -> usize {
        self.occupancy.iter().map(|&o| o as usize).sum()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BandsSection {
    pub grid: Option<usize>,
    pub ring_cells: Option<usize>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    pub max_phase: Option<f64>,
    pub steps_per_frame: Option<usize>,
}

/// A config file as written by the user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioId,
    pub output_dir: Option<PathBuf>,
    pub seed: Option<u64>,
    pub frames: Option<usize>,
    pub cycles: Option<f64>,
    /// Disorder realizations averaged per run.
    pub realizations: Option<usize>,
    /// Drive periods at which the Loschmidt echo is reported.
    pub echo_cycles: Option<Vec<f64>>,
    #[serde(default)]
    pub lattice: LatticeSection,
    #[serde(default)]
    pub drive: DriveSection,
    #[serde(default)]
    pub noise: NoiseSection,
    pub initial: Option<InitialState>,
    /// Replaces the catalog axes when present.
    pub sweep: Option<Vec<SweepAxis>>,
    #[serde(default)]
    pub bands: BandsSection,
    #[serde(default)]
    pub integrator: IntegratorSection,
}

impl ScenarioConfig {
    pub fn new(scenario: ScenarioId) -> Self {
        Self {
            scenario,
            output_dir: None,
            seed: None,
            frames: None,
            cycles: None,
            realizations: None,
            echo_cycles: None,
            lattice: LatticeSection::default(),
            drive: DriveSection::default(),
            noise: NoiseSection::default(),
            initial: None,
            sweep: None,
            bands: BandsSection::default(),
            integrator: IntegratorSection::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_toml_str(&text)
    }

    /// Catalog defaults with this config's overrides applied, validated.
    pub fn resolve(&self) -> Result<Resolved> {
        let mut r = catalog::defaults(self.scenario);
        let l = &self.lattice;
        if let Some([a, b]) = l.sites {
            r.first_site = a;
            r.last_site = b;
        }
        set(&mut r.interaction_mhz, l.interaction_mhz);
        set(&mut r.local_dim, l.local_dim);
        let d = &self.drive;
        set(&mut r.drive.kind, d.kind);
        set(&mut r.drive.j_mhz, d.j_mhz);
        set(&mut r.drive.delta0_mhz, d.delta0_mhz);
        set(&mut r.drive.capdelta0_mhz, d.capdelta0_mhz);
        set(&mut r.drive.period_us, d.period_us);
        set(&mut r.drive.phase0, d.phase0);
        set(&mut r.drive.offset_r, d.offset_r);
        set(&mut r.drive.disorder_w, d.disorder_w);
        set(&mut r.noise.enabled, self.noise.enabled);
        set(&mut r.noise.t1_us, self.noise.t1_us);
        set(&mut r.noise.tphi_us, self.noise.tphi_us);
        set(&mut r.initial, self.initial.clone());
        set(&mut r.seed, self.seed);
        set(&mut r.frames, self.frames);
        set(&mut r.cycles, self.cycles);
        set(&mut r.realizations, self.realizations);
        set(&mut r.echo_cycles, self.echo_cycles.clone());
        set(&mut r.sweep, self.sweep.clone());
        set(&mut r.bands.grid, self.bands.grid);
        set(&mut r.bands.ring_cells, self.bands.ring_cells);
        set(&mut r.integrator.max_phase, self.integrator.max_phase);
        if self.integrator.steps_per_frame.is_some() {
            r.integrator.steps_per_frame = self.integrator.steps_per_frame;
        }
        r.validate()?;
        if r.scenario.kind() == ScenarioKind::Sweep && r.sweep.is_empty() {
            return Err(ScenarioError::Config(format!("{}: sweep scenario needs at least one axis", r.scenario)));
        }
        Ok(r)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("runs").join(self.scenario.name()))
    }
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriveSettings {
    pub kind: DriveKind,
    pub j_mhz: f64,
    pub delta0_mhz: f64,
    pub capdelta0_mhz: f64,
    pub period_us: f64,
    pub phase0: f64,
    pub offset_r: f64,
    pub disorder_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSettings {
    pub enabled: bool,
    pub t1_us: f64,
    pub tphi_us: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandSettings {
    pub grid: usize,
    /// Unit cells of the twisted ring used for center-of-mass bands.
    pub ring_cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratorSettings {
    pub method: String,
    /// Bound on `h‖H‖∞` per step.
    pub max_phase: f64,
    pub steps_per_frame: Option<usize>,
}

/// Fully resolved parameters of one run; recorded verbatim in the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Resolved {
    pub scenario: ScenarioId,
    /// Inclusive original-index range of the simulated open chain.
    pub first_site: usize,
    pub last_site: usize,
    pub local_dim: usize,
    pub interaction_mhz: f64,
    pub drive: DriveSettings,
    pub noise: NoiseSettings,
    pub initial: InitialState,
    pub cycles: f64,
    pub frames: usize,
    pub seed: u64,
    pub realizations: usize,
    pub echo_cycles: Vec<f64>,
    pub sweep: Vec<SweepAxis>,
    pub bands: BandSettings,
    pub integrator: IntegratorSettings,
}

impl Resolved {
    pub fn n_sites(&self) -> usize {
        self.last_site + 1 - self.first_site
    }

    pub fn n_particles(&self) -> usize {
        self.initial.n_particles()
    }

    pub fn t_final(&self) -> f64 {
        self.cycles * self.drive.period_us
    }

    pub fn original_sites(&self) -> Vec<usize> {
        (self.first_site..=self.last_site).collect()
    }

    pub fn lattice(&self) -> Result<LatticeSpec> {
        LatticeSpec::new(self.n_sites(), self.local_dim, self.interaction_mhz * MHZ)
            .and_then(|s| s.with_origin(self.first_site))
            .context(|| format!("{}: lattice", self.scenario))
    }

    /// Core drive in rad/µs; the disorder stream is keyed by `seed`.
    pub fn drive_protocol(&self, seed: u64) -> Result<DriveProtocol> {
        let d = &self.drive;
        let mut p = DriveProtocol::bulk(d.j_mhz * MHZ, d.delta0_mhz * MHZ, d.capdelta0_mhz * MHZ, d.period_us);
        p.kind = d.kind;
        p.phase0 = d.phase0;
        p.offset_r = d.offset_r;
        p.disorder_w = d.disorder_w;
        p.disorder_seed = seed;
        p.validate().context(|| format!("{}: drive", self.scenario))?;
        Ok(p)
    }

    pub fn noise_model(&self) -> Option<NoiseModel> {
        self.noise.enabled.then(|| NoiseModel {
            t1_eff: self.noise.t1_us,
            tphi_eff: self.noise.tphi_us,
            ..NoiseModel::default()
        })
    }

    /// Initial occupation vector on the internal `1..=n` labelling.
    pub fn initial_occupation(&self) -> Vec<u8> {
        let mut occ = vec![0u8; self.n_sites()];
        for (&s, &o) in self.initial.sites.iter().zip(&self.initial.occupancy) {
            occ[s - self.first_site] += o;
        }
        occ
    }

    pub fn apply(&mut self, param: SweepParam, v: f64) -> Result<()> {
        let d = &mut self.drive;
        match param {
            SweepParam::PeriodUs => d.period_us = v,
            SweepParam::OffsetR => d.offset_r = v,
            SweepParam::DisorderW => d.disorder_w = v,
            SweepParam::Phase0 => d.phase0 = v,
            SweepParam::JMhz => d.j_mhz = v,
            SweepParam::Delta0Mhz => d.delta0_mhz = v,
            SweepParam::Capdelta0Mhz => d.capdelta0_mhz = v,
            SweepParam::InteractionMhz => self.interaction_mhz = v,
            SweepParam::NoiseEnabled => {
                self.noise.enabled = match v {
                    x if x == 0.0 => false,
                    x if x == 1.0 => true,
                    _ => return Err(ScenarioError::Config(format!("noise_enabled takes 0 or 1, got {v}"))),
                }
            }
            SweepParam::T1Us => self.noise.t1_us = v,
            SweepParam::TphiUs => self.noise.tphi_us = v,
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(ScenarioError::Config(format!("{}: {m}", self.scenario)));
        if self.first_site == 0 || self.last_site <= self.first_site {
            return bad(format!("site range [{}, {}] needs 1 <= first < last", self.first_site, self.last_site));
        }
        if self.local_dim < 2 {
            return bad(format!("local_dim must be at least 2, got {}", self.local_dim));
        }
        let d = &self.drive;
        let finite = [
            self.interaction_mhz,
            d.j_mhz,
            d.delta0_mhz,
            d.capdelta0_mhz,
            d.period_us,
            d.phase0,
            d.offset_r,
            d.disorder_w,
            self.cycles,
        ];
        if finite.iter().any(|x| !x.is_finite()) {
            return bad("parameters must be finite".into());
        }
        if !(d.period_us > 0.0) || !(self.cycles > 0.0) {
            return bad("period_us and cycles must be positive".into());
        }
        if !(d.disorder_w >= 0.0) {
            return bad("disorder_w must be non-negative".into());
        }
        if !(self.noise.t1_us > 0.0 && self.noise.tphi_us > 0.0) {
            return bad("t1_us and tphi_us must be positive".into());
        }
        if self.frames < 2 {
            return bad("frames must be at least 2".into());
        }
        if self.realizations == 0 {
            return bad("realizations must be at least 1".into());
        }
        if !(self.integrator.max_phase > 0.0 && self.integrator.max_phase.is_finite()) {
            return bad("integrator.max_phase must be positive".into());
        }
        if self.integrator.steps_per_frame == Some(0) {
            return bad("integrator.steps_per_frame must be positive".into());
        }
        if self.echo_cycles.iter().any(|&c| !(c >= 0.0 && c <= self.cycles)) {
            return bad(format!("echo_cycles must lie in [0, {}]", self.cycles));
        }
        let init = &self.initial;
        if init.sites.is_empty() || init.sites.len() != init.occupancy.len() {
            return bad("initial.sites and initial.occupancy must be non-empty and of equal length".into());
        }
        for (i, &s) in init.sites.iter().enumerate() {
            if s < self.first_site || s > self.last_site {
                return bad(format!(
                    "initial site {s} outside the lattice [{}, {}]",
                    self.first_site, self.last_site
                ));
            }
            if init.sites[..i].contains(&s) {
                return bad(format!("initial site {s} listed twice"));
            }
        }
        if init.n_particles() == 0 {
            return bad("initial state has no particles".into());
        }
        if init.occupancy.iter().any(|&o| o as usize >= self.local_dim) {
            return bad(format!("occupancy needs local_dim > max occupancy (local_dim = {})", self.local_dim));
        }
        if self.bands.grid < 8 || self.bands.ring_cells < 2 {
            return bad("bands.grid must be >= 8 and bands.ring_cells >= 2".into());
        }
        for axis in &self.sweep {
            if axis.values.is_empty() {
                return bad(format!("sweep axis {} is empty", axis.name.name()));
            }
            if axis.values.iter().any(|v| !v.is_finite()) {
                return bad(format!("sweep axis {} has non-finite values", axis.name.name()));
            }
            let mut probe = self.clone();
            for &v in &axis.values {
                probe.apply(axis.name, v)?;
            }
        }
        Ok(())
    }
}
