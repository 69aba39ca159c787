//! Named scenarios, parameter sweeps, run manifests and heatmaps on top of
//! the `rmpump` core.
//!
//! A run directory holds `manifest.json` (written first with status
//! `incomplete`, finalised with SHA-256 checksums), `summary.json` and the
//! scenario's CSV/SVG files. Config files use MHz and µs; see
//! [`config::ScenarioConfig`].

pub mod catalog;
pub mod config;
pub mod error;
pub mod heatmap;
pub mod manifest;
pub mod run;
pub mod sweep;

pub use config::{Resolved, ScenarioConfig, ScenarioId, ScenarioKind, SweepAxis, SweepParam};
pub use error::{Result, ScenarioError};
pub use heatmap::{emit_heatmap, HeatmapOptions};
pub use manifest::{RunManifest, RunStatus};
pub use run::{run_resolved, run_scenario, RunOutput, Summary};
pub use sweep::{run_sweep, SweepOutput};
