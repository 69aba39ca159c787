use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid drive: {0}")]
    InvalidDrive(String),
    #[error("particle number {n} out of range 0..={max}")]
    ParticleNumber { n: usize, max: usize },
    #[error("site {site} out of range 1..={n_sites}")]
    SiteOutOfRange { site: usize, n_sites: usize },
    #[error("invalid state preparation: {0}")]
    InvalidState(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("gap closes between bands {lower} and {upper}: min gap {gap:.3e} below tolerance {tol:.3e}")]
    GapClosure { lower: usize, upper: usize, gap: f64, tol: f64 },
    #[error("band tracking ambiguous for band group {group}: subspace overlap {overlap:.3} below 0.5")]
    ContinuityFailure { group: usize, overlap: f64 },
    #[error("step too large at t = {t:.6}: norm drift {drift:.3e} exceeds {tol:.3e}")]
    StepTooLarge { t: f64, drift: f64, tol: f64 },
    #[error("eigensolver failed to converge (dimension {0})")]
    Eigensolver(usize),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
