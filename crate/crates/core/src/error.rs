use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("spectrum mass {sum} differs from 1 by more than {tolerance}")]
    NonNormalized { sum: f64, tolerance: f64 },

    #[error("state is not mixed: rank must be at least 2 and p_1 < 1")]
    NotMixed,

    #[error("spectrum entropy cannot be certified finite within tolerance {tolerance}")]
    InfiniteEntropy { tolerance: f64 },

    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(&'static str),

    #[error("index {index} exceeds rank {rank}")]
    IndexBeyondRank { index: usize, rank: usize },

    #[error("index {index} lies beyond the {listed} listed eigenvalues of a truncated spectrum")]
    BeyondResolution { index: usize, listed: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("invalid Hamiltonian levels: {0}")]
    InvalidLevels(&'static str),

    #[error("partition function cannot be certified at b = {b}")]
    NoConvergenceCertificate { b: f64 },

    #[error("no Gibbs state at energy {energy}: exceeds h_* = {h_star}")]
    NoGibbsState { energy: f64, h_star: f64 },

    #[error("beta_m = {beta} is degenerate")]
    DegenerateBeta { beta: f64 },

    #[error("{value} is outside [0, 1]")]
    OutOfRange { value: f64 },

    #[error("feasible sampling exhausted after {attempts} attempts")]
    SamplingExhausted { attempts: usize },
}
