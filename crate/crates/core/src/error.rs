//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("lattice mismatch: {0}")]
    LatticeMismatch(String),

    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("Nyquist violation: {0}")]
    NyquistViolation(String),

    #[error("k-spacing not commensurate with the grid frequency step: {0}")]
    NonCommensurate(String),

    #[error("dyadic shell index {j} outside the resolvable band")]
    OutOfBand { j: i32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("solver failed to converge: residual {residual:.3e} after {iterations} iterations")]
    NonConvergence { residual: f64, iterations: usize },

    #[error("Neumann iteration diverging: residual grew over {0} consecutive iterations")]
    NeumannDivergence(usize),

    #[error("too many non-converged nodes: {holes} of {total} (limit {limit_percent}%)")]
    ExcessiveHoles {
        holes: usize,
        total: usize,
        limit_percent: f64,
    },

    #[error(
        "evolution step violates the phase-resolution bound: dt*max|xi1^2-xi2^2| = {0:.3} > pi/4"
    )]
    CflViolation(f64),

    #[error("requested times exceed the dispersive validity window (t_max = {t_max:.3})")]
    WindowViolation { t_max: f64 },

    #[error("bad file format: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
