use thiserror::Error;

/// Everything that can go wrong while building operators or solving for amplitudes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("angle {0} is outside the open band (0, pi)")]
    BandEdge(f64),

    #[error(
        "energy {energy} with spacing {spacing} lies outside the lattice band (0 < E h^2 < 4)"
    )]
    Band { energy: f64, spacing: f64 },

    #[error("invalid lattice spacing {0}")]
    Spacing(f64),

    #[error("window: {0}")]
    Window(String),

    #[error("coupling {0} out of (-1, 1)")]
    Positivity(f64),

    #[error("invalid layout: {0}")]
    Layout(String),

    #[error("matching system is singular (pivot {pivot:e} at row {row})")]
    Resonance { row: usize, pivot: f64 },

    #[error("closed form is singular at phi = {phi}: {reason}")]
    ResonantAngle { phi: f64, reason: &'static str },

    #[error("domain: {0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
