use std::io;

use thiserror::Error;

use crate::fock::FockState;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// ω_⊥ ≤ ω_z: the ions leave the axial line (zigzag) and the model no
    /// longer applies.
    #[error("degenerate trap: omega_perp ({omega_perp:.6e} rad/s) must exceed omega_z ({omega_z:.6e} rad/s)")]
    DegenerateTrap { omega_perp: f64, omega_z: f64 },

    /// 2ω_r ≈ ω_s, where the dispersive result diverges.
    #[error("near resonance: |4 omega_r^2 - omega_s^2| / omega_z^2 = {detuning:.3e} is below the guard {guard:.1e}")]
    NearResonance { detuning: f64, guard: f64 },

    #[error("degenerate perturbation theory: {state} couples to {intermediate} with energy denominator {denominator:.3e}")]
    DegeneratePt {
        state: FockState,
        intermediate: FockState,
        denominator: f64,
    },

    #[error("basis dimension {dimension} exceeds the ceiling {ceiling}")]
    DimensionTooLarge { dimension: usize, ceiling: usize },

    #[error("no dressed state for {state}: best overlap^2 {overlap_sq:.4} is not above threshold {threshold}")]
    AmbiguousAssignment {
        state: FockState,
        overlap_sq: f64,
        threshold: f64,
    },

    #[error("extrapolation needs at least {required} xi values, got {given}")]
    InsufficientLadder { required: usize, given: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid input: {0}")]
    Validation(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}
