use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectrumError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("irregular singular point at x = {x}: {detail}")]
    IrregularSingularPoint { x: f64, detail: String },

    #[error("branch selection at x = {x}: {detail}")]
    BranchSelection { x: f64, detail: String },

    #[error("endpoint series at x = {x} is resonant (log term in the kept branch)")]
    ResonantSeries { x: f64 },

    #[error("vanishing denominator in {0}")]
    VanishingDenominator(&'static str),

    #[error("dense eigensolver failed: {0}")]
    Solver(String),

    #[error("no eigenvalue passed the convergence filter")]
    NoConvergedEigenvalues,

    #[error("insufficient converged overtones: need up to N = {needed}, have {available}")]
    InsufficientOvertones { needed: usize, available: usize },

    #[error("integrator failure: {0}")]
    Integrator(String),

    #[error("no sign change on the bracket [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },
}

pub type Result<T> = std::result::Result<T, SpectrumError>;
