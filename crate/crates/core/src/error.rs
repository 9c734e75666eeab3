//! Error type shared by all analysis stages.

use thiserror::Error;

/// Errors produced by network construction, steady-state solving, spectral
/// decomposition, root finding and stability assessment.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("adjacency is not symmetric at ({i},{j}): {a_ij} != {a_ji}")]
    AsymmetricAdjacency { i: usize, j: usize, a_ij: f64, a_ji: f64 },

    #[error("self-loop at node {node} (weight {weight})")]
    SelfLoop { node: usize, weight: f64 },

    #[error("negative coupling weight {weight} on edge ({i},{j})")]
    NegativeWeight { i: usize, j: usize, weight: f64 },

    #[error("network is disconnected; transversal analysis requires a connected graph")]
    Disconnected,

    #[error("power set points do not balance: sum = {sum:e} exceeds tolerance {tol:e}")]
    PowerImbalance { sum: f64, tol: f64 },

    #[error("Newton iteration did not converge in {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no normal-operation fixed point found: edge ({i},{j}) angle {angle} rad exceeds pi/2")]
    AngleLimit { i: usize, j: usize, angle: f64 },

    #[error("singular Newton matrix (pivot {pivot:e} at step {step})")]
    SingularMatrix { step: usize, pivot: f64 },

    #[error("matrix is not symmetric at ({i},{j}): difference {diff:e}")]
    NotSymmetric { i: usize, j: usize, diff: f64 },

    #[error("non-finite matrix entry at ({i},{j})")]
    NonFinite { i: usize, j: usize },

    #[error("fixed-point weight w({i},{j}) = {weight} is not positive")]
    NonPositiveEdgeWeight { i: usize, j: usize, weight: f64 },

    #[error("model parameter {name} = {value} must be positive")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("delay appears in both the phase and the frequency channel; only one is supported")]
    BothDelayChannels,

    #[error("model has no delayed term; delay stability analysis does not apply")]
    NoDelayChannel,

    #[error("eigenvalue lambda = {lambda} must be non-negative")]
    NegativeLambda { lambda: f64 },

    #[error("outside Bhatt-Hsu phase-delay regime: need a > 0 and -a < b*tau <= 0 (a = {a}, b*tau = {b_tau_product})")]
    OutsidePhaseRegime { a: f64, b_tau_product: f64 },

    #[error("outside frequency-delay regime: need a > 0, b >= 0, tau > 0 (a = {a}, b = {b}, tau = {tau})")]
    OutsideFrequencyRegime { a: f64, b: f64, tau: f64 },

    #[error("no sign change in bracket [{lo}, {hi}] of interval m = {m} (f(lo) = {f_lo:e}, f(hi) = {f_hi:e})")]
    BracketFailure { m: usize, lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("delay class mismatch: {expected} conditions applied to {found} roots")]
    DelayClassMismatch { expected: &'static str, found: &'static str },

    #[error("system is unstable without delay; no stability window starts at tau = 0")]
    DelayFreeUnstable,

    #[error("{name} = {value} is out of range: {constraint}")]
    InvalidArgument { name: &'static str, value: f64, constraint: &'static str },

    #[error("the generic-Jacobian model has no nonlinear network form to simulate")]
    NoNonlinearForm,

    #[error("{stage}: {source}")]
    Stage { stage: &'static str, #[source] source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("malformed network file: {0}")]
    Malformed(#[from] serde_json::Error),
}

impl Error {
    /// Wrap an error with the pipeline stage that produced it.
    pub fn at_stage(self, stage: &'static str) -> Error {
        Error::Stage { stage, source: Box::new(self) }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
