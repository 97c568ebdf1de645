//! Error type shared across the crate.

/// Errors produced by validation, the closed-form evaluators and the
/// numerical oracles.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("needle count must be at least 2, got {0}")]
    NeedleCount(u32),

    #[error("needle length must be positive and finite, got {0}")]
    NeedleLength(f64),

    #[error("lattice spacing must be positive and finite, got {0}")]
    Spacing(f64),

    #[error("lattice angle must lie in (0, pi/2], got {0}")]
    AngleRange(f64),

    #[error(
        "inadmissible configuration: 2*max(lambda,mu)*sin(pi*floor(n/2)/n) = {margin} > 1; \
         shrink the needles or widen the lattice"
    )]
    Inadmissible { margin: f64 },

    #[error("closed forms cover odd n >= 3 only, got n = {0}; use the simulator for even n")]
    UnsupportedNeedleCount(u32),

    #[error("intersection multiplicity {k} out of range 1..={max}")]
    MultiplicityRange { k: u32, max: u32 },

    #[error("coefficient index {0} out of range 0..=9")]
    CoefficientIndex(usize),

    #[error("angle {phi} outside the interval {interval}")]
    IntervalMismatch { phi: f64, interval: &'static str },

    #[error("angle must be finite, got {0}")]
    NonFiniteAngle(f64),

    #[error("effective angle {0} outside [0, pi/2n]")]
    EffectiveAngleRange(f64),

    #[error("offset-sweep resolution must be at least 10^4, got {0}")]
    ResolutionTooLow(u64),

    #[error("simulation needs at least one trial")]
    NoTrials,

    #[error("grid of {given} points is too coarse, need at least {minimum}")]
    GridTooSmall { given: usize, minimum: usize },

    #[error("simulation needs at least one worker")]
    NoWorkers,

    #[error("limit parameters need lambda > 0, mu >= 0 and 2*max(lambda,mu) <= 1")]
    LimitParams { lambda: f64, mu: f64 },

    #[error("quadrature failed to converge on [{lo}, {hi}] (tolerance {tol})")]
    QuadratureNonConvergence { lo: f64, hi: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
