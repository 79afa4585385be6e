use thiserror::Error;

/// Errors raised by the regular-function calculus and the verification harnesses.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-invertible: quaternion norm {norm:e} is below the inversion guard")]
    NonInvertible { norm: f64 },

    #[error("on zero set of symmetrization: |f^s(q)| = {value:e} <= threshold {threshold:e}")]
    OnSymmetrizationZeroSet { value: f64, threshold: f64 },

    #[error("f vanishes at q: |f(q)| = {value:e} <= threshold {threshold:e}")]
    VanishesAt { value: f64, threshold: f64 },

    #[error("symmetrization coefficient {index} has imaginary magnitude {magnitude:e} (relative), expected real")]
    SymmetrizationNotReal { index: usize, magnitude: f64 },

    #[error("reciprocal series undefined: f(0)=0")]
    ReciprocalUndefined,

    #[error("not a sphere: y = 0 denotes the real singleton {{{x}}}")]
    NotASphere { x: f64 },

    #[error("zero function")]
    ZeroFunction,

    #[error("root finder failed to converge after {iterations} iterations (max correction {max_correction:e}, max residual {max_residual:e})")]
    RootFinderFailed {
        iterations: usize,
        max_correction: f64,
        max_residual: f64,
    },

    #[error(
        "region outside trust radius: region reaches |q| = {reach}, trust radius {trust_radius}"
    )]
    RegionOutsideTrust { reach: f64, trust_radius: f64 },

    #[error("units not orthogonal: <I,K> = {dot}")]
    UnitsNotOrthogonal { dot: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
