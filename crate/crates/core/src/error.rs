use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("root clusters near {a} and {b} are closer than 2*tau_cluster ({tol:e}) but do not merge consistently")]
    DegenerateCluster { a: Complex64, b: Complex64, tol: f64 },

    #[error("cannot invert the zero rational function")]
    DivisionByZeroFunction,

    #[error("Laurent expansion at {center} unstable: denominator roots give pole order {from_roots}, coefficient magnitudes give {from_coeffs}")]
    ExpansionUnstable {
        center: Complex64,
        from_roots: i64,
        from_coeffs: i64,
    },

    #[error("pole {pole} of f0^-1 lies within {tol:e} of the weight line Re z = {line}")]
    WeightLineCollision { pole: Complex64, line: f64, tol: f64 },

    #[error("B matrix for pole {sigma} is singular (|det| = {det:e})")]
    SingularB { sigma: Complex64, det: f64 },

    #[error("element is not in the span of the leading basis at {sigma}: {detail}")]
    NotInHatBasis { sigma: Complex64, detail: String },

    #[error("Mellin integrand not integrable at t = 0 for z = {z} (leading exponent {exponent})")]
    QuadratureDivergence { z: Complex64, exponent: f64 },

    #[error("log-polynomial fit residual {residual:e} exceeds {tol:e}")]
    FitResidualTooLarge { residual: f64, tol: f64 },

    #[error("jet system ill-conditioned (Gram condition number {cond:e})")]
    IllConditionedJetSystem { cond: f64 },

    #[error("{what}: regression slope {slope:.4} above bound {bound:.4}")]
    SlopeRegressionFailure { what: String, slope: f64, bound: f64 },

    #[error("spec parse error: {0}")]
    SpecParse(String),

    #[error("spec invariant violated: {0}")]
    SpecInvariant(String),

    #[error("command `{command}` requires an operator of kind `{expected}`")]
    KindMismatch { command: String, expected: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
