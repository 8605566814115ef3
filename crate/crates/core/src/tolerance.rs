use serde::{Deserialize, Serialize};

use crate::mellin::{default_cluster_tol, ComplexPolynomial, TAU_ZERO};

/// Numerical tolerances shared by the whole pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Root clustering radius; `None` means `1e-8 * (1 + max|root|)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cluster: Option<f64>,
    /// Relative zero threshold for Taylor/Laurent coefficients.
    #[serde(default = "default_zero")]
    pub zero: f64,
    /// Minimal distance of a pole from the weight lines.
    #[serde(default = "default_line")]
    pub line: f64,
}

fn default_zero() -> f64 {
    TAU_ZERO
}

fn default_line() -> f64 {
    1e-6
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            cluster: None,
            zero: default_zero(),
            line: default_line(),
        }
    }
}

impl Tolerances {
    pub fn cluster_for(&self, p: &ComplexPolynomial) -> f64 {
        self.cluster.unwrap_or_else(|| default_cluster_tol(p))
    }
}

/// Two exponents are identified when closer than this (scaled by `1 + |p|`).
pub const EXPONENT_TOL: f64 = 1e-8;

pub fn same_exponent(a: num_complex::Complex64, b: num_complex::Complex64) -> bool {
    (a - b).norm() <= EXPONENT_TOL * (1.0 + a.norm().max(b.norm()))
}
