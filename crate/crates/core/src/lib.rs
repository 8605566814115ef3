//! Natural domains of cone- and edge-degenerate differential operators.
//!
//! * [`mellin`]: complex polynomials, rational functions, Laurent expansions.
//! * [`cone`]: poles of the inverted conormal symbol, the `g_l` recursion,
//!   leading and corrected asymptotic spaces, and the projection onto them.
//! * [`oracle`]: independent numerical checks (quadrature, contour integrals,
//!   jet-prescribed functions, operator application, membership).
//! * [`edge`]: covariable-dependent data of edge operators and homogeneity checks.
//! * [`spec`], [`report`], [`verify`]: spec files, commands and reports.

// NaN must fail tolerance checks, hence `!(x <= tol)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop, clippy::too_many_arguments, clippy::excessive_precision)]

pub mod check;
pub mod cone;
pub mod edge;
pub mod error;
pub mod mellin;
pub mod oracle;
pub mod par;
pub mod report;
pub mod spec;
pub mod tolerance;
pub mod verify;

pub use error::{Error, Result};
