//! Independent numerical checks: Mellin quadrature, contour integrals,
//! jet-prescribed test functions, symbolic operator application and
//! weighted-space membership.

pub mod apply;
pub mod contour;
pub mod cutoff;
pub mod functions;
pub mod jet;
pub mod membership;
pub mod quadrature;

pub use apply::{apply_cone_jet, JetApplication};
pub use contour::{contour_g, contour_radius, ContourFit, CONTOUR_NODES, FIT_TOL};
pub use cutoff::{smoothstep, CutoffPair};
pub use functions::{log_grid, mellin_jet, mellin_numeric, MellinInput, SampledFunction, TestFunction};
pub use jet::{jet_function, JetTarget, JET_COND_LIMIT};
pub use membership::{membership_check, Membership, MembershipInput};
pub use quadrature::{integrate, Quadrature};
