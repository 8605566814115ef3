//! Edge-degenerate operators: covariable-dependent conormal symbols, the
//! natural-domain data at each `eta`, and homogeneity checks along rays.

pub mod homogeneity;
pub mod kappa;
pub mod operator;
pub mod sample;

pub use homogeneity::{
    dyadic_lambdas, homogeneity_checks, random_rays, slope, EdgeSweep, HomogeneityReport,
    SlopeCheck, SweepConfig,
};
pub use kappa::{kappa_matrix, KappaMatrix};
pub use operator::{edge_conormal, fixtures, principal_edge_conormal, EdgeOperator, EdgeTerm, EtaSample};
pub use sample::{edge_domain_sample, sample_log_bound, EdgeDomainSample, EdgePoleSample};
