//! Oracle-backed verification of a cone domain description.

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::check::Check;
use crate::cone::{numerical_rank, projection::max_abs_diff, ConeOperator, DomainDescription, PoleDomain};
use crate::error::Result;
use crate::oracle::{
    apply_cone_jet, contour_g, jet_function, mellin_jet, membership_check, CutoffPair, JetTarget,
    MellinInput, SampledFunction, TestFunction,
};
use crate::par::Execution;

pub const RECURSION_TOL: f64 = 1e-9;
pub const CANCELLATION_TOL: f64 = 1e-9;
pub const PROJECTION_TOL: f64 = 1e-10;
pub const ORACLE_TOL: f64 = 1e-6;
/// Support bound of the jet-prescribed test inputs.
pub const JET_EPS: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    /// Number of random jet-prescribed inputs per pole.
    pub jet_inputs: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            jet_inputs: 2,
            seed: 0x5eed,
            execution: Execution::Parallel,
        }
    }
}

/// Largest coefficient with `Re p >= 1/2` relative to the largest coefficient of `A v`,
/// maximised over the corrected basis of every pole.
pub fn cancellation_residual(op: &ConeOperator, dd: &DomainDescription) -> f64 {
    let mut worst: f64 = 0.0;
    for pd in &dd.poles {
        for e in &pd.basis {
            let applied = apply_cone_jet(op, e).asymptotic;
            let scale = applied.max_abs().max(e.max_abs());
            let bad = applied
                .terms()
                .iter()
                .filter(|t| t.p.re >= 0.5)
                .map(|t| t.c.norm())
                .fold(0.0, f64::max);
            if scale > 0.0 {
                worst = worst.max(bad / scale);
            }
        }
    }
    worst
}

/// Agreement of the contour operator with the closed form at every level,
/// plus `zeta = B delta`, for one input. Returns `(level residual, zeta residual)`.
pub fn oracle_agreement<'a>(
    dd: &DomainDescription,
    pd: &PoleDomain,
    u: impl Into<MellinInput<'a>> + Copy,
    exec: Execution,
) -> Result<(f64, f64)> {
    let cut = CutoffPair;
    let delta = mellin_jet(u, pd.pole.sigma, pd.pole.n_sigma, &cut)?;
    let zeta = pd.zeta(&delta);
    let scale = zeta.iter().map(|c| c.norm()).fold(1e-300, f64::max);
    let mut level_res: f64 = 0.0;
    let mut zeta_res: f64 = 0.0;
    for l in 0..=pd.pole.mu_sigma {
        let fit = contour_g(&dd.f[0], &pd.pole, l, &dd.g[l], u, None, &cut, exec)?;
        let closed = pd.level_coefficients(l, &zeta);
        let len = closed.len().max(fit.coefficients.len());
        for j in 0..len {
            let a = closed.get(j).copied().unwrap_or_default();
            let b = fit.coefficients.get(j).copied().unwrap_or_default();
            level_res = level_res.max((a - b).norm() / scale.max(1.0));
        }
        if l == 0 {
            // x^(0)_j = e_j, so the level-0 fit recovers zeta itself
            let fitted = DVector::from_fn(zeta.len(), |i, _| fit.coefficients.get(i).copied().unwrap_or_default());
            zeta_res = (&fitted - &zeta).iter().map(|c| c.norm()).fold(0.0, f64::max) / scale.max(1.0);
        }
    }
    Ok((level_res, zeta_res))
}

/// A polynomial-type input `t^a (1 - t)^3` integrable against every pole in the strip.
pub fn beta_input(mu: usize) -> TestFunction {
    TestFunction::BetaPower {
        a: 3.0f64.max(mu as f64 + 1.0),
        b: 3.0,
    }
}

/// Random jet-prescribed input: random Taylor data at `pd`, zero data at the other poles.
pub fn random_jet_input<R: Rng>(dd: &DomainDescription, pole: usize, rng: &mut R) -> Result<SampledFunction> {
    let pd = &dd.poles[pole].pole;
    let mut targets = vec![JetTarget {
        sigma: pd.sigma,
        order: pd.n_sigma,
    }];
    targets.extend(
        dd.poles
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != pole)
            .map(|(_, q)| JetTarget {
                sigma: q.pole.sigma,
                order: q.pole.n_sigma + 1,
            }),
    );
    let values: Vec<Complex64> = (0..=pd.n_sigma)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    jet_function(&targets, &values, JET_EPS, &CutoffPair)
}

/// All cone invariants with their residuals.
pub fn verify_cone(op: &ConeOperator, dd: &DomainDescription, config: &VerifyConfig) -> Result<Vec<Check>> {
    let mut checks = vec![Check::at_most("recursion identity", dd.recursion_residual, RECURSION_TOL)];

    let dims_ok = dd
        .poles
        .iter()
        .all(|p| p.hat_basis.len() == p.pole.dim() && p.basis.len() == p.pole.dim());
    checks.push(Check::holds("dim of leading and corrected spaces equals n_sigma + 1", dims_ok));

    checks.push(Check::at_most(
        "cancellation of non-square-integrable terms",
        cancellation_residual(op, dd),
        CANCELLATION_TOL,
    ));

    let members = dd
        .basis()
        .iter()
        .all(|e| membership_check(e, 0, 0.0).member);
    checks.push(Check::holds("corrected basis lies in the weighted L2 space", members));

    let proj = dd.projection(None)?;
    let q = &proj.q;
    checks.push(Check::at_most("projection idempotency", max_abs_diff(&(q * q), q), PROJECTION_TOL));
    let mut fixed: f64 = 0.0;
    for e in dd.basis() {
        let v = proj.s.to_vector(&e)?;
        fixed = fixed.max((q * &v - &v).iter().map(|c| c.norm()).fold(0.0, f64::max));
    }
    checks.push(Check::at_most("projection fixes the corrected basis", fixed, PROJECTION_TOL));
    let rank = numerical_rank(q, 1e-9);
    checks.push(Check::holds(
        format!("projection rank {rank} equals the domain dimension {}", dd.dim()),
        rank == dd.dim(),
    ));

    let exec = config.execution;
    let beta = beta_input(dd.mu);
    let (mut lvl, mut zeta): (f64, f64) = (0.0, 0.0);
    for pd in &dd.poles {
        let (a, b) = oracle_agreement(dd, pd, &beta, exec)?;
        lvl = lvl.max(a);
        zeta = zeta.max(b);
    }
    checks.push(Check::at_most("contour oracle vs closed form (polynomial input)", lvl, ORACLE_TOL));

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut jet_lvl: f64 = 0.0;
    for (i, pd) in dd.poles.iter().enumerate() {
        for _ in 0..config.jet_inputs {
            let u = random_jet_input(dd, i, &mut rng)?;
            let (a, b) = oracle_agreement(dd, pd, &u, exec)?;
            jet_lvl = jet_lvl.max(a);
            zeta = zeta.max(b);
        }
    }
    if config.jet_inputs > 0 {
        checks.push(Check::at_most("contour oracle vs closed form (jet inputs)", jet_lvl, ORACLE_TOL));
    }
    checks.push(Check::at_most("zeta = B delta", zeta, ORACLE_TOL));
    Ok(checks)
}
