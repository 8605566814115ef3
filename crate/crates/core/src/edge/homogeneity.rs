use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::kappa::kappa_matrix;
use super::operator::{EdgeOperator, EtaSample};
use super::sample::{edge_domain_sample, sample_log_bound, EdgeDomainSample};
use crate::check::Check;
use crate::cone::{pole_set, projection::max_abs_diff, AsymptoticType, XVectors};
use crate::error::{Error, Result};
use crate::par::{self, Execution};
use crate::tolerance::{same_exponent, Tolerances};

pub const IDEMPOTENCY_TOL: f64 = 1e-10;
pub const HOMOGENEITY_TOL: f64 = 1e-9;
/// Slack allowed on regression slopes.
pub const SLOPE_SLACK: f64 = 0.1;
/// Differences below this (relative to the sample scale) are round-off.
pub const NOISE_FLOOR: f64 = 1e-13;

/// Parameters of an `eta` sweep along rays `lambda * eta0`, `|eta0| = 1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub rays: usize,
    pub lambdas: Vec<f64>,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            rays: 8,
            lambdas: dyadic_lambdas(1024.0),
            seed: 0x5eed,
            execution: Execution::Parallel,
        }
    }
}

/// `1, 2, 4, ...` up to and including `max` (when a power of two).
pub fn dyadic_lambdas(max: f64) -> Vec<f64> {
    let mut out = vec![1.0];
    while out.last().unwrap() * 2.0 <= max * (1.0 + 1e-12) {
        out.push(out.last().unwrap() * 2.0);
    }
    out
}

/// Seeded random unit directions in `R^q`.
pub fn random_rays(q: usize, n: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| loop {
            let v: Vec<f64> = (0..q).map(|_| rng.random_range(-1.0..1.0)).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm > 1e-3 && norm <= 1.0 {
                break v.iter().map(|x| x / norm).collect();
            }
        })
        .collect()
}

/// A log-log decay check along rays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeCheck {
    pub name: String,
    /// Worst (largest) slope over all regressed series; `None` when every
    /// series is identically zero.
    pub worst_slope: Option<f64>,
    pub bound: f64,
    pub regressed_series: usize,
    pub zero_series: usize,
    pub passed: bool,
}

impl SlopeCheck {
    fn from_series(name: &str, series: &[(Vec<f64>, Vec<f64>, f64)], bound: f64) -> Self {
        let mut worst: Option<f64> = None;
        let (mut regressed, mut zero) = (0, 0);
        for (lambdas, values, floor) in series {
            let (xs, ys): (Vec<f64>, Vec<f64>) = lambdas
                .iter()
                .zip(values)
                .filter(|(_, v)| **v > *floor)
                .map(|(l, v)| (l.ln(), v.ln()))
                .unzip();
            if xs.len() < 3 {
                zero += 1;
                continue;
            }
            regressed += 1;
            let s = slope(&xs, &ys);
            worst = Some(worst.map_or(s, |w: f64| w.max(s)));
        }
        Self {
            name: name.into(),
            worst_slope: worst,
            bound,
            regressed_series: regressed,
            zero_series: zero,
            passed: worst.is_none_or(|w| w <= bound),
        }
    }

    pub fn summary(&self) -> String {
        match self.worst_slope {
            None => "identically zero, pass".into(),
            Some(s) => format!(
                "worst slope {s:.4} (bound {:.2}, {} series)",
                self.bound, self.regressed_series
            ),
        }
    }
}

/// Least-squares slope of `y` against `x`.
pub fn slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomogeneityReport {
    pub rays: Vec<Vec<f64>>,
    pub lambdas: Vec<f64>,
    pub seed: u64,
    pub log_bound: usize,
    pub s_legend: Vec<String>,
    pub idempotency: Check,
    pub normalization: Check,
    pub pole_consistency: Check,
    pub homogeneity: Check,
    pub twisted_homogeneity: Check,
    pub classicality: SlopeCheck,
    pub order_zero: SlopeCheck,
    /// `sup ||pi(eta)||` over the sweep.
    pub projection_sup: f64,
}

impl HomogeneityReport {
    pub fn checks(&self) -> Vec<(&str, bool)> {
        vec![
            (&self.idempotency.name, self.idempotency.passed),
            (&self.normalization.name, self.normalization.passed),
            (&self.pole_consistency.name, self.pole_consistency.passed),
            (&self.homogeneity.name, self.homogeneity.passed),
            (&self.twisted_homogeneity.name, self.twisted_homogeneity.passed),
            (&self.classicality.name, self.classicality.passed),
            (&self.order_zero.name, self.order_zero.passed),
        ]
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.1)
    }

    /// The first failing check as an error.
    pub fn ensure(&self) -> Result<()> {
        for c in [&self.classicality, &self.order_zero] {
            if !c.passed {
                return Err(Error::SlopeRegressionFailure {
                    what: c.name.clone(),
                    slope: c.worst_slope.unwrap_or(f64::NAN),
                    bound: c.bound,
                });
            }
        }
        match self.checks().into_iter().find(|c| !c.1) {
            Some((name, _)) => Err(Error::InvalidInput(format!("edge check failed: {name}"))),
            None => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeSweep {
    /// `samples[r * lambdas.len() + k]` sits at `lambdas[k] * rays[r]`.
    pub samples: Vec<EdgeDomainSample>,
    pub report: HomogeneityReport,
}

fn vec_max(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

fn mat_max(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Max entry of `a - b` over matching x-vectors, missing vectors read as zero.
fn x_diff(a: &[XVectors], b: &[XVectors], level: usize, j: usize) -> f64 {
    let get = |xs: &[XVectors]| xs.get(level).and_then(|x| x.vectors.get(j)).cloned();
    match (get(a), get(b)) {
        (Some(x), Some(y)) => vec_max(&(x - y)),
        (Some(x), None) | (None, Some(x)) => vec_max(&x),
        (None, None) => 0.0,
    }
}

fn x_scale(s: &EdgeDomainSample) -> f64 {
    s.poles
        .iter()
        .flat_map(|p| p.x_bar.iter().chain(&p.x_tilde))
        .flat_map(|x| &x.vectors)
        .map(vec_max)
        .fold(0.0, f64::max)
}

/// `kappa_|eta| M(eta) B J(|eta|)`: Mellin jet data at each pole to the
/// principal range element, in `E_S` coordinates.
fn principal_range_matrix(s: &EdgeDomainSample, mu: usize, b_ref: &[DMatrix<Complex64>]) -> Result<DMatrix<Complex64>> {
    let norm = s.eta.norm().powi(-(mu as i32));
    let mut cols = Vec::new();
    for (p, b) in s.poles.iter().zip(b_ref) {
        let block: Vec<DVector<Complex64>> = p
            .principal_range_basis
            .iter()
            .map(|e| s.s.to_vector(&e.scaled(Complex64::new(norm, 0.0))))
            .collect::<Result<_>>()?;
        let m = DMatrix::from_columns(&block);
        cols.extend((&m * b).column_iter().map(|c| c.into_owned()).collect::<Vec<_>>());
    }
    let m = if cols.is_empty() {
        DMatrix::zeros(s.s.dim(), 0)
    } else {
        DMatrix::from_columns(&cols)
    };
    let sig: Vec<(Complex64, usize)> = s.poles.iter().map(|p| (p.sigma, p.n_sigma + 1)).collect();
    Ok(&kappa_matrix(s.eta.norm(), &s.s).matrix * m * j_matrix(s.eta.norm(), &sig))
}

/// Block-diagonal `lambda^(sigma - 1/2) exp(log(lambda) N)`, `N` the lower shift.
fn j_matrix(lambda: f64, sigmas: &[(Complex64, usize)]) -> DMatrix<Complex64> {
    let dim: usize = sigmas.iter().map(|s| s.1).sum();
    let mut m = DMatrix::zeros(dim, dim);
    let ll = lambda.ln();
    let mut off = 0;
    for &(sigma, d) in sigmas {
        let scale = ((sigma - 0.5) * ll).exp();
        let mut fact = 1.0;
        for k in 0..d {
            if k > 0 {
                fact *= k as f64;
            }
            for i in k..d {
                m[(off + i, off + i - k)] = scale * (ll.powi(k as i32) / fact);
            }
        }
        off += d;
    }
    m
}

/// Sample the edge data along `config.rays` seeded directions and run the
/// homogeneity, classicality and idempotency checks.
pub fn homogeneity_checks(op: &EdgeOperator, tol: &Tolerances, config: &SweepConfig) -> Result<EdgeSweep> {
    if config.lambdas.iter().any(|&l| !(l >= 1.0)) {
        return Err(Error::InvalidInput("sweep factors must satisfy lambda >= 1".into()));
    }
    if config.lambdas.len() < 3 {
        return Err(Error::InvalidInput("at least three lambda values are needed".into()));
    }
    let rays = random_rays(op.q(), config.rays, config.seed);
    let etas: Vec<EtaSample> = rays
        .iter()
        .flat_map(|r| config.lambdas.iter().map(move |&l| r.iter().map(|x| x * l).collect()))
        .map(EtaSample::new)
        .collect::<Result<_>>()?;
    let exec = config.execution;
    let bounds = par::map(exec, &etas, |e| sample_log_bound(op, e, tol));
    let log_bound = bounds.into_iter().collect::<Result<Vec<_>>>()?.into_iter().max().unwrap_or(0);
    let samples = par::map(exec, &etas, |e| edge_domain_sample(op, e, tol, Some(log_bound)))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let report = evaluate(op, tol, config, rays, log_bound, &samples)?;
    Ok(EdgeSweep { samples, report })
}

fn evaluate(
    op: &EdgeOperator,
    tol: &Tolerances,
    config: &SweepConfig,
    rays: Vec<Vec<f64>>,
    log_bound: usize,
    samples: &[EdgeDomainSample],
) -> Result<HomogeneityReport> {
    let mu = op.mu();
    let nl = config.lambdas.len();

    let idem = samples
        .iter()
        .map(|s| max_abs_diff(&(&s.projection * &s.projection), &s.projection) / mat_max(&s.projection).max(1.0))
        .fold(0.0, f64::max);

    let mut norm_err: f64 = 0.0;
    for s in samples {
        let brk = s.eta.bracket.powi(mu as i32);
        for p in &s.poles {
            for (j, v) in p.x_tilde[0].vectors.iter().enumerate() {
                let mut e = DVector::<Complex64>::zeros(v.len());
                e[j] = Complex64::new(1.0, 0.0);
                norm_err = norm_err.max(vec_max(&(v * Complex64::new(brk, 0.0) - e)));
            }
        }
    }

    let cone = pole_set(&op.cone_symbol(0), mu, tol)?;
    let consistent = samples.iter().all(|s| {
        s.poles.len() == cone.len()
            && s.poles.iter().zip(&cone).all(|(a, b)| {
                same_exponent(a.sigma, b.sigma) && a.n_sigma == b.n_sigma && a.mu_sigma == b.mu_sigma
            })
    });

    let mut hom_err: f64 = 0.0;
    let mut twist_err: f64 = 0.0;
    let mut class_series = Vec::new();
    let mut zero_series = Vec::new();
    let mut pi_sup: f64 = 0.0;
    for r in 0..rays.len() {
        let ray = &samples[r * nl..(r + 1) * nl];
        let base = &ray[0];
        let base_scale = x_scale(base).max(f64::MIN_POSITIVE);
        let b_ref: Vec<DMatrix<Complex64>> = base.poles.iter().map(|p| p.principal_b.clone()).collect();
        let sig: Vec<(Complex64, usize)> = base.poles.iter().map(|p| (p.sigma, p.n_sigma + 1)).collect();
        let p0 = principal_range_matrix(base, mu, &b_ref)?;
        let limit = &base.principal_projection_model;
        let mut pi_diff = Vec::with_capacity(nl);
        for (k, s) in ray.iter().enumerate() {
            let lam = config.lambdas[k];
            let f = lam.powi(-(mu as i32));
            // (a) exact homogeneity of x-bar
            for (pa, pb) in s.poles.iter().zip(&base.poles) {
                for (xa, xb) in pa.x_bar.iter().zip(&pb.x_bar) {
                    for (va, vb) in xa.vectors.iter().zip(&xb.vectors) {
                        let d = vec_max(&(va - vb * Complex64::new(f, 0.0)));
                        hom_err = hom_err.max(d / (f * base_scale));
                    }
                }
            }
            // (c) twisted homogeneity of the principal range
            let lhs = principal_range_matrix(s, mu, &b_ref)?;
            let rhs = &kappa_matrix(lam, &s.s).matrix * &p0 * j_matrix(lam, &sig) * Complex64::new(f, 0.0);
            let scale = mat_max(&rhs).max(f64::MIN_POSITIVE);
            twist_err = twist_err.max(max_abs_diff(&lhs, &rhs) / scale);
            pi_sup = pi_sup.max(mat_max(&s.projection_model));
            pi_diff.push(max_abs_diff(&s.projection_model, limit));
        }
        // (b) classicality, one series per (pole, level, j)
        for (pi, p) in base.poles.iter().enumerate() {
            for l in 0..p.x_tilde.len().max(p.x_bar.len()) {
                let count = ray
                    .iter()
                    .map(|s| {
                        let q = &s.poles[pi];
                        q.x_tilde.get(l).map_or(0, |x| x.vectors.len()).max(q.x_bar.get(l).map_or(0, |x| x.vectors.len()))
                    })
                    .max()
                    .unwrap_or(0);
                for j in 0..count {
                    let values: Vec<f64> =
                        ray.iter().map(|s| x_diff(&s.poles[pi].x_tilde, &s.poles[pi].x_bar, l, j)).collect();
                    let floor = NOISE_FLOOR * ray.iter().map(x_scale).fold(0.0, f64::max);
                    class_series.push((config.lambdas.clone(), values, floor));
                }
            }
        }
        zero_series.push((config.lambdas.clone(), pi_diff, NOISE_FLOOR * mat_max(limit).max(1.0)));
    }

    Ok(HomogeneityReport {
        rays,
        lambdas: config.lambdas.clone(),
        seed: config.seed,
        log_bound,
        s_legend: samples.first().map(|s| s.s.legend()).unwrap_or_default(),
        idempotency: Check::at_most("projection idempotency", idem, IDEMPOTENCY_TOL),
        normalization: Check::at_most("leading level normalisation", norm_err, 1e-12),
        pole_consistency: Check::holds("pole data matches the cone symbol", consistent),
        homogeneity: Check::at_most("principal x-vector homogeneity", hom_err, HOMOGENEITY_TOL),
        twisted_homogeneity: Check::at_most("twisted homogeneity of the principal range", twist_err, HOMOGENEITY_TOL),
        classicality: SlopeCheck::from_series(
            "classicality of x-vectors",
            &class_series,
            -(mu as f64 + 1.0) + SLOPE_SLACK,
        ),
        order_zero: SlopeCheck::from_series("order-zero convergence of the projection", &zero_series, -1.0 + SLOPE_SLACK),
        projection_sup: pi_sup,
    })
}

/// `E_S` type shared by all samples of a sweep.
pub fn sweep_type(sweep: &EdgeSweep) -> Option<&AsymptoticType> {
    sweep.samples.first().map(|s| &s.s)
}
