use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffPair;
use super::functions::{log_grid, mellin_numeric, MellinInput};
use crate::cone::{AsymptoticElement, PoleDatum};
use crate::error::{Error, Result};
use crate::mellin::{raw_roots, ComplexPolynomial, RationalFunction};
use crate::par::{self, Execution};

/// Quadrature nodes on the circle.
pub const CONTOUR_NODES: usize = 64;
pub const PROBE_POINTS: usize = 64;
pub const PROBE_RANGE: (f64, f64) = (1e-6, 1e-1);
pub const FIT_TOL: f64 = 1e-6;

/// Fitted output of one contour integral.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourFit {
    pub sigma: Complex64,
    pub level: usize,
    pub radius: f64,
    /// Coefficients `c_j` of `t^-(sigma - level) log^j t`.
    pub coefficients: Vec<Complex64>,
    /// Principal-part coefficients of `f0^-1 M(omega0 u)` at `sigma`.
    pub principal: Vec<Complex64>,
    /// Max fit residual relative to the sampled magnitude.
    pub residual: f64,
}

impl ContourFit {
    pub fn element(&self) -> AsymptoticElement {
        let p = self.sigma - self.level as f64;
        let mut e = AsymptoticElement::zero();
        for (j, &c) in self.coefficients.iter().enumerate() {
            e.push(p, j, c);
        }
        e
    }
}

fn near(points: &[Complex64], center: Complex64, radius: f64) -> usize {
    points.iter().filter(|r| (*r - center).norm() < radius).count()
}

/// `min(0.45 * gap, 0.1)` where `gap` is the distance from `sigma` to the
/// nearest other singularity of `f0^-1` or `g`.
pub fn contour_radius(f0: &ComplexPolynomial, g: &RationalFunction, sigma: Complex64) -> f64 {
    let exclusion = 1e-3 * (1.0 + sigma.norm());
    let mut pts = raw_roots(f0);
    pts.extend(raw_roots(g.den()));
    let gap = pts
        .iter()
        .map(|r| (r - sigma).norm())
        .filter(|&d| d > exclusion)
        .fold(f64::INFINITY, f64::min);
    (0.45 * gap).min(0.1)
}

/// Numerically evaluate the level-`level` contour operator at `sigma`
///
/// `(t^level / 2 pi i) int_{|z - sigma| = eps} t^-z g(z) Pi_sigma(f0^-1 M(omega0 u))(z) dz`
///
/// on a probe grid, and fit the result to `t^-(sigma - level) sum_j c_j log^j t`.
/// The principal part is itself obtained by trapezoidal quadrature on the circle;
/// only `sigma` is taken from `pd`.
pub fn contour_g<'a>(
    f0: &ComplexPolynomial,
    pd: &PoleDatum,
    level: usize,
    g: &RationalFunction,
    u: impl Into<MellinInput<'a>>,
    eps: Option<f64>,
    cut: &CutoffPair,
    exec: Execution,
) -> Result<ContourFit> {
    let u = u.into();
    let sigma = pd.sigma;
    let eps = eps.unwrap_or_else(|| contour_radius(f0, g, sigma));
    let p = CONTOUR_NODES;
    let units: Vec<Complex64> = (0..p)
        .map(|i| Complex64::from_polar(1.0, std::f64::consts::TAU * i as f64 / p as f64))
        .collect();
    let nodes: Vec<Complex64> = units.iter().map(|w| sigma + eps * w).collect();

    let uhat = par::map(exec, &nodes, |&z| mellin_numeric(u, z, cut));
    let h: Vec<Complex64> = nodes
        .iter()
        .zip(uhat)
        .map(|(&z, m)| m.map(|m| m / f0.eval(z)))
        .collect::<Result<_>>()?;

    // Pole order of f0^-1 and of g inside the circle, from the polynomial roots.
    let f0_roots = raw_roots(f0);
    let order_f0 = near(&f0_roots, sigma, eps);
    let order_g = near(&raw_roots(g.den()), sigma, eps);
    let terms = order_f0 + 1;
    let principal: Vec<Complex64> = (0..terms)
        .map(|k| {
            let s: Complex64 = h
                .iter()
                .zip(&units)
                .map(|(hv, w)| hv * w.powi(k as i32 + 1))
                .sum();
            s * eps.powi(k as i32 + 1) / p as f64
        })
        .collect();

    let probe = log_grid(PROBE_RANGE.0, PROBE_RANGE.1, PROBE_POINTS);
    let weights: Vec<Complex64> = nodes
        .iter()
        .zip(&units)
        .map(|(&z, w)| {
            let pi: Complex64 = principal
                .iter()
                .enumerate()
                .map(|(k, c)| c / (eps * w).powi(k as i32 + 1))
                .sum();
            g.eval(z) * pi * w * (eps / p as f64)
        })
        .collect();
    // y(t) = G(t) / t^-(sigma - level)
    let y: Vec<Complex64> = probe
        .iter()
        .map(|&t| {
            let lt = t.ln();
            weights
                .iter()
                .zip(&nodes)
                .map(|(wv, &z)| wv * (-(z - sigma) * lt).exp())
                .sum()
        })
        .collect();

    let degree = (order_f0 + order_g).saturating_sub(1);
    let scale_log = PROBE_RANGE.0.ln();
    let v = DMatrix::from_fn(probe.len(), degree + 1, |i, j| {
        Complex64::new((probe[i].ln() / scale_log).powi(j as i32), 0.0)
    });
    let yv = DVector::from_vec(y.clone());
    let svd = v.clone().svd(true, true);
    let a = svd
        .solve(&yv, 1e-14)
        .map_err(|e| Error::InvalidInput(format!("least squares failed: {e}")))?;
    let fitted = &v * &a;
    let ymax = y.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let resid = (fitted - yv).iter().map(|c| c.norm()).fold(0.0, f64::max) / ymax.max(1e-12);
    if resid > FIT_TOL {
        return Err(Error::FitResidualTooLarge {
            residual: resid,
            tol: FIT_TOL,
        });
    }
    let coefficients = a
        .iter()
        .enumerate()
        .map(|(j, c)| c / scale_log.powi(j as i32))
        .collect();
    Ok(ContourFit {
        sigma,
        level,
        radius: eps,
        coefficients,
        principal,
        residual: resid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{assemble_domain, fixtures::*};
    use crate::oracle::functions::TestFunction;
    use crate::tolerance::Tolerances;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn fix_a_level_zero() {
        let dd = assemble_domain(&fix_a(), &Tolerances::default()).unwrap();
        let u = TestFunction::BetaPower { a: 3.0, b: 3.0 };
        let pd = &dd.poles[0].pole;
        let fit = contour_g(&dd.f[0], pd, 0, &dd.g[0], &u, None, &CutoffPair, Execution::Sequential).unwrap();
        assert!((fit.coefficients[0] - c(1.0 / 60.0)).norm() < 1e-9);
        assert!(fit.coefficients[1..].iter().all(|x| x.norm() < 1e-9));
    }

    #[test]
    fn fix_c_level_one() {
        let dd = assemble_domain(&fix_c(), &Tolerances::default()).unwrap();
        let u = TestFunction::BetaPower { a: 3.0, b: 3.0 };
        let pd = &dd.poles[0].pole;
        let fit = contour_g(&dd.f[0], pd, 1, &dd.g[1], &u, None, &CutoffPair, Execution::Parallel).unwrap();
        let e = fit.element();
        assert!((e.coefficient(c(-1.0), 0) - c(1.0 / 60.0)).norm() < 1e-9);
        assert!((e.coefficient(c(-1.0), 1) + c(1.0 / 60.0)).norm() < 1e-9);
    }

    #[test]
    fn vanishing_jet_gives_zero() {
        // M(omega0 u)(0) = 0 for u = b1 - kappa b0 with the right kappa.
        let cut = CutoffPair;
        let b0 = TestFunction::LogBump { lo: -3.0, hi: -1.0, power: 0 };
        let b1 = TestFunction::LogBump { lo: -3.0, hi: -1.0, power: 1 };
        let m0 = mellin_numeric(&b0, c(0.0), &cut).unwrap();
        let m1 = mellin_numeric(&b1, c(0.0), &cut).unwrap();
        let u = TestFunction::Combination(vec![(c(1.0), b1), (-m1 / m0, b0)]);
        let dd = assemble_domain(&fix_a(), &Tolerances::default()).unwrap();
        let fit = contour_g(&dd.f[0], &dd.poles[0].pole, 0, &dd.g[0], &u, None, &cut, Execution::Sequential).unwrap();
        assert!(fit.coefficients.iter().all(|x| x.norm() < 1e-12));
    }
}
