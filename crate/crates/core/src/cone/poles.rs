use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mellin::{laurent_at_tol, poly_roots, ComplexPolynomial, RationalFunction};
use crate::tolerance::Tolerances;

/// A pole `sigma` of `f_0^-1` inside the strip `1/2 - mu < Re z < 1/2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleDatum {
    pub sigma: Complex64,
    /// Pole order minus one.
    pub n_sigma: usize,
    /// Number of correction levels, `floor(Re sigma + mu - 1/2)`.
    pub mu_sigma: usize,
    /// `r[k]` multiplies `(z - sigma)^-(k+1)` in the principal part of `f_0^-1`.
    pub r: Vec<Complex64>,
}

impl PoleDatum {
    pub fn dim(&self) -> usize {
        self.n_sigma + 1
    }
}

/// Snap imaginary parts that are pure rounding noise to zero.
fn clean(z: Complex64) -> Complex64 {
    if z.im.abs() <= 1e-12 * (1.0 + z.norm()) {
        Complex64::new(z.re, 0.0)
    } else {
        z
    }
}

/// Poles of `f0^-1` in the strip, with their Laurent principal parts.
///
/// Poles are returned sorted by `(Im sigma, -Re sigma)`.
pub fn pole_set(f0: &ComplexPolynomial, mu: usize, tol: &Tolerances) -> Result<Vec<PoleDatum>> {
    if f0.is_zero() {
        return Err(Error::InvalidInput("f0 is the zero polynomial".into()));
    }
    let upper = 0.5;
    let lower = 0.5 - mu as f64;
    let sites = poly_roots(f0, tol.cluster_for(f0))?;
    for s in &sites {
        for line in [lower, upper] {
            if (s.location.re - line).abs() <= tol.line {
                return Err(Error::WeightLineCollision {
                    pole: s.location,
                    line,
                    tol: tol.line,
                });
            }
        }
    }
    let inv = RationalFunction::from_poly(f0.clone()).invert()?;
    let mut out = Vec::new();
    for s in sites {
        let sigma = clean(s.location);
        if !(sigma.re > lower && sigma.re < upper) {
            continue;
        }
        let laurent = laurent_at_tol(&inv, sigma, -1, tol.zero)?;
        if laurent.pole_order() != s.order {
            return Err(Error::ExpansionUnstable {
                center: sigma,
                from_roots: s.order as i64,
                from_coeffs: laurent.pole_order() as i64,
            });
        }
        let mu_sigma = (sigma.re + mu as f64 - 0.5).floor() as usize;
        out.push(PoleDatum {
            sigma,
            n_sigma: s.order - 1,
            mu_sigma,
            r: laurent.principal_part(),
        });
    }
    sort_poles(&mut out);
    Ok(out)
}

/// Order by groups of equal imaginary part (ascending), then decreasing real part.
pub(crate) fn sort_poles(poles: &mut [PoleDatum]) {
    let keys: Vec<Complex64> = poles.iter().map(|p| p.sigma).collect();
    let groups = super::asymptotics::imag_groups(&keys);
    let mut idx: Vec<usize> = (0..poles.len()).collect();
    idx.sort_by(|&a, &b| {
        (groups[a], -keys[a].re)
            .partial_cmp(&(groups[b], -keys[b].re))
            .unwrap()
    });
    let sorted: Vec<PoleDatum> = idx.iter().map(|&i| poles[i].clone()).collect();
    poles.clone_from_slice(&sorted);
}
