use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::rational::RationalFunction;
use super::roots::raw_roots;
use crate::error::{Error, Result};

/// Relative threshold for declaring a Taylor coefficient zero (`tau_zero`).
pub const TAU_ZERO: f64 = 1e-10;

/// Truncated Laurent series `sum_{k = kmin}^{kmax} coeffs[k - kmin] (z - center)^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LaurentExpansion {
    pub center: Complex64,
    pub kmin: i64,
    pub coeffs: Vec<Complex64>,
}

impl LaurentExpansion {
    pub fn kmax(&self) -> i64 {
        self.kmin + self.coeffs.len() as i64 - 1
    }

    /// Coefficient of `(z - center)^k`, zero outside the stored range.
    pub fn coeff(&self, k: i64) -> Complex64 {
        if k < self.kmin || k > self.kmax() {
            return Complex64::default();
        }
        self.coeffs[(k - self.kmin) as usize]
    }

    /// Pole order, 0 when holomorphic at the center.
    pub fn pole_order(&self) -> usize {
        (-self.kmin).max(0) as usize
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let w = z - self.center;
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * w.powi((self.kmin + i as i64) as i32))
            .sum()
    }

    /// Principal part coefficients `r_k` of `(z - center)^{-(k+1)}`, k = 0..order-1.
    pub fn principal_part(&self) -> Vec<Complex64> {
        (0..self.pole_order())
            .map(|k| self.coeff(-(k as i64) - 1))
            .collect()
    }
}

/// Laurent expansion of `f` at `center` through the power `kmax`.
///
/// The pole order is decided by the vanishing orders of numerator and
/// denominator at `center`, cross-checked against how many denominator
/// roots sit near `center`.
pub fn laurent_at(f: &RationalFunction, center: Complex64, kmax: i64) -> Result<LaurentExpansion> {
    laurent_at_tol(f, center, kmax, TAU_ZERO)
}

pub fn laurent_at_tol(
    f: &RationalFunction,
    center: Complex64,
    kmax: i64,
    tau_zero: f64,
) -> Result<LaurentExpansion> {
    if f.is_zero() {
        let kmin = kmax.min(0);
        return Ok(LaurentExpansion {
            center,
            kmin,
            coeffs: vec![Complex64::default(); (kmax - kmin + 1).max(0) as usize],
        });
    }
    let num = f.num();
    let den = f.den();
    let m_num = num.vanishing_order(center, tau_zero).unwrap_or(0);
    let m_den = den.vanishing_order(center, tau_zero).unwrap_or(0);

    let radius = 1e-3 * (1.0 + center.norm());
    let near = raw_roots(den)
        .iter()
        .filter(|r| (*r - center).norm() <= radius)
        .count();
    if near != m_den {
        return Err(Error::ExpansionUnstable {
            center,
            from_roots: near as i64,
            from_coeffs: m_den as i64,
        });
    }

    let mut a = num.taylor_at(center);
    let mut b = den.taylor_at(center);
    a.drain(..m_num);
    b.drain(..m_den);
    let kmin = m_num as i64 - m_den as i64;
    let len = (kmax - kmin + 1).max(0) as usize;
    let coeffs = series_divide(&a, &b, len);
    Ok(LaurentExpansion {
        center,
        kmin,
        coeffs,
    })
}

/// First `len` coefficients of the power series `a / b` with `b[0] != 0`.
fn series_divide(a: &[Complex64], b: &[Complex64], len: usize) -> Vec<Complex64> {
    let mut q = Vec::with_capacity(len);
    for n in 0..len {
        let mut s = a.get(n).copied().unwrap_or_default();
        for k in 1..=n.min(b.len().saturating_sub(1)) {
            s -= b[k] * q[n - k];
        }
        q.push(s / b[0]);
    }
    q
}
