use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Dense polynomial in one complex variable, `coeffs[i]` multiplies `z^i`.
///
/// Trailing zero coefficients are stripped on construction, so the zero
/// polynomial is the empty coefficient list.
#[derive(Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct ComplexPolynomial {
    coeffs: Vec<Complex64>,
}

impl ComplexPolynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Complex64::new(1.0, 0.0))
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `z - root`
    pub fn linear(root: Complex64) -> Self {
        Self::new(vec![-root, Complex64::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Complex64 {
        self.coeffs.get(i).copied().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    /// Largest coefficient modulus, 0 for the zero polynomial.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drop coefficients whose modulus is at most `rel * scale()`, then strip.
    pub fn chop(&self, rel: f64) -> Self {
        let cut = rel * self.scale();
        Self::new(
            self.coeffs
                .iter()
                .map(|&c| if c.norm() <= cut { Complex64::default() } else { c })
                .collect(),
        )
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::default(), |acc, &c| acc * z + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| c * i as f64)
                .collect(),
        )
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Taylor coefficients at `center`: the coefficients of `p(center + w)` in `w`.
    ///
    /// Computed by repeated synthetic division, which is exact up to rounding.
    pub fn taylor_at(&self, center: Complex64) -> Vec<Complex64> {
        let mut work = self.coeffs.clone();
        let n = work.len();
        for k in 0..n {
            for i in (k..n - 1).rev() {
                let upper = work[i + 1];
                work[i] += center * upper;
            }
        }
        work
    }

    /// Per-coefficient magnitude scale for [`taylor_at`](Self::taylor_at):
    /// `sum_i |a_i| C(i,k) |center|^(i-k)`. Used for relative zero tests.
    pub fn taylor_scale_at(&self, center: Complex64) -> Vec<f64> {
        let abs = ComplexPolynomial::new(
            self.coeffs.iter().map(|c| Complex64::new(c.norm(), 0.0)).collect(),
        );
        abs.taylor_at(Complex64::new(center.norm(), 0.0))
            .into_iter()
            .map(|c| c.re)
            .collect()
    }

    /// Order of vanishing at `z0`, judged coefficientwise against `rel`.
    ///
    /// Returns `None` for the zero polynomial.
    pub fn vanishing_order(&self, z0: Complex64, rel: f64) -> Option<usize> {
        if self.is_zero() {
            return None;
        }
        let taylor = self.taylor_at(z0);
        let scales = self.taylor_scale_at(z0);
        let top = self.degree().unwrap_or(0);
        Some(
            taylor
                .iter()
                .zip(&scales)
                .position(|(c, s)| c.norm() > rel * s)
                .unwrap_or(top),
        )
    }

    /// `p(z + shift)`.
    pub fn shift(&self, shift: Complex64) -> Self {
        Self::new(self.taylor_at(shift))
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other).scale()
    }
}

impl fmt::Debug for ComplexPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl fmt::Display for ComplexPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.norm() == 0.0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", super::fmt_complex(*c))?;
            match i {
                0 => {}
                1 => write!(f, "z")?,
                _ => write!(f, "z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Add for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn add(self, rhs: Self) -> ComplexPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn sub(self, rhs: Self) -> ComplexPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn neg(self) -> ComplexPolynomial {
        ComplexPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &ComplexPolynomial {
    type Output = ComplexPolynomial;
    fn mul(self, rhs: Self) -> ComplexPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPolynomial::zero();
        }
        let mut out = vec![Complex64::default(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPolynomial::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn strips_trailing_zeros() {
        let p = ComplexPolynomial::from_real(&[1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(1));
        assert!(ComplexPolynomial::from_real(&[0.0]).is_zero());
        assert_eq!(ComplexPolynomial::zero().degree(), None);
    }

    #[test]
    fn shift_expands_binomially() {
        // (z+2)^2 + (z+2) = z^2 + 5z + 6
        let p = ComplexPolynomial::from_real(&[0.0, 1.0, 1.0]);
        assert_eq!(p.shift(c(2.0)), ComplexPolynomial::from_real(&[6.0, 5.0, 1.0]));
    }

    #[test]
    fn taylor_coefficients_are_scaled_derivatives() {
        let p = ComplexPolynomial::from_real(&[1.0, -3.0, 0.5, 2.0]);
        let z0 = Complex64::new(0.3, -1.1);
        let t = p.taylor_at(z0);
        assert!((t[0] - p.eval(z0)).norm() < 1e-14);
        assert!((t[1] - p.derivative().eval(z0)).norm() < 1e-13);
        assert!((t[2] - p.derivative().derivative().eval(z0) / 2.0).norm() < 1e-13);
    }

    #[test]
    fn vanishing_order_of_double_root() {
        let p = &ComplexPolynomial::linear(c(1.0)).pow(2) * &ComplexPolynomial::linear(c(-2.0));
        assert_eq!(p.vanishing_order(c(1.0), 1e-10), Some(2));
        assert_eq!(p.vanishing_order(c(-2.0), 1e-10), Some(1));
        assert_eq!(p.vanishing_order(c(0.5), 1e-10), Some(0));
    }
}
