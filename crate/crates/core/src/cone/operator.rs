use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mellin::ComplexPolynomial;

/// A Fuchs-type operator `t^-mu sum_j a_j(t) (-t d/dt)^j` near `t = 0`,
/// given by the Taylor coefficients `a_j^(k)` for `j, k = 0..=mu`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeOperator {
    mu: usize,
    /// `taylor[j][k]` is the k-th Taylor coefficient of `a_j` at 0.
    taylor: Vec<Vec<Complex64>>,
}

impl ConeOperator {
    /// Build from `(j, [a_j^(0), a_j^(1), ...])` records; missing entries are zero.
    pub fn new(mu: usize, coefficients: &[(usize, Vec<Complex64>)]) -> Result<Self> {
        if mu == 0 {
            return Err(Error::InvalidInput("operator order must be positive".into()));
        }
        let mut taylor = vec![vec![Complex64::default(); mu + 1]; mu + 1];
        for (j, series) in coefficients {
            if *j > mu {
                return Err(Error::SpecInvariant(format!(
                    "coefficient index j = {j} exceeds the order {mu}"
                )));
            }
            if series.len() > mu + 1 {
                return Err(Error::SpecInvariant(format!(
                    "a_{j} has {} Taylor coefficients, at most {} are used",
                    series.len(),
                    mu + 1
                )));
            }
            for (k, c) in series.iter().enumerate() {
                taylor[*j][k] += *c;
            }
        }
        let op = Self { mu, taylor };
        if op.conormal_symbol(0).is_zero() {
            return Err(Error::InvalidInput(
                "principal conormal symbol f_0 vanishes identically".into(),
            ));
        }
        Ok(op)
    }

    /// Same as [`new`](Self::new) with real coefficients.
    pub fn from_real(mu: usize, coefficients: &[(usize, &[f64])]) -> Result<Self> {
        let c: Vec<(usize, Vec<Complex64>)> = coefficients
            .iter()
            .map(|(j, s)| (*j, s.iter().map(|&x| Complex64::new(x, 0.0)).collect()))
            .collect();
        Self::new(mu, &c)
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn taylor(&self, j: usize, k: usize) -> Complex64 {
        self.taylor[j][k]
    }

    /// `f_l(z) = sum_j a_j^(l) z^j`.
    pub fn conormal_symbol(&self, l: usize) -> ComplexPolynomial {
        ComplexPolynomial::new((0..=self.mu).map(|j| self.taylor[j][l]).collect())
    }

    /// All conormal symbols `f_0 .. f_mu`.
    pub fn conormal_symbols(&self) -> Vec<ComplexPolynomial> {
        (0..=self.mu).map(|l| self.conormal_symbol(l)).collect()
    }

    /// Random operator with complex Taylor coefficients and `deg f_0 = mu`.
    ///
    /// Rejection-samples until no root of `f_0` comes within `margin` of the
    /// weight lines `Re z = 1/2` and `Re z = 1/2 - mu`, and roots are pairwise
    /// at least `margin` apart, so the operator is well-conditioned.
    pub fn random<R: Rng>(rng: &mut R, mu: usize, margin: f64) -> Self {
        loop {
            let mut taylor = vec![vec![Complex64::default(); mu + 1]; mu + 1];
            for row in taylor.iter_mut() {
                for c in row.iter_mut() {
                    *c = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                }
            }
            // Place the roots of f_0 deliberately inside a box around the strip.
            let roots: Vec<Complex64> = (0..mu)
                .map(|_| {
                    Complex64::new(
                        rng.random_range(-(mu as f64) - 0.5..1.5),
                        rng.random_range(-1.5..1.5),
                    )
                })
                .collect();
            let lead = Complex64::new(rng.random_range(0.5..2.0), rng.random_range(-0.5..0.5));
            let f0 = roots
                .iter()
                .fold(ComplexPolynomial::constant(lead), |acc, &r| {
                    &acc * &ComplexPolynomial::linear(r)
                });
            for (j, row) in taylor.iter_mut().enumerate() {
                row[0] = f0.coeff(j);
            }
            let lines = [0.5, 0.5 - mu as f64];
            let near_line = roots
                .iter()
                .any(|r| lines.iter().any(|l| (r.re - l).abs() < margin));
            let crowded = roots.iter().enumerate().any(|(i, a)| {
                roots[i + 1..].iter().any(|b| (a - b).norm() < margin)
            });
            // Resonances (roots differing by integers) are fine; near-resonances are not.
            let near_resonant = roots.iter().any(|a| {
                roots.iter().any(|b| {
                    let d = a - b;
                    let k = d.re.round();
                    k != 0.0 && ((d.re - k).abs() + d.im.abs()) < margin
                })
            });
            if near_line || crowded || near_resonant {
                continue;
            }
            return Self { mu, taylor };
        }
    }
}

/// The conormal symbols `f_0 .. f_mu` of a cone operator.
pub fn conormal_symbols(op: &ConeOperator) -> Vec<ComplexPolynomial> {
    op.conormal_symbols()
}

/// Reference operators used throughout tests, the acceptance suite and the docs.
pub mod fixtures {
    use super::ConeOperator;

    /// `a_0 = t^2, a_1 = 1, a_2 = 1`: the half-line model `1 + d^2/dt^2`.
    pub fn fix_a() -> ConeOperator {
        ConeOperator::from_real(2, &[(0, &[0.0, 0.0, 1.0]), (1, &[1.0]), (2, &[1.0])]).unwrap()
    }

    /// `a_0 = t^2, a_1 = 0, a_2 = 1`: double conormal root at 0.
    pub fn fix_b() -> ConeOperator {
        ConeOperator::from_real(2, &[(0, &[0.0, 0.0, 1.0]), (2, &[1.0])]).unwrap()
    }

    /// `a_0 = t + t^2, a_1 = 1, a_2 = 1`: first-order coupling between the poles 0 and -1.
    pub fn fix_c() -> ConeOperator {
        ConeOperator::from_real(2, &[(0, &[0.0, 1.0, 1.0]), (1, &[1.0]), (2, &[1.0])]).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    #[test]
    fn fixture_conormal_symbols() {
        let f = fix_a().conormal_symbols();
        assert_eq!(f[0], ComplexPolynomial::from_real(&[0.0, 1.0, 1.0]));
        assert!(f[1].is_zero());
        assert_eq!(f[2], ComplexPolynomial::from_real(&[1.0]));

        let f = fix_b().conormal_symbols();
        assert_eq!(f[0], ComplexPolynomial::from_real(&[0.0, 0.0, 1.0]));
        assert!(f[1].is_zero());
        assert_eq!(f[2], ComplexPolynomial::from_real(&[1.0]));

        let f = fix_c().conormal_symbols();
        assert_eq!(f[0], ComplexPolynomial::from_real(&[0.0, 1.0, 1.0]));
        assert_eq!(f[1], ComplexPolynomial::from_real(&[1.0]));
        assert_eq!(f[2], ComplexPolynomial::from_real(&[1.0]));
    }

    #[test]
    fn rejects_vanishing_principal_symbol() {
        assert!(ConeOperator::from_real(2, &[(0, &[0.0, 1.0])]).is_err());
    }

    #[test]
    fn rejects_out_of_range_index() {
        assert!(matches!(
            ConeOperator::from_real(2, &[(3, &[1.0])]),
            Err(Error::SpecInvariant(_))
        ));
        assert!(matches!(
            ConeOperator::from_real(1, &[(0, &[1.0, 1.0, 1.0])]),
            Err(Error::SpecInvariant(_))
        ));
    }
}
