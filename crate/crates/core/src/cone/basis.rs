use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::asymptotics::AsymptoticElement;
use super::poles::PoleDatum;
use crate::error::{Error, Result};
use crate::mellin::{laurent_at_tol, RationalFunction, TAU_ZERO};
use crate::tolerance::same_exponent;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Bilinear pairing `sum_k a_k b_k`.
pub fn pairing(a: &DVector<Complex64>, b: &DVector<Complex64>) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

/// Basis `t^-sigma log^j t`, `j = 0..=n_sigma`, of the leading space.
pub fn hat_basis(pd: &PoleDatum) -> Vec<AsymptoticElement> {
    (0..=pd.n_sigma)
        .map(|j| AsymptoticElement::monomial(pd.sigma, j, Complex64::new(1.0, 0.0)))
        .collect()
}

/// `b_jk = (-1)^j r_{j+k} / j!` for `j + k <= n_sigma`, zero otherwise.
pub fn b_matrix(pd: &PoleDatum) -> Result<DMatrix<Complex64>> {
    let n = pd.n_sigma;
    let b = DMatrix::from_fn(n + 1, n + 1, |j, k| {
        if j + k <= n {
            pd.r[j + k] * (if j % 2 == 0 { 1.0 } else { -1.0 }) / factorial(j)
        } else {
            Complex64::default()
        }
    });
    let det = b.determinant().norm();
    let scale = pd.r.iter().map(|c| c.norm()).fold(0.0, f64::max).powi(n as i32 + 1);
    if !(det > TAU_ZERO * scale) {
        return Err(Error::SingularB {
            sigma: pd.sigma,
            det,
        });
    }
    Ok(b)
}

/// The vectors `x^(l)_{sigma,j}`, `j = 0..=N + n_sigma`, for one level `l`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct XVectors {
    pub level: usize,
    /// Pole order `N^(l)_sigma` of `g_l` at `sigma` (0 when holomorphic).
    pub pole_order: usize,
    pub vectors: Vec<DVector<Complex64>>,
}

impl XVectors {
    /// Level coefficients `<a, x_j>` for `j = 0..=N + n_sigma`.
    pub fn pair(&self, a: &DVector<Complex64>) -> Vec<Complex64> {
        self.vectors.iter().map(|x| pairing(a, x)).collect()
    }
}

/// x-vectors of level `l` built from the Laurent coefficients of `g_l` at `sigma`.
///
/// `<e_k, x_j> = (-1)^(j+k) k!/j! g_{k-j}` whenever `k - j >= -N`, else 0.
pub fn x_vectors(pd: &PoleDatum, g: &RationalFunction, level: usize) -> Result<XVectors> {
    x_vectors_tol(pd, g, level, TAU_ZERO)
}

pub fn x_vectors_tol(
    pd: &PoleDatum,
    g: &RationalFunction,
    level: usize,
    zero_tol: f64,
) -> Result<XVectors> {
    let n = pd.n_sigma;
    if level == 0 {
        let vectors = (0..=n)
            .map(|j| {
                let mut e = DVector::zeros(n + 1);
                e[j] = Complex64::new(1.0, 0.0);
                e
            })
            .collect();
        return Ok(XVectors {
            level,
            pole_order: 0,
            vectors,
        });
    }
    let laurent = laurent_at_tol(g, pd.sigma, n as i64, zero_tol)?;
    let big_n = laurent.pole_order();
    let vectors = (0..=big_n + n)
        .map(|j| {
            DVector::from_fn(n + 1, |k, _| {
                let d = k as i64 - j as i64;
                if d < -(big_n as i64) {
                    return Complex64::default();
                }
                let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
                laurent.coeff(d) * (sign * factorial(k) / factorial(j))
            })
        })
        .collect();
    Ok(XVectors {
        level,
        pole_order: big_n,
        vectors,
    })
}

/// The element of the corrected space paired with coefficient vector `a`:
/// `sum_l sum_j <a, x^(l)_j> t^-(sigma - l) log^j t`.
pub fn domain_element(pd: &PoleDatum, xs: &[XVectors], a: &DVector<Complex64>) -> AsymptoticElement {
    let mut e = AsymptoticElement::zero();
    for x in xs {
        let p = pd.sigma - x.level as f64;
        for (j, c) in x.pair(a).into_iter().enumerate() {
            if c.norm() != 0.0 {
                e.push(p, j, c);
            }
        }
    }
    e
}

/// Basis of the corrected space, indexed by `a = e_0 .. e_{n_sigma}`.
///
/// `xs` must contain the levels `0..=mu_sigma`.
pub fn domain_basis(pd: &PoleDatum, xs: &[XVectors]) -> Vec<AsymptoticElement> {
    (0..=pd.n_sigma)
        .map(|i| {
            let mut a = DVector::zeros(pd.n_sigma + 1);
            a[i] = Complex64::new(1.0, 0.0);
            domain_element(pd, xs, &a)
        })
        .collect()
}

/// Coefficient vector of `v` in the leading basis.
pub fn hat_coordinates(pd: &PoleDatum, v: &AsymptoticElement) -> Result<DVector<Complex64>> {
    let mut a = DVector::zeros(pd.n_sigma + 1);
    let scale = v.max_abs();
    for t in v.terms() {
        if same_exponent(t.p, pd.sigma) && t.log <= pd.n_sigma {
            a[t.log] += t.c;
        } else if t.c.norm() > TAU_ZERO * scale {
            return Err(Error::NotInHatBasis {
                sigma: pd.sigma,
                detail: format!("term with exponent {} and log power {}", t.p, t.log),
            });
        }
    }
    Ok(a)
}

/// Inverse of the leading-level restriction: lifts a leading element to the corrected space.
pub fn theta_inv(pd: &PoleDatum, xs: &[XVectors], v: &AsymptoticElement) -> Result<AsymptoticElement> {
    Ok(domain_element(pd, xs, &hat_coordinates(pd, v)?))
}

/// Restriction of a corrected-space element to its terms at exponent `sigma`.
pub fn theta(pd: &PoleDatum, v: &AsymptoticElement) -> AsymptoticElement {
    AsymptoticElement::from_terms(
        v.terms()
            .iter()
            .filter(|t| same_exponent(t.p, pd.sigma))
            .copied(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::operator::fixtures::*;
    use crate::cone::recursion::g_sequence;
    use crate::mellin::ComplexPolynomial;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn pole(sigma: f64, r: &[f64], mu_sigma: usize) -> PoleDatum {
        PoleDatum {
            sigma: c(sigma),
            n_sigma: r.len() - 1,
            mu_sigma,
            r: r.iter().map(|&x| c(x)).collect(),
        }
    }

    #[test]
    fn hat_basis_monomials() {
        let b = hat_basis(&pole(0.0, &[0.0, 1.0], 1));
        assert_eq!(b.len(), 2);
        assert_eq!(b[1].coefficient(c(0.0), 1), c(1.0));
        let b = hat_basis(&pole(-1.0, &[-1.0], 0));
        assert_eq!(b[0].coefficient(c(-1.0), 0), c(1.0));
    }

    #[test]
    fn b_matrix_entries() {
        let b = b_matrix(&pole(0.0, &[0.0, 1.0], 1)).unwrap();
        assert_eq!(b, DMatrix::from_row_slice(2, 2, &[c(0.0), c(1.0), c(-1.0), c(0.0)]));
        let b = b_matrix(&pole(0.0, &[2.0, 3.0], 1)).unwrap();
        assert_eq!(b, DMatrix::from_row_slice(2, 2, &[c(2.0), c(3.0), c(-3.0), c(0.0)]));
        let b = b_matrix(&pole(0.0, &[0.5], 0)).unwrap();
        assert_eq!(b[(0, 0)], c(0.5));
        assert!(matches!(
            b_matrix(&pole(0.0, &[1.0, 0.0], 1)),
            Err(Error::SingularB { .. })
        ));
    }

    #[test]
    fn level_zero_vectors_are_unit() {
        let pd = pole(0.0, &[0.0, 0.0, 1.0], 1);
        let x = x_vectors(&pd, &RationalFunction::one(), 0).unwrap();
        assert_eq!(x.vectors.len(), 3);
        for (j, v) in x.vectors.iter().enumerate() {
            for k in 0..3 {
                assert_eq!(v[k], c(if j == k { 1.0 } else { 0.0 }));
            }
        }
    }

    #[test]
    fn fix_c_vectors_and_basis() {
        let f = fix_c().conormal_symbols();
        let g = g_sequence(&f, 1);
        let pd = pole(0.0, &[1.0], 1);
        let x1 = x_vectors(&pd, &g[1], 1).unwrap();
        assert_eq!(x1.pole_order, 1);
        assert!((x1.vectors[0][0] - c(1.0)).norm() < 1e-12);
        assert!((x1.vectors[1][0] - c(-1.0)).norm() < 1e-12);
        let x0 = x_vectors(&pd, &g[0], 0).unwrap();
        let basis = domain_basis(&pd, &[x0, x1]);
        let e = &basis[0];
        assert!((e.coefficient(c(0.0), 0) - c(1.0)).norm() < 1e-12);
        assert!((e.coefficient(c(-1.0), 0) - c(1.0)).norm() < 1e-12);
        assert!((e.coefficient(c(-1.0), 1) - c(-1.0)).norm() < 1e-12);
        assert_eq!(e.terms().len(), 3);
    }

    #[test]
    fn holomorphic_vanishing_g_has_zero_higher_vectors() {
        // g(z) = z vanishes at sigma = 0
        let g = RationalFunction::from_poly(ComplexPolynomial::from_real(&[0.0, 1.0]));
        let pd = pole(0.0, &[1.0], 1);
        let x = x_vectors(&pd, &g, 1).unwrap();
        assert_eq!(x.pole_order, 0);
        assert_eq!(x.vectors.len(), 1);
        assert_eq!(x.vectors[0][0], c(0.0));
    }

    #[test]
    fn theta_round_trip() {
        let f = fix_c().conormal_symbols();
        let g = g_sequence(&f, 1);
        let pd = pole(0.0, &[1.0], 1);
        let xs = vec![x_vectors(&pd, &g[0], 0).unwrap(), x_vectors(&pd, &g[1], 1).unwrap()];
        let one = AsymptoticElement::monomial(c(0.0), 0, c(2.0));
        let lifted = theta_inv(&pd, &xs, &one).unwrap();
        assert!((lifted.coefficient(c(-1.0), 1) - c(-2.0)).norm() < 1e-12);
        assert_eq!(theta(&pd, &lifted), one);
        let bad = AsymptoticElement::monomial(c(0.0), 1, c(1.0));
        assert!(matches!(theta_inv(&pd, &xs, &bad), Err(Error::NotInHatBasis { .. })));
    }
}
