//! Cone operators on the half-axis: pole data, the `g_l` recursion, leading and
//! corrected asymptotic spaces, and the projection of `E_S` onto the latter.

pub mod asymptotics;
pub mod basis;
pub mod operator;
pub mod poles;
pub mod projection;
pub mod recursion;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use asymptotics::{AsymptoticElement, AsymptoticTerm, AsymptoticType};
pub use basis::{
    b_matrix, domain_basis, domain_element, hat_basis, hat_coordinates, pairing, theta,
    theta_inv, x_vectors, x_vectors_tol, XVectors,
};
pub use operator::{conormal_symbols, fixtures, ConeOperator};
pub use poles::{pole_set, PoleDatum};
pub use projection::{
    asymptotic_type, max_abs_diff, numerical_rank, projection_matrix, required_log_bound,
    Projection,
};
pub use recursion::{g_sequence, recursion_residual};

use crate::error::Result;
use crate::mellin::{ComplexPolynomial, RationalFunction};
use crate::tolerance::Tolerances;

/// Everything attached to one pole.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleDomain {
    pub pole: PoleDatum,
    pub b: DMatrix<Complex64>,
    /// x-vectors for levels `0..=mu_sigma`.
    pub x: Vec<XVectors>,
    pub hat_basis: Vec<AsymptoticElement>,
    pub basis: Vec<AsymptoticElement>,
    /// `max_l N^(l)_sigma`.
    pub m_sigma: usize,
    /// `{(sigma - l, m_sigma + n_sigma)}`.
    pub s_sigma: AsymptoticType,
}

impl PoleDomain {
    /// `N^(l)_sigma` for `l = 0..=mu_sigma`.
    pub fn pole_orders(&self) -> Vec<usize> {
        self.x.iter().map(|x| x.pole_order).collect()
    }

    pub fn theta_inv(&self, v: &AsymptoticElement) -> Result<AsymptoticElement> {
        theta_inv(&self.pole, &self.x, v)
    }

    pub fn theta(&self, v: &AsymptoticElement) -> AsymptoticElement {
        theta(&self.pole, v)
    }

    /// `zeta = B delta` for the Taylor coefficients `delta_0..delta_n` of the
    /// Mellin data at `sigma`.
    pub fn zeta(&self, delta: &[Complex64]) -> DVector<Complex64> {
        let n = self.pole.n_sigma + 1;
        let d = DVector::from_fn(n, |i, _| delta.get(i).copied().unwrap_or_default());
        &self.b * d
    }

    /// Closed-form level-`l` coefficients `<zeta, x^(l)_j>`, `j = 0..=N + n`.
    pub fn level_coefficients(&self, level: usize, zeta: &DVector<Complex64>) -> Vec<Complex64> {
        self.x.get(level).map(|x| x.pair(zeta)).unwrap_or_default()
    }
}

/// The assembled description of the maximal domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DomainDescription {
    pub mu: usize,
    pub f: Vec<ComplexPolynomial>,
    /// `g_0 .. g_{mu-1}`.
    pub g: Vec<RationalFunction>,
    pub poles: Vec<PoleDomain>,
    /// Asymptotic type with the smallest uniform log bound containing the corrected space.
    pub s: AsymptoticType,
    pub log_bound: usize,
    /// Relative residual of the recursion identity for the computed `g`.
    pub recursion_residual: f64,
}

impl DomainDescription {
    pub fn dim(&self) -> usize {
        self.poles.iter().map(|p| p.pole.dim()).sum()
    }

    /// All corrected basis elements, pole by pole.
    pub fn basis(&self) -> Vec<AsymptoticElement> {
        self.poles.iter().flat_map(|p| p.basis.iter().cloned()).collect()
    }

    fn parts(&self) -> Vec<(&PoleDatum, &[XVectors])> {
        self.poles.iter().map(|p| (&p.pole, p.x.as_slice())).collect()
    }

    /// Projection onto the corrected space; `log_bound` enlarges `S` if given.
    pub fn projection(&self, log_bound: Option<usize>) -> Result<Projection> {
        projection_matrix(&self.parts(), log_bound)
    }
}

/// Run the full pipeline for a cone operator.
pub fn assemble_domain(op: &ConeOperator, tol: &Tolerances) -> Result<DomainDescription> {
    from_conormal(op.mu(), &op.conormal_symbols(), tol)
}

/// Run the pipeline from conormal symbols `f_0 .. f_mu` directly.
pub fn from_conormal(
    mu: usize,
    f: &[ComplexPolynomial],
    tol: &Tolerances,
) -> Result<DomainDescription> {
    let poles = pole_set(&f[0], mu, tol)?;
    let g = g_sequence(f, mu.saturating_sub(1));
    let residual = recursion_residual(f, &g);
    let mut domains = Vec::with_capacity(poles.len());
    for pd in poles {
        let b = b_matrix(&pd)?;
        let x = (0..=pd.mu_sigma)
            .map(|l| x_vectors_tol(&pd, &g[l], l, tol.zero))
            .collect::<Result<Vec<_>>>()?;
        let m_sigma = x.iter().map(|x| x.pole_order).max().unwrap_or(0);
        let s_sigma = asymptotic_type(&[&pd], m_sigma + pd.n_sigma);
        domains.push(PoleDomain {
            hat_basis: hat_basis(&pd),
            basis: domain_basis(&pd, &x),
            b,
            x,
            m_sigma,
            s_sigma,
            pole: pd,
        });
    }
    let parts: Vec<(&PoleDatum, &[XVectors])> =
        domains.iter().map(|p| (&p.pole, p.x.as_slice())).collect();
    let log_bound = required_log_bound(&parts);
    let s = asymptotic_type(&parts.iter().map(|p| p.0).collect::<Vec<_>>(), log_bound);
    Ok(DomainDescription {
        mu,
        f: f.to_vec(),
        g,
        poles: domains,
        s,
        log_bound,
        recursion_residual: residual,
    })
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn check_projection(q: &DMatrix<Complex64>, s: &AsymptoticType, basis: &[AsymptoticElement]) {
        assert!(max_abs_diff(&(q * q), q) < 1e-10);
        for e in basis {
            let v = s.to_vector(e).unwrap();
            assert!((q * &v - &v).camax() < 1e-10);
        }
        assert_eq!(numerical_rank(q, 1e-10), basis.len());
    }

    #[test]
    fn fix_a_domain() {
        let dd = assemble_domain(&fix_a(), &Tolerances::default()).unwrap();
        assert_eq!(dd.dim(), 2);
        let basis = dd.basis();
        assert_eq!(basis[0], AsymptoticElement::monomial(c(0.0), 0, c(1.0)));
        assert_eq!(basis[1], AsymptoticElement::monomial(c(-1.0), 0, c(1.0)));
        let p = dd.projection(Some(1)).unwrap();
        assert_eq!(p.legend(), vec!["1", "log t", "t^(1)", "t^(1) log t"]);
        let mut expect = DMatrix::<Complex64>::zeros(4, 4);
        expect[(0, 0)] = c(1.0);
        expect[(2, 2)] = c(1.0);
        assert!(max_abs_diff(&p.q, &expect) < 1e-12);
        assert!(dd.projection(None).unwrap().q.nrows() == 2);
    }

    #[test]
    fn fix_b_domain() {
        let dd = assemble_domain(&fix_b(), &Tolerances::default()).unwrap();
        assert_eq!(dd.poles.len(), 1);
        let pd = &dd.poles[0];
        assert_eq!(pd.basis.len(), 2);
        assert_eq!(pd.hat_basis.len(), 2);
        let p = dd.projection(None).unwrap();
        check_projection(&p.q, &p.s, &dd.basis());
    }

    #[test]
    fn fix_c_projection_matches_hand_trace() {
        let dd = assemble_domain(&fix_c(), &Tolerances::default()).unwrap();
        assert_eq!(dd.log_bound, 1);
        let p = dd.projection(None).unwrap();
        assert_eq!(p.legend(), vec!["1", "log t", "t^(1)", "t^(1) log t"]);
        let mut expect = DMatrix::<Complex64>::zeros(4, 4);
        expect[(0, 0)] = c(1.0);
        expect[(3, 0)] = c(-1.0);
        expect[(2, 2)] = c(1.0);
        assert!(max_abs_diff(&p.q, &expect) < 1e-9, "{}", p.q);
        check_projection(&p.q, &p.s, &dd.basis());
    }

    #[test]
    fn no_poles_gives_trivial_domain() {
        let op = ConeOperator::from_real(2, &[(0, &[3.0]), (1, &[0.0, 1.0])]).unwrap();
        let dd = assemble_domain(&op, &Tolerances::default()).unwrap();
        assert_eq!(dd.dim(), 0);
        assert_eq!(dd.projection(None).unwrap().q.nrows(), 0);
    }

    #[test]
    fn single_simple_pole_without_corrections() {
        // f0 = z + 0.7, mu = 2: sigma = -0.7 with mu_sigma = 0
        let op = ConeOperator::from_real(2, &[(0, &[0.7, 2.0]), (1, &[1.0, 5.0])]).unwrap();
        let dd = assemble_domain(&op, &Tolerances::default()).unwrap();
        assert_eq!(dd.poles[0].pole.mu_sigma, 0);
        let p = dd.projection(None).unwrap();
        assert_eq!(p.q, DMatrix::from_element(1, 1, c(1.0)));
    }

    #[test]
    fn theta_round_trip_on_fixtures() {
        for op in [fix_a(), fix_b(), fix_c()] {
            let dd = assemble_domain(&op, &Tolerances::default()).unwrap();
            for pd in &dd.poles {
                for (h, e) in pd.hat_basis.iter().zip(&pd.basis) {
                    assert_eq!(&pd.theta(e), h);
                    assert_eq!(&pd.theta_inv(h).unwrap(), e);
                }
            }
        }
    }
}
