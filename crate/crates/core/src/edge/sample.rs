use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kappa::kappa_matrix;
use super::operator::{edge_conormal, principal_edge_conormal, EdgeOperator, EtaSample};
use crate::cone::{from_conormal, AsymptoticElement, AsymptoticType, DomainDescription, XVectors};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

/// Per-pole data at one covariable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgePoleSample {
    pub sigma: Complex64,
    pub n_sigma: usize,
    pub mu_sigma: usize,
    /// `x~^(l)_{sigma,j}(eta)`, normalised so that `[eta]^mu x~^(0)_j = e_j`.
    pub x_tilde: Vec<XVectors>,
    /// `x-^(l)_{sigma,j}(eta)`, homogeneous of degree `-mu`.
    pub x_bar: Vec<XVectors>,
    /// Basis of the range at this covariable, paired with the leading basis.
    pub range_basis: Vec<AsymptoticElement>,
    pub principal_range_basis: Vec<AsymptoticElement>,
    /// `B_sigma` of the principal symbol at this covariable.
    pub principal_b: DMatrix<Complex64>,
}

/// The natural-domain data of an edge operator at one covariable `eta`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeDomainSample {
    pub eta: EtaSample,
    pub poles: Vec<EdgePoleSample>,
    pub s: AsymptoticType,
    /// Projection onto the range in `E_S` coordinates, before conjugation.
    pub projection_model: DMatrix<Complex64>,
    /// The same built from the principal symbols.
    pub principal_projection_model: DMatrix<Complex64>,
    /// `kappa_[eta] projection_model kappa_[eta]^-1`.
    pub projection: DMatrix<Complex64>,
    /// The projection acts as the identity on the weighted Sobolev part.
    pub k_slot_identity: bool,
}

fn scaled(xs: &[XVectors], factor: f64) -> Vec<XVectors> {
    xs.iter()
        .map(|x| XVectors {
            level: x.level,
            pole_order: x.pole_order,
            vectors: x.vectors.iter().map(|v| v * Complex64::new(factor, 0.0)).collect(),
        })
        .collect()
}

/// Smallest uniform log bound covering both the full and principal data at `eta`.
pub fn sample_log_bound(op: &EdgeOperator, eta: &EtaSample, tol: &Tolerances) -> Result<usize> {
    let full = from_conormal(op.mu(), &edge_conormal(op, eta), tol)?;
    let principal = from_conormal(op.mu(), &principal_edge_conormal(op, eta), tol)?;
    Ok(full.log_bound.max(principal.log_bound))
}

/// Run the cone pipeline on `f~(., eta)` and `f-(., eta)` and assemble the
/// sample. `log_bound` fixes the log bound of `S` (so that samples share
/// coordinates); defaults to the bound needed at `eta`.
pub fn edge_domain_sample(
    op: &EdgeOperator,
    eta: &EtaSample,
    tol: &Tolerances,
    log_bound: Option<usize>,
) -> Result<EdgeDomainSample> {
    let mu = op.mu();
    let full: DomainDescription = from_conormal(mu, &edge_conormal(op, eta), tol)?;
    let principal: DomainDescription = from_conormal(mu, &principal_edge_conormal(op, eta), tol)?;
    if full.poles.len() != principal.poles.len() {
        return Err(Error::InvalidInput(
            "full and principal edge symbols produced different pole sets".into(),
        ));
    }
    let bound = log_bound.unwrap_or(full.log_bound.max(principal.log_bound));
    let pm = full.projection(Some(bound))?;
    let pbar = principal.projection(Some(bound))?;
    let brk = eta.bracket;
    let kappa = kappa_matrix(brk, &pm.s);
    let kappa_inv = kappa.inverse(&pm.s);
    let projection = &kappa.matrix * &pm.q * &kappa_inv.matrix;

    let norm = brk.powi(-(mu as i32));
    let poles = full
        .poles
        .iter()
        .zip(&principal.poles)
        .map(|(a, b)| EdgePoleSample {
            sigma: a.pole.sigma,
            n_sigma: a.pole.n_sigma,
            mu_sigma: a.pole.mu_sigma,
            x_tilde: scaled(&a.x, norm),
            x_bar: scaled(&b.x, eta.norm().powi(-(mu as i32))),
            range_basis: a.basis.clone(),
            principal_range_basis: b.basis.clone(),
            principal_b: b.b.clone(),
        })
        .collect();
    Ok(EdgeDomainSample {
        eta: eta.clone(),
        poles,
        s: pm.s,
        projection_model: pm.q,
        principal_projection_model: pbar.q,
        projection,
        k_slot_identity: true,
    })
}

#[cfg(test)]
mod tests {
    use super::super::operator::fixtures::*;
    use super::*;
    use crate::cone::projection::max_abs_diff;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn fix_e_model_projection_is_eta_independent() {
        let tol = Tolerances::default();
        let mut expect = DMatrix::<Complex64>::zeros(4, 4);
        expect[(0, 0)] = c(1.0);
        expect[(2, 2)] = c(1.0);
        for eta in [vec![1.0, 0.0], vec![3.0, -7.0], vec![0.0, 400.0]] {
            let s = edge_domain_sample(&fix_e(2), &EtaSample::new(eta).unwrap(), &tol, Some(1)).unwrap();
            assert!(max_abs_diff(&s.projection_model, &expect) < 1e-12);
            let p = &s.projection;
            assert!(max_abs_diff(&(p * p), p) < 1e-12);
            // conjugation mixes log t into 1
            assert!((p[(0, 1)] + Complex64::new(s.eta.norm().ln(), 0.0)).norm() < 1e-12);
            assert_eq!(s.poles[0].range_basis[0], AsymptoticElement::monomial(c(0.0), 0, c(1.0)));
            assert_eq!(s.poles[1].range_basis[0], AsymptoticElement::monomial(c(-1.0), 0, c(1.0)));
        }
    }

    #[test]
    fn fix_f_range_basis() {
        let tol = Tolerances::default();
        let eta = EtaSample::new(vec![3.0, 4.0]).unwrap();
        let s = edge_domain_sample(&fix_f(2), &eta, &tol, None).unwrap();
        let e = &s.poles[0].range_basis[0];
        let cc = 3.0 / 5.0;
        assert!((e.coefficient(c(0.0), 0) - c(1.0)).norm() < 1e-12);
        assert!((e.coefficient(c(-1.0), 0) - c(cc)).norm() < 1e-12);
        assert!((e.coefficient(c(-1.0), 1) + c(cc)).norm() < 1e-12);
        let p2 = &s.projection * &s.projection;
        assert!(max_abs_diff(&p2, &s.projection) < 1e-10);
        // normalisation of the leading level
        let x0 = &s.poles[0].x_tilde[0].vectors[0];
        assert!((x0[0] * 25.0 - c(1.0)).norm() < 1e-12);
    }
}
