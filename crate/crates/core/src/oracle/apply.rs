use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::{AsymptoticElement, ConeOperator};
use crate::mellin::ComplexPolynomial;

/// Result of applying the Taylor-truncated operator to an asymptotic element.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetApplication {
    pub asymptotic: AsymptoticElement,
    /// Set when derivatives of the cut-off contribute; those terms live where
    /// `omega' != 0`, away from `t = 0`, and are not represented.
    pub interior_remainder: bool,
}

/// `(-t d/dt)` on the log coefficients `[c_0, c_1, ..]` of `t^-p sum_j c_j log^j t`.
fn euler(p: Complex64, coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = coeffs.iter().map(|c| p * c).collect();
    for j in 1..coeffs.len() {
        out[j - 1] -= coeffs[j] * j as f64;
    }
    out
}

fn apply_poly(f: &ComplexPolynomial, p: Complex64, coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::default(); coeffs.len()];
    let mut power = coeffs.to_vec();
    for (i, a) in f.coeffs().iter().enumerate() {
        if i > 0 {
            power = euler(p, &power);
        }
        for (o, c) in out.iter_mut().zip(&power) {
            *o += a * c;
        }
    }
    out
}

/// Apply `t^-mu sum_{k=0..mu} t^k f_k(-t d/dt)` termwise to `v`.
///
/// `f_k(-t d/dt) t^-p log^j t` is computed exactly; the factor `t^(k - mu)`
/// moves the exponent `p` to `p + mu - k`.
pub fn apply_cone_jet(op: &ConeOperator, v: &AsymptoticElement) -> JetApplication {
    let mu = op.mu();
    let f = op.conormal_symbols();
    let mut out = AsymptoticElement::zero();
    // group terms by exponent
    let mut exps: Vec<Complex64> = Vec::new();
    for t in v.terms() {
        if !exps.iter().any(|&q| crate::tolerance::same_exponent(q, t.p)) {
            exps.push(t.p);
        }
    }
    for p in exps {
        let jmax = v
            .terms()
            .iter()
            .filter(|t| crate::tolerance::same_exponent(t.p, p))
            .map(|t| t.log)
            .max()
            .unwrap_or(0);
        let coeffs: Vec<Complex64> = (0..=jmax).map(|j| v.coefficient(p, j)).collect();
        for (k, fk) in f.iter().enumerate() {
            if fk.is_zero() {
                continue;
            }
            let q = p + (mu - k) as f64;
            for (j, c) in apply_poly(fk, p, &coeffs).into_iter().enumerate() {
                if c != Complex64::default() {
                    out.push(q, j, c);
                }
            }
        }
    }
    JetApplication {
        asymptotic: out,
        interior_remainder: !v.is_zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::fixtures::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn fix_a_on_constant() {
        let one = AsymptoticElement::monomial(c(0.0), 0, c(1.0));
        let r = apply_cone_jet(&fix_a(), &one);
        assert_eq!(r.asymptotic.pruned(0.0), one);
        assert!(r.interior_remainder);
    }

    #[test]
    fn fix_b_cancels_log_terms() {
        let mut v = AsymptoticElement::monomial(c(0.0), 0, c(2.0));
        v.push(c(0.0), 1, c(-3.0));
        let r = apply_cone_jet(&fix_b(), &v).asymptotic.pruned(0.0);
        assert_eq!(r, v);
    }

    #[test]
    fn fix_c_basis_cancels_at_exponent_one() {
        let mut v = AsymptoticElement::monomial(c(0.0), 0, c(1.0));
        v.push(c(-1.0), 0, c(1.0));
        v.push(c(-1.0), 1, c(-1.0));
        let r = apply_cone_jet(&fix_c(), &v).asymptotic;
        assert!(r.terms().iter().filter(|t| t.p.re >= 0.5).all(|t| t.c.norm() < 1e-14));
        // without the correction the t^-1 term survives
        let bare = AsymptoticElement::monomial(c(0.0), 0, c(1.0));
        let r = apply_cone_jet(&fix_c(), &bare).asymptotic;
        assert!((r.coefficient(c(1.0), 0) - c(1.0)).norm() < 1e-14);
    }

    #[test]
    fn zero_maps_to_zero() {
        let r = apply_cone_jet(&fix_c(), &AsymptoticElement::zero());
        assert!(r.asymptotic.is_zero());
        assert!(!r.interior_remainder);
    }
}
