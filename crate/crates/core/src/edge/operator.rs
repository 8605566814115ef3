use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mellin::ComplexPolynomial;

/// Taylor series `a_{j alpha}(t) = sum_k a^(k)_{j alpha} t^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeTerm {
    pub j: usize,
    pub alpha: Vec<u32>,
    pub series: Vec<Complex64>,
}

/// An edge-degenerate operator `t^-mu sum a_{j alpha}(t) (t D_y)^alpha (-t d/dt)^j`
/// with `y`-independent coefficients on `R^q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeOperator {
    mu: usize,
    q: usize,
    terms: Vec<EdgeTerm>,
}

fn eta_power(eta: &[f64], alpha: &[u32]) -> f64 {
    eta.iter().zip(alpha).map(|(e, &a)| e.powi(a as i32)).product()
}

impl EdgeOperator {
    pub fn new(mu: usize, q: usize, terms: Vec<EdgeTerm>) -> Result<Self> {
        if mu == 0 {
            return Err(Error::InvalidInput("operator order must be positive".into()));
        }
        let mut merged: Vec<EdgeTerm> = Vec::new();
        for t in terms {
            if t.alpha.len() != q {
                return Err(Error::SpecInvariant(format!(
                    "alpha {:?} has length {}, expected dim_y = {q}",
                    t.alpha,
                    t.alpha.len()
                )));
            }
            let order = t.j + t.alpha.iter().map(|&a| a as usize).sum::<usize>();
            if order > mu {
                return Err(Error::SpecInvariant(format!(
                    "j + |alpha| = {order} exceeds the order {mu} (j = {}, alpha = {:?})",
                    t.j, t.alpha
                )));
            }
            if t.series.len() > mu + 1 {
                return Err(Error::SpecInvariant(format!(
                    "a_({}, {:?}) has {} Taylor coefficients, at most {} are used",
                    t.j,
                    t.alpha,
                    t.series.len(),
                    mu + 1
                )));
            }
            match merged.iter_mut().find(|m| m.j == t.j && m.alpha == t.alpha) {
                Some(m) => {
                    if m.series.len() < t.series.len() {
                        m.series.resize(t.series.len(), Complex64::default());
                    }
                    for (a, b) in m.series.iter_mut().zip(&t.series) {
                        *a += b;
                    }
                }
                None => merged.push(t),
            }
        }
        let op = Self {
            mu,
            q,
            terms: merged,
        };
        if op.cone_symbol(0).is_zero() {
            return Err(Error::InvalidInput(
                "principal conormal symbol f_0 vanishes identically".into(),
            ));
        }
        Ok(op)
    }

    pub fn mu(&self) -> usize {
        self.mu
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn terms(&self) -> &[EdgeTerm] {
        &self.terms
    }

    fn coeff(&self, t: &EdgeTerm, k: usize) -> Complex64 {
        t.series.get(k).copied().unwrap_or_default()
    }

    /// `f_l(z) = sum_j a^(l)_{j 0} z^j`.
    pub fn cone_symbol(&self, l: usize) -> ComplexPolynomial {
        let mut c = vec![Complex64::default(); self.mu + 1];
        for t in self.terms.iter().filter(|t| t.alpha.iter().all(|&a| a == 0)) {
            c[t.j] += self.coeff(t, l);
        }
        ComplexPolynomial::new(c)
    }

    /// Whether every term is `alpha`-free with constant coefficients beyond `f_0`.
    pub fn is_cone_only(&self) -> bool {
        self.terms
            .iter()
            .all(|t| t.alpha.iter().all(|&a| a == 0))
    }
}

/// A covariable with `|eta| >= 1`, where `[eta] = |eta|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EtaSample {
    pub eta: Vec<f64>,
    pub bracket: f64,
}

impl EtaSample {
    pub fn new(eta: Vec<f64>) -> Result<Self> {
        let norm = eta.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm >= 1.0 - 1e-12) {
            return Err(Error::InvalidInput(format!(
                "eta samples must satisfy |eta| >= 1, got {norm}"
            )));
        }
        Ok(Self { eta, bracket: norm })
    }

    pub fn norm(&self) -> f64 {
        self.bracket
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        Self::new(self.eta.iter().map(|x| x * lambda).collect())
    }
}

/// `f~_l(z, eta) = [eta]^(mu - l) sum_{k + |alpha| = l} sum_j a^(k)_{j alpha} eta^alpha z^j`.
pub fn edge_conormal(op: &EdgeOperator, eta: &EtaSample) -> Vec<ComplexPolynomial> {
    (0..=op.mu)
        .map(|l| {
            let mut c = vec![Complex64::default(); op.mu + 1];
            for t in &op.terms {
                let a: usize = t.alpha.iter().map(|&a| a as usize).sum();
                if a > l {
                    continue;
                }
                c[t.j] += op.coeff(t, l - a) * eta_power(&eta.eta, &t.alpha);
            }
            ComplexPolynomial::new(c).scaled(Complex64::new(eta.bracket.powi((op.mu - l) as i32), 0.0))
        })
        .collect()
}

/// `f-_l(z, eta) = |eta|^(mu - l) sum_{|alpha| = l} sum_j a_{j alpha}(0) eta^alpha z^j`.
pub fn principal_edge_conormal(op: &EdgeOperator, eta: &EtaSample) -> Vec<ComplexPolynomial> {
    let norm = eta.norm();
    (0..=op.mu)
        .map(|l| {
            let mut c = vec![Complex64::default(); op.mu + 1];
            for t in &op.terms {
                let a: usize = t.alpha.iter().map(|&a| a as usize).sum();
                if a == l {
                    c[t.j] += op.coeff(t, 0) * eta_power(&eta.eta, &t.alpha);
                }
            }
            ComplexPolynomial::new(c).scaled(Complex64::new(norm.powi((op.mu - l) as i32), 0.0))
        })
        .collect()
}

/// Reference edge operators on `R^q`, `q >= 1`.
pub mod fixtures {
    use super::{EdgeOperator, EdgeTerm};
    use num_complex::Complex64;

    fn term(j: usize, alpha: Vec<u32>, series: &[f64]) -> EdgeTerm {
        EdgeTerm {
            j,
            alpha,
            series: series.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    fn unit(q: usize, i: usize, k: u32) -> Vec<u32> {
        let mut a = vec![0; q];
        a[i] = k;
        a
    }

    fn half_space_terms(q: usize) -> Vec<EdgeTerm> {
        let mut terms = vec![
            term(2, vec![0; q], &[1.0]),
            term(1, vec![0; q], &[1.0]),
            term(0, vec![0; q], &[0.0, 0.0, 1.0]),
        ];
        terms.extend((0..q).map(|i| term(0, unit(q, i, 2), &[1.0])));
        terms
    }

    /// `1 - Delta` on the half-space `R_+ x R^q`.
    pub fn fix_e(q: usize) -> EdgeOperator {
        EdgeOperator::new(2, q, half_space_terms(q)).unwrap()
    }

    /// [`fix_e`] plus the first-order term `t D_{y_1}` (`a_{0 e_1} = 1`).
    pub fn fix_f(q: usize) -> EdgeOperator {
        let mut terms = half_space_terms(q);
        terms.push(term(0, unit(q, 0, 1), &[1.0]));
        EdgeOperator::new(2, q, terms).unwrap()
    }

    /// [`fix_f`] plus `a^(1)_{00} = 1`, a lower-order term that separates the
    /// full symbol from its principal part.
    pub fn fix_g(q: usize) -> EdgeOperator {
        let mut terms = half_space_terms(q);
        terms.push(term(0, unit(q, 0, 1), &[1.0]));
        terms.push(term(0, vec![0; q], &[0.0, 1.0]));
        EdgeOperator::new(2, q, terms).unwrap()
    }
}
