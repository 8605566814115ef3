use std::fmt;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::{same_exponent, EXPONENT_TOL};

/// One term `c * t^-p * log^j t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticTerm {
    pub p: Complex64,
    pub log: usize,
    pub c: Complex64,
}

/// A finite sum of terms `c t^-p log^j t`, implicitly multiplied by the cut-off `omega`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticElement {
    terms: Vec<AsymptoticTerm>,
}

impl AsymptoticElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(p: Complex64, log: usize, c: Complex64) -> Self {
        let mut e = Self::zero();
        e.push(p, log, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = AsymptoticTerm>) -> Self {
        let mut e = Self::zero();
        for t in terms {
            e.push(t.p, t.log, t.c);
        }
        e
    }

    /// Add `c t^-p log^log t`, merging with an existing term of the same `(p, log)`.
    pub fn push(&mut self, p: Complex64, log: usize, c: Complex64) {
        if let Some(t) = self
            .terms
            .iter_mut()
            .find(|t| t.log == log && same_exponent(t.p, p))
        {
            t.c += c;
        } else {
            self.terms.push(AsymptoticTerm { p, log, c });
        }
    }

    pub fn terms(&self) -> &[AsymptoticTerm] {
        &self.terms
    }

    pub fn coefficient(&self, p: Complex64, log: usize) -> Complex64 {
        self.terms
            .iter()
            .filter(|t| t.log == log && same_exponent(t.p, p))
            .map(|t| t.c)
            .sum()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for t in &other.terms {
            out.push(t.p, t.log, t.c);
        }
        out
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|t| AsymptoticTerm { c: t.c * s, ..*t })
                .collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.terms.iter().map(|t| t.c.norm()).fold(0.0, f64::max)
    }

    /// Drop terms with `|c| <= abs`.
    pub fn pruned(&self, abs: f64) -> Self {
        Self {
            terms: self.terms.iter().filter(|t| t.c.norm() > abs).copied().collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.c.norm() == 0.0)
    }

    /// Value of the log-polynomial part (without the cut-off) at `t > 0`.
    pub fn eval(&self, t: f64) -> Complex64 {
        let lt = t.ln();
        self.terms
            .iter()
            .map(|term| term.c * (-term.p * lt).exp() * lt.powi(term.log as i32))
            .sum()
    }

    /// Terms sorted in the canonical coordinate order.
    pub fn sorted_terms(&self) -> Vec<AsymptoticTerm> {
        let keys: Vec<Complex64> = self.terms.iter().map(|t| t.p).collect();
        let groups = imag_groups(&keys);
        let mut idx: Vec<usize> = (0..self.terms.len()).collect();
        idx.sort_by(|&a, &b| {
            (groups[a], -keys[a].re, self.terms[a].log)
                .partial_cmp(&(groups[b], -keys[b].re, self.terms[b].log))
                .unwrap()
        });
        idx.into_iter().map(|i| self.terms[i]).collect()
    }
}

impl fmt::Display for AsymptoticElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sorted_terms();
        if terms.iter().all(|t| t.c.norm() == 0.0) {
            return write!(f, "omega * 0");
        }
        write!(f, "omega * (")?;
        let mut first = true;
        for t in terms.iter().filter(|t| t.c.norm() != 0.0) {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({})", crate::mellin::fmt_complex(t.c))?;
            if t.p.norm() != 0.0 {
                write!(f, " t^({})", crate::mellin::fmt_complex(-t.p))?;
            }
            match t.log {
                0 => {}
                1 => write!(f, " log t")?,
                j => write!(f, " log^{j} t")?,
            }
        }
        write!(f, ")")
    }
}

/// Group labels by imaginary part: values whose imaginary parts chain within
/// tolerance share a label; labels increase with imaginary part.
pub(crate) fn imag_groups(values: &[Complex64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&a, &b| values[a].im.partial_cmp(&values[b].im).unwrap());
    let mut labels = vec![0; values.len()];
    let mut label = 0;
    for w in 0..idx.len() {
        if w > 0 {
            let (a, b) = (values[idx[w - 1]], values[idx[w]]);
            if (b.im - a.im).abs() > EXPONENT_TOL * (1.0 + a.norm().max(b.norm())) {
                label += 1;
            }
        }
        labels[idx[w]] = label;
    }
    labels
}

/// An asymptotic type: distinct exponents `p` with a log-power bound each.
///
/// Coordinates on the associated space `E_S` are the pairs `(p, j)`, exponents
/// ordered by imaginary part then decreasing real part, log power ascending.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticType {
    entries: Vec<(Complex64, usize)>,
}

impl AsymptoticType {
    /// Build from possibly repeated exponents; repeated ones keep the larger bound.
    pub fn new(entries: impl IntoIterator<Item = (Complex64, usize)>) -> Self {
        let mut merged: Vec<(Complex64, usize)> = Vec::new();
        for (p, n) in entries {
            if let Some(e) = merged.iter_mut().find(|e| same_exponent(e.0, p)) {
                e.1 = e.1.max(n);
            } else {
                merged.push((p, n));
            }
        }
        let keys: Vec<Complex64> = merged.iter().map(|e| e.0).collect();
        let groups = imag_groups(&keys);
        let mut idx: Vec<usize> = (0..merged.len()).collect();
        idx.sort_by(|&a, &b| {
            (groups[a], -keys[a].re)
                .partial_cmp(&(groups[b], -keys[b].re))
                .unwrap()
        });
        Self {
            entries: idx.into_iter().map(|i| merged[i]).collect(),
        }
    }

    pub fn entries(&self) -> &[(Complex64, usize)] {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.iter().map(|e| e.1 + 1).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// All coordinates `(p, j)` in order.
    pub fn coordinates(&self) -> Vec<(Complex64, usize)> {
        self.entries
            .iter()
            .flat_map(|&(p, n)| (0..=n).map(move |j| (p, j)))
            .collect()
    }

    pub fn index(&self, p: Complex64, log: usize) -> Option<usize> {
        let mut offset = 0;
        for &(q, n) in &self.entries {
            if same_exponent(q, p) {
                return (log <= n).then_some(offset + log);
            }
            offset += n + 1;
        }
        None
    }

    pub fn to_vector(&self, e: &AsymptoticElement) -> Result<DVector<Complex64>> {
        let mut v = DVector::zeros(self.dim());
        for t in e.terms() {
            match self.index(t.p, t.log) {
                Some(i) => v[i] += t.c,
                None if t.c.norm() == 0.0 => {}
                None => {
                    return Err(Error::InvalidInput(format!(
                        "term t^-({}) log^{} t is outside the asymptotic type",
                        t.p, t.log
                    )))
                }
            }
        }
        Ok(v)
    }

    pub fn to_element(&self, v: &DVector<Complex64>) -> AsymptoticElement {
        AsymptoticElement::from_terms(
            self.coordinates()
                .into_iter()
                .zip(v.iter())
                .filter(|(_, c)| c.norm() != 0.0)
                .map(|((p, log), &c)| AsymptoticTerm { p, log, c }),
        )
    }

    /// Human-readable coordinate names, e.g. `t^(1) log t`.
    pub fn legend(&self) -> Vec<String> {
        self.coordinates()
            .into_iter()
            .map(|(p, j)| {
                let base = if p.norm() == 0.0 {
                    "1".to_string()
                } else {
                    format!("t^({})", crate::mellin::fmt_complex(-p))
                };
                let log = match j {
                    0 => return base,
                    1 => "log t".to_string(),
                    j => format!("log^{j} t"),
                };
                if base == "1" {
                    log
                } else {
                    format!("{base} {log}")
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn push_merges_equal_keys() {
        let mut e = AsymptoticElement::zero();
        e.push(c(0.0, 0.0), 1, c(1.0, 0.0));
        e.push(c(1e-15, 0.0), 1, c(2.0, 0.0));
        e.push(c(0.0, 0.0), 0, c(5.0, 0.0));
        assert_eq!(e.terms().len(), 2);
        assert_eq!(e.coefficient(c(0.0, 0.0), 1), c(3.0, 0.0));
    }

    #[test]
    fn coordinate_order_follows_groups() {
        let s = AsymptoticType::new([
            (c(-1.0, 0.0), 1),
            (c(0.0, 0.0), 1),
            (c(-0.5, 2.0), 0),
            (c(-1.0 + 1e-14, 0.0), 0),
        ]);
        assert_eq!(s.entries().len(), 3);
        assert_eq!(s.dim(), 5);
        assert_eq!(s.index(c(0.0, 0.0), 1), Some(1));
        assert_eq!(s.index(c(-1.0, 0.0), 0), Some(2));
        assert_eq!(s.index(c(-0.5, 2.0), 0), Some(4));
        assert_eq!(s.index(c(-0.5, 2.0), 1), None);
        assert_eq!(s.legend(), vec!["1", "log t", "t^(1)", "t^(1) log t", "t^(0.5-2i)"]);
    }

    #[test]
    fn vector_round_trip() {
        let s = AsymptoticType::new([(c(0.0, 0.0), 1), (c(-1.0, 0.0), 1)]);
        let mut e = AsymptoticElement::zero();
        e.push(c(0.0, 0.0), 0, c(1.0, 0.0));
        e.push(c(-1.0, 0.0), 1, c(-1.0, 0.0));
        let v = s.to_vector(&e).unwrap();
        assert_eq!(v.len(), 4);
        assert_eq!(s.to_element(&v), e);
        let outside = AsymptoticElement::monomial(c(-2.0, 0.0), 0, c(1.0, 0.0));
        assert!(s.to_vector(&outside).is_err());
    }

    #[test]
    fn evaluates_log_terms() {
        let e = AsymptoticElement::from_terms([
            AsymptoticTerm { p: c(-1.0, 0.0), log: 1, c: c(2.0, 0.0) },
            AsymptoticTerm { p: c(0.0, 0.0), log: 0, c: c(1.0, 0.0) },
        ]);
        let t: f64 = 0.3;
        assert!((e.eval(t) - c(1.0 + 2.0 * t * t.ln(), 0.0)).norm() < 1e-14);
    }
}
