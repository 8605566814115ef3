//! TOML operator specifications.
//!
//! ```toml
//! kind = "edge"
//! mu = 2
//! dim_y = 1
//!
//! [[coefficients]]
//! j = 2
//! alpha = [0]
//! taylor = [[1.0, 0.0]]
//! ```
//!
//! Complex numbers are `[re, im]` pairs; `taylor[k]` is the `k`-th Taylor
//! coefficient at `t = 0`.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::ConeOperator;
use crate::edge::{EdgeOperator, EdgeTerm};
use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SpecKind {
    Cone,
    Edge,
}

impl SpecKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SpecKind::Cone => "cone",
            SpecKind::Edge => "edge",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientSpec {
    pub j: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<u32>>,
    pub taylor: Vec<Complex64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSpec {
    pub kind: SpecKind,
    pub mu: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_y: Option<usize>,
    #[serde(default)]
    pub coefficients: Vec<CoefficientSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

/// A validated operator.
#[derive(Clone, Debug, PartialEq)]
pub enum Operator {
    Cone(ConeOperator),
    Edge(EdgeOperator),
}

impl Operator {
    pub fn kind(&self) -> SpecKind {
        match self {
            Operator::Cone(_) => SpecKind::Cone,
            Operator::Edge(_) => SpecKind::Edge,
        }
    }

    /// The cone operator seen by the cone commands; for edge operators this is
    /// the `alpha = 0` part.
    pub fn cone_part(&self) -> Result<ConeOperator> {
        match self {
            Operator::Cone(op) => Ok(op.clone()),
            Operator::Edge(op) => {
                let mu = op.mu();
                let rows: Vec<(usize, Vec<Complex64>)> = (0..=mu)
                    .map(|j| (j, (0..=mu).map(|l| op.cone_symbol(l).coeff(j)).collect()))
                    .collect();
                ConeOperator::new(mu, &rows)
            }
        }
    }
}

fn trimmed(series: impl IntoIterator<Item = Complex64>) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = series.into_iter().collect();
    while v.last().is_some_and(|c| *c == Complex64::default()) {
        v.pop();
    }
    v
}

impl OperatorSpec {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::SpecParse(e.to_string().trim_end().to_string()))
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::SpecParse(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::SpecParse(m) => Error::SpecParse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::SpecParse(e.to_string()))
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tolerances.unwrap_or_default()
    }

    pub fn from_cone(op: &ConeOperator) -> Self {
        let mu = op.mu();
        let coefficients = (0..=mu)
            .filter_map(|j| {
                let taylor = trimmed((0..=mu).map(|k| op.taylor(j, k)));
                (!taylor.is_empty()).then_some(CoefficientSpec { j, alpha: None, taylor })
            })
            .collect();
        Self {
            kind: SpecKind::Cone,
            mu,
            dim_y: None,
            coefficients,
            tolerances: None,
        }
    }

    pub fn from_edge(op: &EdgeOperator) -> Self {
        let coefficients = op
            .terms()
            .iter()
            .map(|t| CoefficientSpec {
                j: t.j,
                alpha: Some(t.alpha.clone()),
                taylor: t.series.clone(),
            })
            .collect();
        Self {
            kind: SpecKind::Edge,
            mu: op.mu(),
            dim_y: Some(op.q()),
            coefficients,
            tolerances: None,
        }
    }

    fn check_tolerances(&self) -> Result<()> {
        let Some(t) = self.tolerances else { return Ok(()) };
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::SpecInvariant(format!("tolerance `{name}` must be positive, got {v}")))
            }
        };
        if let Some(c) = t.cluster {
            positive("cluster", c)?;
        }
        positive("zero", t.zero)?;
        positive("line", t.line)
    }

    /// Validate against the schema invariants and build the operator.
    pub fn build(&self) -> Result<Operator> {
        if self.mu == 0 {
            return Err(Error::SpecInvariant("mu must be a positive integer".into()));
        }
        self.check_tolerances()?;
        let mu = self.mu;
        for (i, c) in self.coefficients.iter().enumerate() {
            let order = c.j + c.alpha.iter().flatten().map(|&a| a as usize).sum::<usize>();
            if order > mu {
                return Err(Error::SpecInvariant(format!(
                    "coefficients[{i}]: j + |alpha| = {order} exceeds mu = {mu}"
                )));
            }
            if c.taylor.len() > mu + 1 {
                return Err(Error::SpecInvariant(format!(
                    "coefficients[{i}]: taylor has {} entries, at most mu + 1 = {} allowed",
                    c.taylor.len(),
                    mu + 1
                )));
            }
        }
        let invariant = |e: Error| match e {
            Error::InvalidInput(m) => Error::SpecInvariant(m),
            other => other,
        };
        match self.kind {
            SpecKind::Cone => {
                if self.dim_y.is_some() {
                    return Err(Error::SpecInvariant("dim_y is only valid for kind = \"edge\"".into()));
                }
                let mut rows = Vec::with_capacity(self.coefficients.len());
                for (i, c) in self.coefficients.iter().enumerate() {
                    if c.alpha.iter().flatten().any(|&a| a != 0) {
                        return Err(Error::SpecInvariant(format!(
                            "coefficients[{i}]: nonzero alpha in a cone spec"
                        )));
                    }
                    rows.push((c.j, c.taylor.clone()));
                }
                ConeOperator::new(mu, &rows).map(Operator::Cone).map_err(invariant)
            }
            SpecKind::Edge => {
                let q = match self.dim_y {
                    Some(q) if q >= 1 => q,
                    _ => return Err(Error::SpecInvariant("edge specs need dim_y >= 1".into())),
                };
                let terms = self
                    .coefficients
                    .iter()
                    .map(|c| EdgeTerm {
                        j: c.j,
                        alpha: c.alpha.clone().unwrap_or_else(|| vec![0; q]),
                        series: c.taylor.clone(),
                    })
                    .collect();
                EdgeOperator::new(mu, q, terms).map(Operator::Edge).map_err(invariant)
            }
        }
    }
}

/// Read, parse and validate a spec file.
pub fn parse_spec(path: impl AsRef<Path>) -> Result<(OperatorSpec, Operator)> {
    let spec = OperatorSpec::from_path(path)?;
    let op = spec.build()?;
    Ok((spec, op))
}
