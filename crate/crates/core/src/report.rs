//! Command orchestration and reports.

use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::check::Check;
use crate::cone::{assemble_domain, numerical_rank, projection::max_abs_diff, AsymptoticElement, AsymptoticType, DomainDescription};
use crate::edge::{homogeneity_checks, EdgeDomainSample, HomogeneityReport, SlopeCheck, SweepConfig};
use crate::error::{Error, Result};
use crate::mellin::fmt_complex;
use crate::par::Execution;
use crate::spec::{Operator, OperatorSpec, SpecKind};
use crate::tolerance::Tolerances;
use crate::verify::{verify_cone, VerifyConfig, PROJECTION_TOL, RECURSION_TOL};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Analyze,
    Domain,
    Project,
    Verify,
    Edge,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Analyze => "analyze",
            Command::Domain => "domain",
            Command::Project => "project",
            Command::Verify => "verify",
            Command::Edge => "edge",
        }
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "analyze" => Command::Analyze,
            "domain" => Command::Domain,
            "project" => Command::Project,
            "verify" => Command::Verify,
            "edge" => Command::Edge,
            other => return Err(Error::InvalidInput(format!("unknown command `{other}`"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOptions {
    pub eta_rays: usize,
    pub lambda_max: f64,
    pub tol_cluster: Option<f64>,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for RunOptions {
    fn default() -> Self {
        let sweep = SweepConfig::default();
        Self {
            eta_rays: sweep.rays,
            lambda_max: *sweep.lambdas.last().unwrap(),
            tol_cluster: None,
            seed: sweep.seed,
            execution: Execution::Parallel,
        }
    }
}

/// Dense complex matrix as rows.
pub type Rows = Vec<Vec<Complex64>>;

fn rows(m: &DMatrix<Complex64>) -> Rows {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleRow {
    pub sigma: Complex64,
    pub n_sigma: usize,
    pub mu_sigma: usize,
    /// Principal part of `f0^-1`: `r_k` multiplies `(z - sigma)^-(k+1)`.
    pub r: Vec<Complex64>,
    pub tol_cluster: f64,
    pub tol_zero: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalRow {
    pub level: usize,
    pub numerator: Vec<Complex64>,
    pub denominator: Vec<Complex64>,
}

/// `c t^-p log^log t` with `p = re + i im`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRow {
    pub re: f64,
    pub im: f64,
    pub log: usize,
    pub c: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExponentRow {
    pub re: f64,
    pub im: f64,
    pub log: usize,
}

fn terms(e: &AsymptoticElement) -> Vec<TermRow> {
    e.sorted_terms()
        .into_iter()
        .map(|t| TermRow { re: t.p.re, im: t.p.im, log: t.log, c: t.c })
        .collect()
}

fn exponents(s: &AsymptoticType) -> Vec<ExponentRow> {
    s.coordinates()
        .into_iter()
        .map(|(p, log)| ExponentRow { re: p.re, im: p.im, log })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleDomainRow {
    pub sigma: Complex64,
    pub b: Rows,
    /// `N^(l)_sigma` per level.
    pub pole_orders: Vec<usize>,
    pub hat_basis: Vec<Vec<TermRow>>,
    pub basis: Vec<Vec<TermRow>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionSection {
    pub coordinates: Vec<ExponentRow>,
    pub legend: Vec<String>,
    pub q: Rows,
    pub rank: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeSampleRow {
    pub eta: Vec<f64>,
    pub projection: Rows,
    pub projection_model: Rows,
    pub range_basis: Vec<Vec<TermRow>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeSection {
    pub coordinates: Vec<ExponentRow>,
    pub homogeneity: HomogeneityReport,
    pub samples: Vec<EdgeSampleRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Command,
    pub seed: u64,
    pub spec: OperatorSpec,
    pub tolerances: Tolerances,
    pub poles: Vec<PoleRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<RationalRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<Vec<PoleDomainRow>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projection: Option<ProjectionSection>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<EdgeSection>,
    pub passed: bool,
    pub first_failure: Option<String>,
}

fn slope_check(c: &SlopeCheck) -> Check {
    Check {
        name: c.name.clone(),
        value: c.worst_slope.unwrap_or(f64::NEG_INFINITY),
        tol: c.bound,
        passed: c.passed,
    }
}

fn edge_checks(r: &HomogeneityReport) -> Vec<Check> {
    vec![
        r.idempotency.clone(),
        r.normalization.clone(),
        r.pole_consistency.clone(),
        r.homogeneity.clone(),
        r.twisted_homogeneity.clone(),
        slope_check(&r.classicality),
        slope_check(&r.order_zero),
    ]
}

fn edge_row(s: &EdgeDomainSample) -> EdgeSampleRow {
    EdgeSampleRow {
        eta: s.eta.eta.clone(),
        projection: rows(&s.projection),
        projection_model: rows(&s.projection_model),
        range_basis: s.poles.iter().flat_map(|p| p.range_basis.iter().map(terms)).collect(),
    }
}

fn pole_rows(dd: &DomainDescription, tol: &Tolerances) -> Vec<PoleRow> {
    let cluster = tol.cluster_for(&dd.f[0]);
    dd.poles
        .iter()
        .map(|p| PoleRow {
            sigma: p.pole.sigma,
            n_sigma: p.pole.n_sigma,
            mu_sigma: p.pole.mu_sigma,
            r: p.pole.r.clone(),
            tol_cluster: cluster,
            tol_zero: tol.zero,
        })
        .collect()
}

fn domain_checks(dd: &DomainDescription) -> Vec<Check> {
    vec![
        Check::at_most("recursion identity", dd.recursion_residual, RECURSION_TOL),
        Check::holds(
            "dim of leading and corrected spaces equals n_sigma + 1",
            dd.poles
                .iter()
                .all(|p| p.hat_basis.len() == p.pole.dim() && p.basis.len() == p.pole.dim()),
        ),
    ]
}

/// Run `command` on a parsed spec.
pub fn run(command: Command, spec: &OperatorSpec, opts: &RunOptions) -> Result<Report> {
    let op = spec.build()?;
    let mut tol = spec.tolerances();
    if opts.tol_cluster.is_some() {
        tol.cluster = opts.tol_cluster;
    }
    if command == Command::Edge && op.kind() != SpecKind::Edge {
        return Err(Error::KindMismatch {
            command: command.as_str().into(),
            expected: SpecKind::Edge.as_str().into(),
        });
    }
    let cone = op.cone_part()?;
    let dd = assemble_domain(&cone, &tol)?;
    let mut report = Report {
        command,
        seed: opts.seed,
        spec: spec.clone(),
        tolerances: tol,
        poles: pole_rows(&dd, &tol),
        g: None,
        domain: None,
        projection: None,
        checks: Vec::new(),
        edge: None,
        passed: true,
        first_failure: None,
    };
    let with_domain = |report: &mut Report| {
        report.g = Some(
            dd.g.iter()
                .enumerate()
                .map(|(level, g)| RationalRow {
                    level,
                    numerator: g.num().coeffs().to_vec(),
                    denominator: g.den().coeffs().to_vec(),
                })
                .collect(),
        );
        report.domain = Some(
            dd.poles
                .iter()
                .map(|p| PoleDomainRow {
                    sigma: p.pole.sigma,
                    b: rows(&p.b),
                    pole_orders: p.pole_orders(),
                    hat_basis: p.hat_basis.iter().map(terms).collect(),
                    basis: p.basis.iter().map(terms).collect(),
                })
                .collect(),
        );
    };
    match command {
        Command::Analyze => {}
        Command::Domain => {
            with_domain(&mut report);
            report.checks = domain_checks(&dd);
        }
        Command::Project => {
            let proj = dd.projection(None)?;
            let rank = numerical_rank(&proj.q, 1e-9);
            report.checks = vec![
                Check::at_most("projection idempotency", max_abs_diff(&(&proj.q * &proj.q), &proj.q), PROJECTION_TOL),
                Check::holds("projection rank equals the domain dimension", rank == dd.dim()),
            ];
            report.projection = Some(ProjectionSection {
                coordinates: exponents(&proj.s),
                legend: proj.legend(),
                q: rows(&proj.q),
                rank,
            });
        }
        Command::Verify => {
            with_domain(&mut report);
            let cfg = VerifyConfig {
                seed: opts.seed,
                execution: opts.execution,
                ..VerifyConfig::default()
            };
            report.checks = verify_cone(&cone, &dd, &cfg)?;
        }
        Command::Edge => {
            let Operator::Edge(eop) = &op else { unreachable!("kind checked above") };
            let cfg = SweepConfig {
                rays: opts.eta_rays,
                lambdas: crate::edge::dyadic_lambdas(opts.lambda_max),
                seed: opts.seed,
                execution: opts.execution,
            };
            let sweep = homogeneity_checks(eop, &tol, &cfg)?;
            report.checks = edge_checks(&sweep.report);
            report.edge = Some(EdgeSection {
                coordinates: sweep.samples.first().map(|s| exponents(&s.s)).unwrap_or_default(),
                samples: sweep.samples.iter().map(edge_row).collect(),
                homogeneity: sweep.report,
            });
        }
    }
    report.first_failure = report.checks.iter().find(|c| !c.passed).map(|c| c.name.clone());
    report.passed = report.first_failure.is_none();
    Ok(report)
}

fn fmt_terms(t: &[TermRow]) -> String {
    if t.is_empty() {
        return "0".into();
    }
    t.iter()
        .map(|t| {
            let p = Complex64::new(-t.re, -t.im);
            let mut s = format!("({})", fmt_complex(t.c));
            if p != Complex64::default() {
                let _ = write!(s, " t^({})", fmt_complex(p));
            }
            if t.log > 0 {
                let _ = write!(s, " log^{} t", t.log);
            }
            s
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl Report {
    /// Human-readable rendering for standard output.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "command: {}  kind: {}  mu: {}  seed: {}",
            self.command.as_str(),
            self.spec.kind.as_str(),
            self.spec.mu,
            self.seed
        );
        let _ = writeln!(out, "\npoles in the strip ({}):", self.poles.len());
        for p in &self.poles {
            let _ = writeln!(
                out,
                "  sigma = {:<24} n = {}  mu_sigma = {}  r = [{}]",
                fmt_complex(p.sigma),
                p.n_sigma,
                p.mu_sigma,
                p.r.iter().map(|c| fmt_complex(*c)).collect::<Vec<_>>().join(", ")
            );
        }
        if let Some(dom) = &self.domain {
            let _ = writeln!(out, "\ncorrected basis:");
            for p in dom {
                let _ = writeln!(out, "  sigma = {}", fmt_complex(p.sigma));
                for (h, b) in p.hat_basis.iter().zip(&p.basis) {
                    let _ = writeln!(out, "    omega * [{}]  <-  omega * [{}]", fmt_terms(b), fmt_terms(h));
                }
            }
        }
        if let Some(pr) = &self.projection {
            let _ = writeln!(out, "\nprojection onto the domain (rank {}), coordinates: {}", pr.rank, pr.legend.join(", "));
            for r in &pr.q {
                let _ = writeln!(out, "  [{}]", r.iter().map(|c| format!("{:>14}", fmt_complex(*c))).collect::<Vec<_>>().join(" "));
            }
        }
        if let Some(e) = &self.edge {
            let h = &e.homogeneity;
            let _ = writeln!(
                out,
                "\nedge sweep: {} rays x {} scales (lambda up to {}), log bound {}",
                h.rays.len(),
                h.lambdas.len(),
                h.lambdas.last().copied().unwrap_or(1.0),
                h.log_bound
            );
            let _ = writeln!(out, "  classicality: {}", h.classicality.summary());
            let _ = writeln!(out, "  order-zero convergence: {}", h.order_zero.summary());
            let _ = writeln!(out, "  sup |pi(eta)| = {:.6}", h.projection_sup);
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "\nchecks:");
            for c in &self.checks {
                let _ = writeln!(
                    out,
                    "  [{}] {}: {:.3e} (tol {:.1e})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.tol
                );
            }
        }
        match &self.first_failure {
            None => {
                let _ = writeln!(out, "\nresult: all checks passed");
            }
            Some(f) => {
                let _ = writeln!(out, "\nresult: FAILED ({f})");
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::fixtures::*;
    use crate::edge::fixtures::*;

    fn quick() -> RunOptions {
        RunOptions {
            eta_rays: 2,
            lambda_max: 64.0,
            ..RunOptions::default()
        }
    }

    #[test]
    fn domain_of_fix_a() {
        let r = run(Command::Domain, &OperatorSpec::from_cone(&fix_a()), &quick()).unwrap();
        assert!(r.passed);
        let d = r.domain.as_ref().unwrap();
        let exps: Vec<f64> = d.iter().map(|p| -p.sigma.re).collect();
        assert_eq!(exps, vec![0.0, 1.0]);
        assert!(r.render_text().contains("all checks passed"));
    }

    #[test]
    fn verify_fix_c_passes() {
        let r = run(Command::Verify, &OperatorSpec::from_cone(&fix_c()), &quick()).unwrap();
        assert!(r.passed, "{:?}", r.first_failure);
    }

    #[test]
    fn edge_needs_edge_kind() {
        let e = run(Command::Edge, &OperatorSpec::from_cone(&fix_a()), &quick()).unwrap_err();
        assert!(matches!(e, Error::KindMismatch { .. }));
        let r = run(Command::Edge, &OperatorSpec::from_edge(&fix_f(2)), &quick()).unwrap();
        assert!(r.passed);
        assert_eq!(r.edge.as_ref().unwrap().samples.len(), 2 * 7);
    }

    #[test]
    fn reports_are_deterministic() {
        let spec = OperatorSpec::from_edge(&fix_g(2));
        let a = serde_json::to_string(&run(Command::Edge, &spec, &quick()).unwrap()).unwrap();
        let b = serde_json::to_string(&run(Command::Edge, &spec, &quick()).unwrap()).unwrap();
        assert_eq!(a, b);
    }
}
