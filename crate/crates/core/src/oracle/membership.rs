use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffPair;
use super::functions::SampledFunction;
use crate::cone::AsymptoticElement;

/// Slope (in `log t`) of the squared weighted density below which the tail counts as divergent.
pub const TAIL_SLOPE_MIN: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Membership {
    pub member: bool,
    pub diagnostic: String,
}

pub enum MembershipInput<'a> {
    Asymptotic(&'a AsymptoticElement),
    Sampled(&'a SampledFunction),
}

impl<'a> From<&'a AsymptoticElement> for MembershipInput<'a> {
    fn from(v: &'a AsymptoticElement) -> Self {
        MembershipInput::Asymptotic(v)
    }
}

impl<'a> From<&'a SampledFunction> for MembershipInput<'a> {
    fn from(v: &'a SampledFunction) -> Self {
        MembershipInput::Sampled(v)
    }
}

/// Whether `omega v` lies in the weighted space with smoothness `s` and weight
/// `gamma` near `t = 0`, i.e. `t^-gamma (t d/dt)^j (omega v)` is square integrable
/// for `j <= s`.
///
/// Asymptotic elements use the exact termwise criterion `Re p < 1/2 - gamma`
/// (every nonzero term). Sampled functions use the decay of the weighted
/// density in `log t` over the lowest tenth of the grid.
pub fn membership_check<'a>(v: impl Into<MembershipInput<'a>>, s: u32, gamma: f64) -> Membership {
    match v.into() {
        MembershipInput::Asymptotic(e) => {
            let bound = 0.5 - gamma;
            let offending: Vec<String> = e
                .terms()
                .iter()
                .filter(|t| t.c.norm() != 0.0 && t.p.re >= bound)
                .map(|t| format!("t^-({}) log^{} t", t.p, t.log))
                .collect();
            if offending.is_empty() {
                Membership {
                    member: true,
                    diagnostic: format!("all exponents satisfy Re p < {bound}"),
                }
            } else {
                Membership {
                    member: false,
                    diagnostic: format!("terms with Re p >= {bound}: {}", offending.join(", ")),
                }
            }
        }
        MembershipInput::Sampled(f) => sampled_membership(f, s, gamma),
    }
}

fn sampled_membership(f: &SampledFunction, s: u32, gamma: f64) -> Membership {
    let cut = CutoffPair;
    let xs: Vec<f64> = f.grid.iter().map(|t| t.ln()).collect();
    let mut vals: Vec<Complex64> = f
        .values
        .iter()
        .zip(&f.grid)
        .map(|(v, &t)| v * cut.omega(t))
        .collect();
    let m = xs.len();
    let tail = (m / 10).max(8).min(m);
    let mut worst = f64::INFINITY;
    for j in 0..=s {
        if j > 0 {
            // t d/dt = d/dx, centred differences
            let prev = vals.clone();
            for i in 0..m {
                let (a, b) = (i.saturating_sub(1), (i + 1).min(m - 1));
                vals[i] = (prev[b] - prev[a]) / (xs[b] - xs[a]);
            }
        }
        // density of int |t^-gamma w|^2 dt in x: |w|^2 e^{(1 - 2 gamma) x}
        let pts: Vec<(f64, f64)> = (0..tail)
            .filter_map(|i| {
                let d = vals[i].norm_sqr();
                (d > 0.0).then(|| (xs[i], d.ln() + (1.0 - 2.0 * gamma) * xs[i]))
            })
            .collect();
        if pts.len() < 2 {
            continue; // vanishes near 0
        }
        let n = pts.len() as f64;
        let (mx, my) = pts.iter().fold((0.0, 0.0), |(a, b), p| (a + p.0 / n, b + p.1 / n));
        let (sxy, sxx) = pts
            .iter()
            .fold((0.0, 0.0), |(a, b), p| (a + (p.0 - mx) * (p.1 - my), b + (p.0 - mx).powi(2)));
        worst = worst.min(sxy / sxx);
    }
    let member = worst > TAIL_SLOPE_MIN;
    Membership {
        member,
        diagnostic: if worst.is_finite() {
            format!("tail density slope {worst:.4} (needs > {TAIL_SLOPE_MIN})")
        } else {
            "function vanishes near t = 0".into()
        },
    }
}
