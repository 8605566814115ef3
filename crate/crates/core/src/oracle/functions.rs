use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffPair;
use super::quadrature::integrate;
use crate::error::{Error, Result};

/// Closed-form test inputs on the half-axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TestFunction {
    /// `t^a (1 - t)^b` on `(0, 1)`, zero for `t >= 1`.
    BetaPower { a: f64, b: f64 },
    /// `t^a` (multiplied by the outer cut-off when transformed).
    Power { a: Complex64 },
    /// `B(s) (2s - 1)^k` with `s = (log t - lo) / (hi - lo)` and the bump
    /// `B(s) = exp(4 - 1/(s(1-s)))` on `(0, 1)`; supported in `(e^lo, e^hi)`.
    LogBump { lo: f64, hi: f64, power: u32 },
    Combination(Vec<(Complex64, TestFunction)>),
}

impl TestFunction {
    pub fn eval(&self, t: f64) -> Complex64 {
        match self {
            TestFunction::BetaPower { a, b } => {
                if t <= 0.0 || t >= 1.0 {
                    Complex64::default()
                } else {
                    Complex64::new(t.powf(*a) * (1.0 - t).powf(*b), 0.0)
                }
            }
            TestFunction::Power { a } => (a * t.ln()).exp(),
            TestFunction::LogBump { lo, hi, power } => {
                Complex64::new(log_bump(t.ln(), *lo, *hi, *power), 0.0)
            }
            TestFunction::Combination(parts) => parts.iter().map(|(c, f)| c * f.eval(t)).sum(),
        }
    }

    /// Value in the variable `x = log t`.
    fn eval_log(&self, x: f64) -> Complex64 {
        match self {
            TestFunction::LogBump { lo, hi, power } => Complex64::new(log_bump(x, *lo, *hi, *power), 0.0),
            TestFunction::Power { a } => (a * x).exp(),
            TestFunction::Combination(parts) => parts.iter().map(|(c, f)| c * f.eval_log(x)).sum(),
            _ => self.eval(x.exp()),
        }
    }

    /// Real part of the leading exponent at `t = 0`; `+inf` if the support avoids 0.
    pub fn leading_exponent(&self) -> f64 {
        match self {
            TestFunction::BetaPower { a, .. } => *a,
            TestFunction::Power { a } => a.re,
            TestFunction::LogBump { .. } => f64::INFINITY,
            TestFunction::Combination(parts) => parts
                .iter()
                .filter(|(c, _)| c.norm() != 0.0)
                .map(|(_, f)| f.leading_exponent())
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// Support `(lo, hi)` in the variable `log t`, before the outer cut-off.
    fn log_support(&self) -> (f64, f64) {
        match self {
            TestFunction::BetaPower { .. } => (f64::NEG_INFINITY, 0.0),
            TestFunction::Power { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            TestFunction::LogBump { lo, hi, .. } => (*lo, *hi),
            TestFunction::Combination(parts) => parts.iter().fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(l, h), (_, f)| {
                    let (a, b) = f.log_support();
                    (l.min(a), h.max(b))
                },
            ),
        }
    }

    /// Sample on `m` log-spaced points of `[t_min, t_max]`.
    pub fn sample(&self, t_min: f64, t_max: f64, m: usize) -> SampledFunction {
        let grid = log_grid(t_min, t_max, m);
        let values = grid.iter().map(|&t| self.eval(t)).collect();
        SampledFunction {
            grid,
            values,
            closed_form: Some(self.clone()),
        }
    }
}

fn log_bump(x: f64, lo: f64, hi: f64, power: u32) -> f64 {
    let s = (x - lo) / (hi - lo);
    if s <= 0.0 || s >= 1.0 {
        return 0.0;
    }
    (4.0 - 1.0 / (s * (1.0 - s))).exp() * (2.0 * s - 1.0).powi(power as i32)
}

pub fn log_grid(t_min: f64, t_max: f64, m: usize) -> Vec<f64> {
    let (a, b) = (t_min.ln(), t_max.ln());
    (0..m)
        .map(|i| (a + (b - a) * i as f64 / (m - 1).max(1) as f64).exp())
        .collect()
}

/// Function values on a strictly increasing log-spaced grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampledFunction {
    pub grid: Vec<f64>,
    pub values: Vec<Complex64>,
    pub closed_form: Option<TestFunction>,
}

impl SampledFunction {
    pub fn new(grid: Vec<f64>, values: Vec<Complex64>) -> Result<Self> {
        if grid.len() != values.len() || grid.len() < 2 {
            return Err(Error::InvalidInput("grid and values must match, at least 2 points".into()));
        }
        if grid[0] <= 0.0 || grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidInput("grid must be positive and strictly increasing".into()));
        }
        Ok(Self {
            grid,
            values,
            closed_form: None,
        })
    }
}

/// Input accepted by the Mellin oracle.
#[derive(Clone, Copy, Debug)]
pub enum MellinInput<'a> {
    Closed(&'a TestFunction),
    Sampled(&'a SampledFunction),
}

impl<'a> From<&'a TestFunction> for MellinInput<'a> {
    fn from(f: &'a TestFunction) -> Self {
        MellinInput::Closed(f)
    }
}

impl<'a> From<&'a SampledFunction> for MellinInput<'a> {
    fn from(f: &'a SampledFunction) -> Self {
        match &f.closed_form {
            Some(c) => MellinInput::Closed(c),
            None => MellinInput::Sampled(f),
        }
    }
}

/// Mellin transform `int_0^inf t^z (omega0 u)(t) dt/t`.
pub fn mellin_numeric<'a>(u: impl Into<MellinInput<'a>>, z: Complex64, cut: &CutoffPair) -> Result<Complex64> {
    Ok(mellin_jet(u, z, 0, cut)?[0])
}

/// Taylor coefficients `d^k/dz^k (M omega0 u)(z) / k!`, `k = 0..=order`.
pub fn mellin_jet<'a>(
    u: impl Into<MellinInput<'a>>,
    z: Complex64,
    order: usize,
    cut: &CutoffPair,
) -> Result<Vec<Complex64>> {
    match u.into() {
        MellinInput::Closed(f) => closed_jet(f, z, order, cut),
        MellinInput::Sampled(s) => Ok(sampled_jet(s, z, order, cut)),
    }
}

const ABS_TOL: f64 = 1e-13;

fn closed_jet(f: &TestFunction, z: Complex64, order: usize, cut: &CutoffPair) -> Result<Vec<Complex64>> {
    let lead = f.leading_exponent();
    let decay = z.re + lead;
    let (lo, hi) = f.log_support();
    let hi = hi.min(cut.omega0_support().ln());
    let lo = if lo.is_finite() {
        lo
    } else {
        if decay <= 0.0 {
            return Err(Error::QuadratureDivergence { z, exponent: lead });
        }
        // |integrand| ~ e^{decay x} |x|^order; stop where it is far below tolerance.
        let mut x = -40.0 / decay;
        while (decay * x).exp() * x.abs().powi(order as i32) > 1e-18 {
            x *= 1.5;
        }
        x
    };
    if lo >= hi {
        return Ok(vec![Complex64::default(); order + 1]);
    }
    let mut out = Vec::with_capacity(order + 1);
    let mut fact = 1.0;
    for k in 0..=order {
        if k > 0 {
            fact *= k as f64;
        }
        let integrand = |x: f64| {
            let w = cut.omega0(x.exp());
            if w == 0.0 {
                return Complex64::default();
            }
            (z * x).exp() * f.eval_log(x) * (w * x.powi(k as i32))
        };
        // Split at the cut-off bridge and at 0 so every panel is smooth.
        let mut knots = vec![lo];
        for b in [-3.0, 0.0] {
            if b > lo && b < hi {
                knots.push(b);
            }
        }
        knots.push(hi);
        let mut value = Complex64::default();
        for w in knots.windows(2) {
            value += integrate(integrand, w[0], w[1], ABS_TOL).value;
        }
        out.push(value / fact);
    }
    Ok(out)
}

fn sampled_jet(s: &SampledFunction, z: Complex64, order: usize, cut: &CutoffPair) -> Vec<Complex64> {
    // Trapezoid rule in x = log t on the sample grid.
    let xs: Vec<f64> = s.grid.iter().map(|t| t.ln()).collect();
    let mut fact = 1.0;
    (0..=order)
        .map(|k| {
            if k > 0 {
                fact *= k as f64;
            }
            let h = |i: usize| {
                (z * xs[i]).exp() * s.values[i] * (cut.omega0(s.grid[i]) * xs[i].powi(k as i32))
            };
            let mut acc = Complex64::default();
            for i in 1..xs.len() {
                acc += (h(i - 1) + h(i)) * (0.5 * (xs[i] - xs[i - 1]));
            }
            acc / fact
        })
        .collect()
}
