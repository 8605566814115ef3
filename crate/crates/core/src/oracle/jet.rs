use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffPair;
use super::functions::{mellin_jet, SampledFunction, TestFunction};
use crate::error::{Error, Result};

pub const JET_COND_LIMIT: f64 = 1e12;
/// Width (in `log t`) of the dictionary bumps.
const DICT_WIDTH: f64 = 5.0;
const SAMPLES: usize = 1024;

/// A point of prescribed Mellin behaviour.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct JetTarget {
    pub sigma: Complex64,
    pub order: usize,
}

/// A smooth function supported in `(0, eps)` whose Mellin transform has the
/// Taylor coefficients `values[0..=n_0]` at `targets[0].sigma` and vanishes to
/// order `targets[i].order` at every other target.
///
/// The function is a combination of `B(s)(2s-1)^k` bumps in `log t`, found by
/// solving the square jet system (rows equilibrated).
pub fn jet_function(
    targets: &[JetTarget],
    values: &[Complex64],
    eps: f64,
    cut: &CutoffPair,
) -> Result<SampledFunction> {
    let Some(first) = targets.first() else {
        return Err(Error::InvalidInput("at least one jet target is required".into()));
    };
    if values.len() != first.order + 1 {
        return Err(Error::InvalidInput(format!(
            "expected {} jet values at the first target, got {}",
            first.order + 1,
            values.len()
        )));
    }
    for (i, a) in targets.iter().enumerate() {
        if targets[i + 1..].iter().any(|b| (a.sigma - b.sigma).norm() < 1e-12) {
            return Err(Error::InvalidInput("jet targets must be pairwise distinct".into()));
        }
    }
    let hi = eps.ln();
    let lo = hi - DICT_WIDTH;
    let conditions: usize = first.order + 1 + targets[1..].iter().map(|t| t.order).sum::<usize>();
    let dictionary: Vec<TestFunction> = (0..conditions as u32)
        .map(|power| TestFunction::LogBump { lo, hi, power })
        .collect();

    let mut a = DMatrix::<Complex64>::zeros(conditions, conditions);
    let mut rhs = DVector::<Complex64>::zeros(conditions);
    for (col, f) in dictionary.iter().enumerate() {
        let mut row = 0;
        for (i, tg) in targets.iter().enumerate() {
            let count = if i == 0 { tg.order + 1 } else { tg.order };
            if count == 0 {
                continue;
            }
            let jet = mellin_jet(f, tg.sigma, count - 1, cut)?;
            for d in 0..count {
                a[(row + d, col)] = jet[d];
            }
            row += count;
        }
    }
    rhs.rows_mut(0, values.len()).copy_from(&DVector::from_column_slice(values));

    // Re-centre each jet block at the middle of the support: the rows then
    // weight by (log t - c)^d instead of log^d t, which are far less collinear.
    let centre = 0.5 * (lo + hi);
    let mut row = 0;
    for (i, tg) in targets.iter().enumerate() {
        let count = if i == 0 { tg.order + 1 } else { tg.order };
        let mut t = DMatrix::<Complex64>::zeros(count, count);
        let mut fact = 1.0;
        for k in 0..count {
            if k > 0 {
                fact *= k as f64;
            }
            for d in k..count {
                t[(d, d - k)] = Complex64::new((-centre).powi(k as i32) / fact, 0.0);
            }
        }
        let block = &t * a.rows(row, count);
        a.rows_mut(row, count).copy_from(&block);
        let rb = &t * rhs.rows(row, count);
        rhs.rows_mut(row, count).copy_from(&rb);
        row += count;
    }
    for r in 0..conditions {
        let norm = a.row(r).iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            a.row_mut(r).scale_mut(1.0 / norm);
            rhs[r] /= norm;
        }
    }
    let sv = a.singular_values();
    let (smax, smin) = sv.iter().fold((0.0f64, f64::INFINITY), |(mx, mn), &s| (mx.max(s), mn.min(s)));
    let cond = (smax / smin).powi(2);
    if !(cond <= JET_COND_LIMIT) {
        return Err(Error::IllConditionedJetSystem { cond });
    }
    let coeffs = a
        .lu()
        .solve(&rhs)
        .ok_or(Error::IllConditionedJetSystem { cond: f64::INFINITY })?;
    let combo = TestFunction::Combination(
        coeffs.iter().copied().zip(dictionary).collect(),
    );
    Ok(combo.sample(lo.exp(), eps, SAMPLES))
}
