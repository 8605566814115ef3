use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::asymptotics::{imag_groups, AsymptoticType};
use super::basis::{domain_basis, XVectors};
use super::poles::PoleDatum;
use crate::error::{Error, Result};

/// The projection of `E_S` onto the corrected asymptotic space, as a matrix
/// in the coordinates of `s`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Projection {
    pub s: AsymptoticType,
    pub q: DMatrix<Complex64>,
}

impl Projection {
    pub fn legend(&self) -> Vec<String> {
        self.s.legend()
    }
}

/// Smallest uniform log bound such that every corrected basis element lies in `E_S`.
pub fn required_log_bound(parts: &[(&PoleDatum, &[XVectors])]) -> usize {
    parts
        .iter()
        .flat_map(|(pd, xs)| xs.iter().map(move |x| x.pole_order + pd.n_sigma))
        .max()
        .unwrap_or(0)
}

/// `S = {(sigma - l, N) : sigma, l = 0..=mu_sigma}`.
pub fn asymptotic_type(poles: &[&PoleDatum], log_bound: usize) -> AsymptoticType {
    AsymptoticType::new(
        poles
            .iter()
            .flat_map(|pd| (0..=pd.mu_sigma).map(move |l| (pd.sigma - l as f64, log_bound))),
    )
}

/// Assemble `Q = sum_i (I - Pi_i)`, where for each group of poles with equal
/// imaginary part `Pi_i` applies `u -> u - theta^-1(P_sigma u)` over the group
/// in order of decreasing real part.
///
/// `parts` pairs each pole with its x-vectors for levels `0..=mu_sigma`.
/// `log_bound` overrides the uniform log bound of `S`; it must be at least
/// [`required_log_bound`].
pub fn projection_matrix(
    parts: &[(&PoleDatum, &[XVectors])],
    log_bound: Option<usize>,
) -> Result<Projection> {
    let needed = required_log_bound(parts);
    let bound = log_bound.unwrap_or(needed);
    if bound < needed {
        return Err(Error::InvalidInput(format!(
            "log bound {bound} is below the {needed} needed to contain the corrected space"
        )));
    }
    let poles: Vec<&PoleDatum> = parts.iter().map(|(p, _)| *p).collect();
    let s = asymptotic_type(&poles, bound);
    let dim = s.dim();
    let eye = DMatrix::<Complex64>::identity(dim, dim);

    let sigmas: Vec<Complex64> = poles.iter().map(|p| p.sigma).collect();
    let groups = imag_groups(&sigmas);
    let n_groups = groups.iter().copied().max().map_or(0, |g| g + 1);
    let mut q = DMatrix::<Complex64>::zeros(dim, dim);
    for gi in 0..n_groups {
        let mut members: Vec<usize> = (0..parts.len()).filter(|&i| groups[i] == gi).collect();
        members.sort_by(|&a, &b| sigmas[b].re.partial_cmp(&sigmas[a].re).unwrap());
        let mut pi = eye.clone();
        for &m in &members {
            let (pd, xs) = parts[m];
            let n = pd.n_sigma + 1;
            let mut extract = DMatrix::<Complex64>::zeros(n, dim);
            for j in 0..n {
                let col = s.index(pd.sigma, j).expect("leading coordinate present");
                extract[(j, col)] = Complex64::new(1.0, 0.0);
            }
            let mut lift = DMatrix::<Complex64>::zeros(dim, n);
            for (j, e) in domain_basis(pd, xs).iter().enumerate() {
                lift.set_column(j, &s.to_vector(e)?);
            }
            pi = (&eye - lift * extract) * pi;
        }
        q += &eye - pi;
    }
    Ok(Projection { s, q })
}

/// Numerical rank from singular values relative to the largest one.
pub fn numerical_rank(m: &DMatrix<Complex64>, rel: f64) -> usize {
    if m.is_empty() {
        return 0;
    }
    let sv = m.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > rel * top.max(f64::MIN_POSITIVE)).count()
}

/// Largest entry modulus of `a - b`.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|c| c.norm()).fold(0.0, f64::max)
}
