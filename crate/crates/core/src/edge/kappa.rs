use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::cone::AsymptoticType;

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `u(t) -> lambda^(1/2) u(lambda t)` restricted to the asymptotic block of `E_S`:
/// `t^-p log^j t -> lambda^(1/2 - p) sum_i C(j, i) (log lambda)^(j - i) t^-p log^i t`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KappaMatrix {
    pub lambda: f64,
    pub matrix: DMatrix<Complex64>,
}

pub fn kappa_matrix(lambda: f64, s: &AsymptoticType) -> KappaMatrix {
    assert!(lambda > 0.0, "group action needs lambda > 0");
    let coords = s.coordinates();
    let dim = coords.len();
    let ll = lambda.ln();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for (col, &(p, j)) in coords.iter().enumerate() {
        let factor = (Complex64::new(0.5, 0.0) - p) * ll;
        let scale = factor.exp();
        for i in 0..=j {
            let row = s.index(p, i).expect("log powers below j are coordinates");
            m[(row, col)] = scale * binomial(j, i) * ll.powi((j - i) as i32);
        }
    }
    KappaMatrix { lambda, matrix: m }
}

impl KappaMatrix {
    /// `kappa_lambda^-1 = kappa_(1/lambda)`.
    pub fn inverse(&self, s: &AsymptoticType) -> KappaMatrix {
        kappa_matrix(1.0 / self.lambda, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::projection::max_abs_diff;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn s() -> AsymptoticType {
        AsymptoticType::new([(c(0.0), 2), (c(-1.0), 2), (Complex64::new(-0.3, 1.0), 1)])
    }

    #[test]
    fn identity_and_group_law() {
        let s = s();
        let id = DMatrix::<Complex64>::identity(s.dim(), s.dim());
        assert!(max_abs_diff(&kappa_matrix(1.0, &s).matrix, &id) < 1e-15);
        let (a, b) = (kappa_matrix(2.5, &s), kappa_matrix(0.7, &s));
        let ab = kappa_matrix(2.5 * 0.7, &s);
        assert!(max_abs_diff(&(&a.matrix * &b.matrix), &ab.matrix) < 1e-10);
        assert!(max_abs_diff(&(&a.matrix * &a.inverse(&s).matrix), &id) < 1e-12);
    }

    #[test]
    fn examples() {
        let s = AsymptoticType::new([(c(0.0), 1), (c(-1.0), 1)]);
        let k = kappa_matrix(4.0, &s);
        assert!((k.matrix[(0, 0)] - c(2.0)).norm() < 1e-14);
        let e = std::f64::consts::E;
        let k = kappa_matrix(e, &s);
        // t log t -> e^{3/2} (t log t + t)
        let col = k.matrix.column(3);
        assert!((col[3] - c(e.powf(1.5))).norm() < 1e-12);
        assert!((col[2] - c(e.powf(1.5))).norm() < 1e-12);
        assert!(col[0].norm() == 0.0 && col[1].norm() == 0.0);
    }
}
