use num_complex::Complex64;

use crate::mellin::{ComplexPolynomial, RationalFunction};

/// The sequence `g_0 .. g_L` with `g_0 = 1` and
/// `g_l = -(T^-l f_0^-1) sum_{j<l} (T^-j f_{l-j}) g_j`.
///
/// Every `g_l` is kept over the denominator `D_l = prod_{m=1..l} f_0(z - m)`,
/// which makes the numerators plain polynomial recursions:
/// `P_l = -sum_{j<l} f_{l-j}(z - j) P_j prod_{m=j+1..l-1} f_0(z - m)`.
pub fn g_sequence(f: &[ComplexPolynomial], last: usize) -> Vec<RationalFunction> {
    assert!(!f.is_empty() && !f[0].is_zero(), "f_0 must be nonzero");
    let shifted_f0: Vec<ComplexPolynomial> = (0..=last)
        .map(|m| f[0].shift(Complex64::new(-(m as f64), 0.0)))
        .collect();
    let forcing = |i: usize, j: usize| -> ComplexPolynomial {
        f.get(i)
            .map(|p| p.shift(Complex64::new(-(j as f64), 0.0)))
            .unwrap_or_else(ComplexPolynomial::zero)
    };

    let mut nums = vec![ComplexPolynomial::one()];
    let mut dens = vec![ComplexPolynomial::one()];
    for l in 1..=last {
        let mut acc = ComplexPolynomial::zero();
        for j in 0..l {
            let forcing = forcing(l - j, j);
            if forcing.is_zero() || nums[j].is_zero() {
                continue;
            }
            let bridge = (j + 1..l).fold(ComplexPolynomial::one(), |b, m| &b * &shifted_f0[m]);
            acc = &acc + &(&(&forcing * &nums[j]) * &bridge);
        }
        nums.push(-&acc);
        let den = &dens[l - 1] * &shifted_f0[l];
        dens.push(den);
    }
    nums.into_iter()
        .zip(dens)
        .map(|(n, d)| RationalFunction::new(n, d).expect("shifted f_0 is nonzero"))
        .collect()
}

/// Largest relative residual of `sum_{l<=j} (T^-l f_{j-l}) g_l = delta_{j0} f_0`
/// over `j = 0..g.len()-1`.
///
/// Evaluated with generic rational arithmetic on a common (unreduced)
/// denominator, independent of how [`g_sequence`] organises the recursion.
pub fn recursion_residual(f: &[ComplexPolynomial], g: &[RationalFunction]) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..g.len() {
        let terms: Vec<RationalFunction> = (0..=j)
            .map(|l| {
                let fl = f.get(j - l).cloned().unwrap_or_else(ComplexPolynomial::zero);
                RationalFunction::from_poly(fl)
                    .shift(-(l as f64))
                    .mul(&g[l])
            })
            .collect();
        let common = terms
            .iter()
            .fold(ComplexPolynomial::one(), |acc, t| &acc * t.den());
        let lifted: Vec<ComplexPolynomial> = terms
            .iter()
            .enumerate()
            .map(|(i, t)| {
                terms
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i)
                    .fold(t.num().clone(), |acc, (_, o)| &acc * o.den())
            })
            .collect();
        let mut residual = lifted
            .iter()
            .fold(ComplexPolynomial::zero(), |acc, p| &acc + p);
        if j == 0 {
            residual = &residual - &(&f[0] * &common);
        }
        let scale = lifted.iter().map(|p| p.scale()).fold(0.0, f64::max);
        if scale > 0.0 {
            worst = worst.max(residual.scale() / scale);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::operator::fixtures::*;
    use num_complex::Complex64;

    fn at(f: &RationalFunction, z: f64, im: f64) -> Complex64 {
        f.eval(Complex64::new(z, im))
    }

    #[test]
    fn fix_a_sequence() {
        let g = g_sequence(&fix_a().conormal_symbols(), 2);
        assert!(g[1].is_zero());
        // g_2 = -1/((z-2)(z-1))
        let expect = |z: Complex64| -1.0 / ((z - 2.0) * (z - 1.0));
        for z in [Complex64::new(0.3, 0.7), Complex64::new(-1.2, 0.1)] {
            assert!((g[2].eval(z) - expect(z)).norm() < 1e-13);
        }
    }

    #[test]
    fn fix_c_first_correction() {
        let g = g_sequence(&fix_c().conormal_symbols(), 1);
        let z = Complex64::new(0.4, -0.9);
        assert!((at(&g[1], 0.4, -0.9) + 1.0 / (z * (z - 1.0))).norm() < 1e-13);
    }

    #[test]
    fn zero_forcing_gives_zero_corrections() {
        let f = vec![
            ComplexPolynomial::from_real(&[1.0, -2.0, 1.0, 3.0]),
            ComplexPolynomial::zero(),
            ComplexPolynomial::zero(),
            ComplexPolynomial::zero(),
        ];
        let g = g_sequence(&f, 3);
        assert!(g[1..].iter().all(|g| g.is_zero()));
    }

    #[test]
    fn fixtures_satisfy_recursion_identity() {
        for op in [fix_a(), fix_b(), fix_c()] {
            let f = op.conormal_symbols();
            let g = g_sequence(&f, op.mu() - 1);
            assert!(recursion_residual(&f, &g) < 1e-12);
        }
    }
}
