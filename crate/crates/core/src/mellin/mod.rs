//! Complex polynomials and rational functions in the Mellin variable `z`.

mod laurent;
mod poly;
mod rational;
mod roots;

use num_complex::Complex64;

pub use laurent::{laurent_at, laurent_at_tol, LaurentExpansion, TAU_ZERO};
pub use poly::ComplexPolynomial;
pub use rational::{RationalFunction, RfOp};
pub use roots::{default_cluster_tol, poly_roots, raw_roots, PoleSite};

pub(crate) fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else if c.re == 0.0 {
        format!("{}i", c.im)
    } else {
        format!("{}{:+}i", c.re, c.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cpx() -> impl Strategy<Value = Complex64> {
        (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(a, b)| Complex64::new(a, b))
    }

    fn poly(max_deg: usize) -> impl Strategy<Value = ComplexPolynomial> {
        prop::collection::vec(cpx(), 1..=max_deg + 1).prop_map(|mut c| {
            let last = c.len() - 1;
            c[last] += Complex64::new(3.0, 0.0);
            ComplexPolynomial::new(c)
        })
    }

    fn rational() -> impl Strategy<Value = RationalFunction> {
        (poly(3), poly(3)).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
    }

    proptest! {
        #[test]
        fn shift_round_trip(f in rational(), rho in -3.0..3.0f64, pts in prop::collection::vec(cpx(), 10)) {
            let back = f.shift(rho).shift(-rho);
            for z in pts {
                let (a, b) = (back.eval(z), f.eval(z));
                if b.is_finite() && b.norm() < 1e6 {
                    prop_assert!((a - b).norm() <= 1e-10 * (1.0 + b.norm()));
                }
            }
        }

        #[test]
        fn arithmetic_matches_pointwise(a in rational(), b in rational(), pts in prop::collection::vec(cpx(), 10)) {
            let sum = a.add(&b);
            let prod = a.mul(&b);
            for z in pts {
                let (x, y) = (a.eval(z), b.eval(z));
                if x.norm() < 1e6 && y.norm() < 1e6 {
                    prop_assert!((sum.eval(z) - (x + y)).norm() <= 1e-10 * (1.0 + (x + y).norm()));
                    prop_assert!((prod.eval(z) - x * y).norm() <= 1e-10 * (1.0 + (x * y).norm()));
                }
            }
        }

        #[test]
        fn roots_of_product_are_union(
            pr in prop::collection::vec(cpx(), 1..=4),
            qr in prop::collection::vec(cpx(), 1..=4),
        ) {
            let all: Vec<Complex64> = pr.iter().chain(&qr).copied().collect();
            // well separated roots only
            for (i, a) in all.iter().enumerate() {
                for b in &all[i + 1..] {
                    prop_assume!((a - b).norm() > 0.05);
                }
            }
            let build = |r: &[Complex64]| r.iter().fold(ComplexPolynomial::one(), |acc, &x| &acc * &ComplexPolynomial::linear(x));
            let pq = &build(&pr) * &build(&qr);
            let sites = poly_roots(&pq, 1e-8 * 3.0).unwrap();
            prop_assert_eq!(sites.len(), all.len());
            for r in &all {
                prop_assert!(sites.iter().any(|s| s.order == 1 && (s.location - r).norm() < 1e-9));
            }
        }

        #[test]
        fn laurent_reconstructs_on_small_circle(
            pole in cpx(),
            order in 1usize..=3,
            other in poly(2),
            theta in 0.0..std::f64::consts::TAU,
        ) {
            let den = &ComplexPolynomial::linear(pole).pow(order) * &ComplexPolynomial::linear(pole + Complex64::new(1.0, 0.5));
            let f = RationalFunction::new(other.clone(), den).unwrap();
            prop_assume!(other.eval(pole).norm() > 1e-3);
            let l = laurent_at(&f, pole, 30).unwrap();
            prop_assert_eq!(l.pole_order(), order);
            // exactly `order` principal coefficients with a nonzero leading one
            let pp = l.principal_part();
            prop_assert_eq!(pp.len(), order);
            prop_assert!(pp[order - 1].norm() > 1e-12);
            let eps = 0.2;
            let z = pole + Complex64::from_polar(eps / 2.0, theta);
            let (a, b) = (l.eval(z), f.eval(z));
            prop_assert!((a - b).norm() <= 1e-9 * b.norm().max(1.0));
        }
    }
}
