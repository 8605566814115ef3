use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::poly::ComplexPolynomial;
use crate::error::{Error, Result};

/// Ratio of two complex polynomials, stored unreduced.
///
/// Common roots of numerator and denominator are only cancelled inside
/// [`laurent_at`](super::laurent_at), where the true pole order matters.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
pub struct RationalFunction {
    num: ComplexPolynomial,
    den: ComplexPolynomial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RfOp {
    Add,
    Mul,
    Neg,
    Invert,
}

impl RationalFunction {
    pub fn new(num: ComplexPolynomial, den: ComplexPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: ComplexPolynomial) -> Self {
        Self {
            num: p,
            den: ComplexPolynomial::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(ComplexPolynomial::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(ComplexPolynomial::one())
    }

    pub fn num(&self) -> &ComplexPolynomial {
        &self.num
    }

    pub fn den(&self) -> &ComplexPolynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.num.eval(z) / self.den.eval(z)
    }

    /// `z -> f(z + rho)`, the shift operator `T^rho`.
    pub fn shift(&self, rho: f64) -> Self {
        let s = Complex64::new(rho, 0.0);
        Self {
            num: self.num.shift(s),
            den: self.den.shift(s),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.den == other.den {
            return Self {
                num: &self.num + &other.num,
                den: self.den.clone(),
            };
        }
        Self {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    pub fn mul_poly(&self, p: &ComplexPolynomial) -> Self {
        Self {
            num: &self.num * p,
            den: self.den.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn invert(&self) -> Result<Self> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZeroFunction);
        }
        Ok(Self {
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self {
            num: self.num.scaled(s),
            den: self.den.clone(),
        }
    }

    /// Dispatch form of the field operations; `b` is ignored for unary ops.
    pub fn arith(a: &Self, b: &Self, op: RfOp) -> Result<Self> {
        Ok(match op {
            RfOp::Add => a.add(b),
            RfOp::Mul => a.mul(b),
            RfOp::Neg => a.neg(),
            RfOp::Invert => a.invert()?,
        })
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}) / ({:?})", self.num, self.den)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] / [{}]", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> ComplexPolynomial {
        ComplexPolynomial::from_real(c)
    }

    fn rf(n: &[f64], d: &[f64]) -> RationalFunction {
        RationalFunction::new(p(n), p(d)).unwrap()
    }

    fn close(a: &RationalFunction, b: &RationalFunction) -> bool {
        [0.37, -1.9, 2.3]
            .iter()
            .zip([0.4, 1.1, -0.7])
            .map(|(&x, y)| Complex64::new(x, y))
            .all(|z| (a.eval(z) - b.eval(z)).norm() <= 1e-12 * (1.0 + b.eval(z).norm()))
    }

    #[test]
    fn shift_of_reciprocal() {
        assert!(close(&rf(&[1.0], &[0.0, 1.0]).shift(-1.0), &rf(&[1.0], &[-1.0, 1.0])));
    }

    #[test]
    fn zero_shift_is_identity() {
        let f = rf(&[1.0, 2.0], &[3.0, 0.0, 1.0]);
        assert_eq!(f.shift(0.0), f);
    }

    #[test]
    fn example_arithmetic() {
        let inv_z = rf(&[1.0], &[0.0, 1.0]);
        let inv_zm1 = rf(&[1.0], &[-1.0, 1.0]);
        let z_zm1 = rf(&[1.0], &[0.0, -1.0, 1.0]);
        assert!(close(&RationalFunction::arith(&inv_z, &inv_zm1, RfOp::Mul).unwrap(), &z_zm1));
        let diff = inv_z.add(&inv_zm1.neg());
        assert!(close(&diff, &z_zm1.neg()));
        let inv = RationalFunction::arith(&rf(&[0.0, 1.0, 1.0], &[1.0]), &inv_z, RfOp::Invert).unwrap();
        assert!(close(&inv, &rf(&[1.0], &[0.0, 1.0, 1.0])));
    }

    #[test]
    fn inverting_zero_fails() {
        assert_eq!(RationalFunction::zero().invert(), Err(Error::DivisionByZeroFunction));
        assert!(RationalFunction::new(p(&[1.0]), ComplexPolynomial::zero()).is_err());
    }
}
