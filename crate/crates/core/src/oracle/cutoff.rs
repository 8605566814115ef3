use serde::{Deserialize, Serialize};

/// `exp(-1/x)` smooth step: 0 for `x <= 0`, 1 for `x >= 1`.
pub fn smoothstep(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let a = (-1.0 / x).exp();
    let b = (-1.0 / (1.0 - x)).exp();
    a / (a + b)
}

/// The fixed cut-off pair: `omega = 1` on `[0, 1/2]`, `0` on `[1, inf)`;
/// `omega0(t) = omega(t/2)`, which is 1 on the support of `omega`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CutoffPair;

impl CutoffPair {
    pub fn omega(&self, t: f64) -> f64 {
        1.0 - smoothstep(2.0 * t - 1.0)
    }

    pub fn omega0(&self, t: f64) -> f64 {
        self.omega(t / 2.0)
    }

    /// Right end of the support of `omega0`.
    pub fn omega0_support(&self) -> f64 {
        2.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_shape() {
        let c = CutoffPair;
        assert_eq!(c.omega(0.3), 1.0);
        assert_eq!(c.omega(0.5), 1.0);
        assert_eq!(c.omega(1.0), 0.0);
        assert!((c.omega(0.75) - 0.5).abs() < 1e-15);
        assert_eq!(c.omega0(1.0), 1.0);
        assert_eq!(c.omega0(2.0), 0.0);
        for i in 0..100 {
            let t = i as f64 * 0.02;
            // omega0 = 1 wherever omega is nonzero
            if c.omega(t) > 0.0 {
                assert_eq!(c.omega0(t), 1.0);
            }
        }
    }
}
