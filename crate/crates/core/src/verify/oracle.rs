use serde::Serialize;

use super::VerifyError;

/// Closed forms the solved series are compared against.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OracleSpec {
    /// `sqrt(2 nu a1) tan(x sqrt(a1 / (2 nu)))`, the odd stationary Burgers solution.
    BurgersTan { a1: f64, nu: f64 },
    /// `(c/2) sech^2(sqrt(c) z / (2k))`, the KdV soliton in the reduced variable.
    KdvSech { c: f64, k: f64 },
    /// `alpha / (beta + C e^(-alpha t))`, evaluated at time `t`.
    BurgersTimeFactor { alpha: f64, beta: f64, c: f64 },
}

pub fn oracle_value(o: &OracleSpec, point: f64) -> Result<f64, VerifyError> {
    match *o {
        OracleSpec::BurgersTan { a1, nu } => {
            if nu == 0.0 || a1 / nu <= 0.0 {
                return Err(VerifyError::OutOfDomain(format!(
                    "burgers_tan needs a1/nu > 0, got a1={a1}, nu={nu}"
                )));
            }
            let w = (a1 / (2.0 * nu)).sqrt();
            if (point * w).abs() >= std::f64::consts::FRAC_PI_2 {
                return Err(VerifyError::OutOfDomain(format!(
                    "x = {point} is past the pole of tan"
                )));
            }
            Ok((2.0 * nu * a1).sqrt() * (point * w).tan())
        }
        OracleSpec::KdvSech { c, k } => {
            if c <= 0.0 || k == 0.0 {
                return Err(VerifyError::OutOfDomain(format!(
                    "kdv_sech needs c > 0 and k != 0, got c={c}, k={k}"
                )));
            }
            let s = 1.0 / (c.sqrt() * point / (2.0 * k)).cosh();
            Ok(c / 2.0 * s * s)
        }
        OracleSpec::BurgersTimeFactor { alpha, beta, c } => {
            TimeFactor { alpha, beta, c }.value(point)
        }
    }
}

/// Solution of the Bernoulli equation `a' = alpha a - beta a^2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeFactor {
    pub alpha: f64,
    pub beta: f64,
    pub c: f64,
}

impl TimeFactor {
    /// Fixes the integration constant from `a(0) = a0`.
    pub fn from_initial(alpha: f64, beta: f64, a0: f64) -> Result<Self, VerifyError> {
        if a0 == 0.0 {
            return Err(VerifyError::OutOfDomain("a(0) = 0 has no Bernoulli form".into()));
        }
        Ok(TimeFactor {
            alpha,
            beta,
            c: alpha / a0 - beta,
        })
    }

    /// `alpha = 0` collapses the solution to the zero function.
    pub fn is_degenerate(&self) -> bool {
        self.alpha == 0.0
    }

    pub fn value(&self, t: f64) -> Result<f64, VerifyError> {
        let d = self.beta + self.c * (-self.alpha * t).exp();
        if d == 0.0 {
            return Err(VerifyError::OutOfDomain(format!("a(t) blows up at t = {t}")));
        }
        Ok(self.alpha / d)
    }
}
