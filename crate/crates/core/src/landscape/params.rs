use serde::{Deserialize, Serialize};

use crate::linalg::C64;
use crate::qcore::BlochVector;

/// `‖w‖` below this counts as the completely mixed state.
pub const MIXED_NORM_TOL: f64 = 1e-14;
/// `|‖w‖ − 1|` below this counts as a pure state.
pub const PURE_NORM_TOL: f64 = 1e-12;

/// Which of the three landscape regimes `w` falls in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LandscapeCase {
    /// `w = 0`: one saddle value ½.
    Mixed,
    /// `0 < ‖w‖ < 1`: saddle values λ₋ and λ₊.
    Partial,
    /// `‖w‖ = 1`: no saddles.
    Pure,
}

/// Everything the objective depends on besides the point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LandscapeParams {
    pub w: BlochVector,
    pub norm_w: f64,
    /// `z₀ = α − iβ`.
    pub z0: C64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

impl LandscapeParams {
    pub fn new(w: BlochVector) -> Self {
        let norm_w = w.norm();
        Self {
            w,
            norm_w,
            z0: C64::new(w.alpha(), -w.beta()),
            lambda_plus: 0.5 * (1.0 + norm_w),
            lambda_minus: 0.5 * (1.0 - norm_w),
        }
    }

    pub fn from_components(alpha: f64, beta: f64, gamma: f64) -> crate::Result<Self> {
        Ok(Self::new(BlochVector::new(alpha, beta, gamma)?))
    }

    pub fn gamma(&self) -> f64 {
        self.w.gamma()
    }

    pub fn case(&self) -> LandscapeCase {
        if self.norm_w < MIXED_NORM_TOL {
            LandscapeCase::Mixed
        } else if (self.norm_w - 1.0).abs() <= PURE_NORM_TOL {
            LandscapeCase::Pure
        } else {
            LandscapeCase::Partial
        }
    }

    /// Critical values other than the global extrema.
    pub fn saddle_values(&self) -> Vec<f64> {
        match self.case() {
            LandscapeCase::Mixed => vec![0.5],
            LandscapeCase::Partial => vec![self.lambda_minus, self.lambda_plus],
            LandscapeCase::Pure => vec![],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_quantities() {
        let p = LandscapeParams::from_components(0.3, -0.4, 0.2).unwrap();
        assert!((p.lambda_plus + p.lambda_minus - 1.0).abs() < 1e-15);
        assert!((p.lambda_plus - p.lambda_minus - p.norm_w).abs() < 1e-15);
        assert_eq!(p.z0, C64::new(0.3, 0.4));
        let lhs = p.z0.norm_sqr();
        let rhs = p.norm_w.powi(2) - p.gamma().powi(2);
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn cases() {
        assert_eq!(LandscapeParams::from_components(0.0, 0.0, 0.0).unwrap().case(), LandscapeCase::Mixed);
        assert_eq!(LandscapeParams::from_components(0.0, 0.0, 0.5).unwrap().case(), LandscapeCase::Partial);
        assert_eq!(LandscapeParams::from_components(0.6, 0.0, 0.8).unwrap().case(), LandscapeCase::Pure);
        assert_eq!(LandscapeParams::from_components(0.0, 0.0, -1.0).unwrap().case(), LandscapeCase::Pure);
    }
}
