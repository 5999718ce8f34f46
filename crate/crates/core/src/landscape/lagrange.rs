//! Lagrange-multiplier certificates for critical points.
//!
//! In diagonal coordinates the stationarity conditions read
//!
//! ```text
//! (λ₊ + η₁) ũ₁ + η₃ ũ₂ = 0        η₁ ṽ₁ + η₃ ṽ₂ = 0
//! η₃* ũ₁ + (λ₋ + η₂) ũ₂ = 0       η₃* ṽ₁ + η₂ ṽ₂ = 0
//! ```
//!
//! They are linear in `(η₁, η₂, Re η₃, Im η₃)`, so the multipliers are fitted
//! by least squares and the post-fit residual measures stationarity. Under
//! the conjugate-first inner product `η₃` here is the conjugate of the
//! multiplier attached to `Φ₃`; the residual does not depend on that choice.

use nalgebra::{DMatrix, DVector};

use crate::landscape::coords::to_diag;
use crate::landscape::params::LandscapeParams;
use crate::linalg::C64;
use crate::stiefel::{KrausPoint, C4};

/// Residual below which a point counts as certified.
pub const CERTIFICATE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPointCertificate {
    pub point: KrausPoint,
    pub eta1: f64,
    pub eta2: f64,
    pub eta3: C64,
    pub stationarity_residual: f64,
    pub constraint_residual: f64,
}

impl CriticalPointCertificate {
    pub fn is_certified(&self) -> bool {
        self.stationarity_residual < CERTIFICATE_TOL && self.constraint_residual < CERTIFICATE_TOL
    }
}

fn push_block(col: &mut Vec<f64>, v: &C4, factor: C64) {
    for z in v {
        let y = factor * z;
        col.push(y.re);
        col.push(y.im);
    }
}

pub fn lagrange_certificate(p: &KrausPoint, params: &LandscapeParams) -> CriticalPointCertificate {
    let d = to_diag(p, params);
    let zero = [C64::from(0.0); 4];
    let (one, i) = (C64::from(1.0), C64::new(0.0, 1.0));
    let column = |blocks: [(&C4, C64); 4]| {
        let mut col = Vec::with_capacity(32);
        for (v, f) in blocks {
            push_block(&mut col, v, f);
        }
        col
    };
    // equation order: (e1 ũ-block 1, e2 ũ-block 2, e3 ṽ-block 1, e4 ṽ-block 2)
    let c_eta1 = column([(&d.ut1, one), (&zero, one), (&d.vt1, one), (&zero, one)]);
    let c_eta2 = column([(&zero, one), (&d.ut2, one), (&zero, one), (&d.vt2, one)]);
    let c_re3 = column([(&d.ut2, one), (&d.ut1, one), (&d.vt2, one), (&d.vt1, one)]);
    let c_im3 = column([(&d.ut2, i), (&d.ut1, -i), (&d.vt2, i), (&d.vt1, -i)]);
    let rhs = column([
        (&d.ut1, C64::from(params.lambda_plus)),
        (&d.ut2, C64::from(params.lambda_minus)),
        (&zero, one),
        (&zero, one),
    ]);

    let a = DMatrix::from_fn(32, 4, |r, c| [&c_eta1, &c_eta2, &c_re3, &c_im3][c][r]);
    let b = DVector::from_vec(rhs);
    let svd = a.clone().svd(true, true);
    let x = svd.solve(&(-&b), 1e-12).expect("U and V were requested");
    let residual = (&a * &x + &b).norm();

    CriticalPointCertificate {
        point: *p,
        eta1: x[0],
        eta2: x[1],
        eta3: C64::new(x[2], x[3]),
        stationarity_residual: residual,
        constraint_residual: p.residuals().max_abs(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::critical::{critical_point, CriticalManifoldId, ManifoldTag};
    use crate::stiefel::random_kraus_point;

    fn w(a: f64, b: f64, g: f64) -> LandscapeParams {
        LandscapeParams::from_components(a, b, g).unwrap()
    }

    #[test]
    fn global_min_has_zero_multipliers() {
        let params = w(0.0, 0.0, 0.5);
        let p = critical_point(&CriticalManifoldId::new(ManifoldTag::GlobalMin), &params, 0).unwrap();
        let cert = lagrange_certificate(&p, &params);
        assert!(cert.stationarity_residual < 1e-10);
        assert!(cert.eta1.abs() < 1e-10 && cert.eta2.abs() < 1e-10 && cert.eta3.norm() < 1e-10);
        assert!(cert.is_certified());
    }

    #[test]
    fn saddles_certify() {
        let params = w(0.0, 0.0, 0.5);
        for tag in [ManifoldTag::SaddleMinus, ManifoldTag::SaddlePlus, ManifoldTag::GlobalMax] {
            let p = critical_point(&CriticalManifoldId::new(tag), &params, 3).unwrap();
            assert!(lagrange_certificate(&p, &params).stationarity_residual < 1e-8);
        }
        let zero = w(0.0, 0.0, 0.0);
        let p = critical_point(&CriticalManifoldId::mixed(Some(C64::new(1.0, 1.0))), &zero, 3).unwrap();
        assert!(lagrange_certificate(&p, &zero).is_certified());
    }

    #[test]
    fn saddle_minus_multipliers() {
        // ũ₁ = ṽ₂ = 0 leaves e2: (λ₋ + η₂) ũ₂ = 0 and e3: η₁ ṽ₁ = 0
        let params = w(0.3, -0.4, 0.2);
        let p = critical_point(&CriticalManifoldId::new(ManifoldTag::SaddleMinus), &params, 5).unwrap();
        let cert = lagrange_certificate(&p, &params);
        assert!((cert.eta2 + params.lambda_minus).abs() < 1e-10);
        assert!(cert.eta1.abs() < 1e-10);
    }

    #[test]
    fn random_points_do_not_certify() {
        let params = w(0.3, -0.4, 0.2);
        for seed in 0..10 {
            let cert = lagrange_certificate(&random_kraus_point(seed), &params);
            assert!(cert.stationarity_residual > 1e-3);
            assert!(!cert.is_certified());
        }
    }
}
