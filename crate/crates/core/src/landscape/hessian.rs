//! Hessian of the objective pulled back through a retraction.
//!
//! At a critical point the second derivative of `s ↦ J(R(x, Σ sᵢtᵢ))` is the
//! Riemannian Hessian whatever retraction `R` is used. Away from critical
//! points it is retraction dependent, and [`hessian_form`] logs a warning.

use nalgebra::DMatrix;

use crate::error::Result;
use crate::landscape::critical::MorseSignature;
use crate::landscape::gradient::riemannian_gradient_at;
use crate::landscape::objective::objective_frame;
use crate::landscape::params::LandscapeParams;
use crate::stiefel::{orthonormal_tangent_basis, retract, KrausPoint, Retraction, TangentBasis};

/// Central-difference step on the pulled-back function.
pub const HESSIAN_STEP: f64 = 1e-4;
/// Relative zero threshold τ for eigenvalue classification.
pub const ZERO_EIGEN_TAU: f64 = 1e-5;
/// Gradient norm above which the computed signature is not meaningful.
pub const CRITICAL_GRAD_WARN: f64 = 1e-6;

pub fn hessian_form(p: &KrausPoint, params: &LandscapeParams, basis: &TangentBasis) -> Result<DMatrix<f64>> {
    let x = p.to_stiefel();
    let grad = riemannian_gradient_at(&x, params).norm();
    if grad > CRITICAL_GRAD_WARN {
        log::warn!("Hessian requested at a non-critical point (gradient norm {grad:e}); signature is retraction dependent");
    }
    let dim = basis.len();
    let h = HESSIAN_STEP;
    let mut coeffs = vec![0.0; dim];
    let eval = |coeffs: &[f64]| -> Result<f64> {
        let t = basis.combine(coeffs);
        let y = retract(&x, &t, Retraction::Qr)?;
        Ok(objective_frame(y.frame(), params))
    };
    let f0 = eval(&coeffs)?;
    let mut hess = DMatrix::<f64>::zeros(dim, dim);
    for i in 0..dim {
        coeffs[i] = h;
        let fp = eval(&coeffs)?;
        coeffs[i] = -h;
        let fm = eval(&coeffs)?;
        coeffs[i] = 0.0;
        hess[(i, i)] = (fp - 2.0 * f0 + fm) / (h * h);
    }
    for i in 0..dim {
        for j in (i + 1)..dim {
            let mut corner = |si: f64, sj: f64| -> Result<f64> {
                coeffs[i] = si;
                coeffs[j] = sj;
                let v = eval(&coeffs);
                coeffs[i] = 0.0;
                coeffs[j] = 0.0;
                v
            };
            let fpp = corner(h, h)?;
            let fpm = corner(h, -h)?;
            let fmp = corner(-h, h)?;
            let fmm = corner(-h, -h)?;
            let v = (fpp - fpm - fmp + fmm) / (4.0 * h * h);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    Ok(hess)
}

/// Eigenvalues with `|e| < τ·max(1, ρ)` count as zero.
pub fn classify_eigenvalues(eigs: &[f64], tau: f64) -> MorseSignature {
    let radius = eigs.iter().fold(0.0f64, |m, e| m.max(e.abs()));
    let thresh = tau * radius.max(1.0);
    let mut sig = MorseSignature { nu_plus: 0, nu_minus: 0, nu_zero: 0 };
    for &e in eigs {
        if e.abs() < thresh {
            sig.nu_zero += 1;
        } else if e > 0.0 {
            sig.nu_plus += 1;
        } else {
            sig.nu_minus += 1;
        }
    }
    sig
}

pub fn hessian_eigenvalues(hess: &DMatrix<f64>) -> Vec<f64> {
    let sym = (hess + hess.transpose()) * 0.5;
    let mut eigs: Vec<f64> = sym.symmetric_eigenvalues().iter().cloned().collect();
    eigs.sort_by(|a, b| a.total_cmp(b));
    eigs
}

/// Signature at `p` with a fresh tangent basis; eigenvalues are returned too.
pub fn morse_signature(p: &KrausPoint, params: &LandscapeParams) -> Result<(MorseSignature, Vec<f64>)> {
    let basis = orthonormal_tangent_basis(&p.to_stiefel());
    let hess = hessian_form(p, params, &basis)?;
    let eigs = hessian_eigenvalues(&hess);
    Ok((classify_eigenvalues(&eigs, ZERO_EIGEN_TAU), eigs))
}
