//! Small dense complex linear algebra used throughout the crate.
//!
//! Inner products are conjugate-linear in the FIRST argument:
//! `inner(a, b) = Σ conj(a_i) b_i`. Every module relies on this convention.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{LandscapeError, Result};

pub type C64 = Complex64;
pub type Mat2 = Matrix2<C64>;
pub type CMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Column norms below this are treated as a collapsed rank.
pub const RANK_FLOOR: f64 = 1e-12;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Checked constructor for a complex scalar; rejects NaN and infinities.
pub fn finite_complex(re: f64, im: f64) -> Result<C64> {
    if re.is_finite() && im.is_finite() {
        Ok(C64::new(re, im))
    } else {
        Err(LandscapeError::NonFinite("complex scalar"))
    }
}

#[inline]
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[inline]
pub fn norm_sqr(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

/// Real part of the Frobenius inner product, `Re tr(a† b)`.
pub fn real_inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn max_abs2(m: &Mat2) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// `‖A†A − I‖_max` for a matrix whose columns should be orthonormal.
pub fn orthonormality_residual(a: &CMatrix) -> f64 {
    let gram = a.adjoint() * a;
    let k = gram.nrows();
    max_abs(&(gram - CMatrix::identity(k, k)))
}

/// Thin QR factor with positive real diagonal in R, by modified Gram–Schmidt
/// with one reorthogonalization pass.
pub fn qr_q(a: &CMatrix) -> Result<CMatrix> {
    let mut q = a.clone();
    let k = q.ncols();
    for j in 0..k {
        for _ in 0..2 {
            for i in 0..j {
                let proj = q.column(i).dotc(&q.column(j));
                let qi = q.column(i).clone_owned();
                q.column_mut(j).axpy(-proj, &qi, ONE);
            }
        }
        let nrm = q.column(j).norm();
        if !(nrm > RANK_FLOOR) {
            return Err(LandscapeError::RankCollapse(nrm));
        }
        q.column_mut(j).scale_mut(1.0 / nrm);
    }
    Ok(q)
}

/// Unitary polar factor `A (A†A)^{-1/2}`.
pub fn polar_q(a: &CMatrix) -> Result<CMatrix> {
    let gram = a.adjoint() * a;
    let eig = gram.symmetric_eigen();
    let min = eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min);
    if !(min > RANK_FLOOR * RANK_FLOOR) {
        return Err(LandscapeError::RankCollapse(min.max(0.0).sqrt()));
    }
    let inv_sqrt = eig.eigenvalues.map(|l| C64::from(1.0 / l.sqrt()));
    let v = &eig.eigenvectors;
    let root = v * CMatrix::from_diagonal(&inv_sqrt) * v.adjoint();
    Ok(a * root)
}

/// Closed-form eigendecomposition of a 2×2 Hermitian matrix.
///
/// Returns `(λ₁, λ₂, V)` with `λ₁ ≥ λ₂` and the eigenvectors as the columns of
/// the unitary `V`. A scalar matrix returns the identity basis.
pub fn hermitian_eig2(m: &Mat2) -> (f64, f64, Mat2) {
    let a = m[(0, 0)].re;
    let d = m[(1, 1)].re;
    let b = m[(0, 1)];
    let mean = 0.5 * (a + d);
    let half_gap = 0.5 * (a - d);
    let r = half_gap.hypot(b.norm());
    let (l1, l2) = (mean + r, mean - r);
    if r == 0.0 {
        return (l1, l2, Mat2::identity());
    }
    // two algebraically equivalent eigenvectors for λ₁; keep the better scaled one
    let (x, y) = if -half_gap + r >= half_gap + r {
        (b, C64::from(-half_gap + r))
    } else {
        (C64::from(half_gap + r), b.conj())
    };
    let n = (x.norm_sqr() + y.norm_sqr()).sqrt();
    let (x, y) = (x / n, y / n);
    let basis = Mat2::new(x, -y.conj(), y, x.conj());
    (l1, l2, basis)
}

pub fn is_finite_matrix(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}
