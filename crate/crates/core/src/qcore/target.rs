use crate::error::{LandscapeError, Result};
use crate::linalg::{hermitian_eig2, max_abs2, Mat2, C64};
use crate::qcore::kraus::KrausSet;
use crate::qcore::state::DensityMatrix;

const HERMITIAN_TOL: f64 = 1e-12;

/// Hermitian observable Θ with its eigen-decomposition cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetOperator {
    entries: Mat2,
    lambda1: f64,
    lambda2: f64,
    basis: Mat2,
}

impl TargetOperator {
    pub fn new(entries: Mat2) -> Result<Self> {
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(LandscapeError::NonFinite("target operator"));
        }
        let dev = max_abs2(&(entries - entries.adjoint()));
        if dev >= HERMITIAN_TOL {
            return Err(LandscapeError::NotHermitian(dev));
        }
        let (lambda1, lambda2, basis) = hermitian_eig2(&entries);
        Ok(Self { entries, lambda1, lambda2, basis })
    }

    /// The projector `|0⟩⟨0|` every target reduces to.
    pub fn theta0() -> Self {
        let z = C64::from(0.0);
        Self::new(Mat2::new(C64::from(1.0), z, z, z)).expect("projector is Hermitian")
    }

    pub fn entries(&self) -> &Mat2 {
        &self.entries
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn basis(&self) -> &Mat2 {
        &self.basis
    }
}

/// `Θ = scale·V Θ₀ V† + offset·I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetReduction {
    pub scale: f64,
    pub offset: f64,
    pub basis: Mat2,
}

impl TargetReduction {
    /// A zero scale means the landscape is flat.
    pub fn is_flat(&self) -> bool {
        self.scale == 0.0
    }

    /// Expresses a channel and initial state in the eigenbasis of Θ, where the
    /// target becomes `scale·Θ₀ + offset`.
    pub fn rotate_problem(&self, k: &KrausSet, rho: &DensityMatrix) -> Result<(KrausSet, DensityMatrix)> {
        let v = &self.basis;
        let ops = k.operators().iter().map(|op| v.adjoint() * op * v).collect();
        let rotated = KrausSet::with_tolerance(ops, k.completeness_tolerance())?;
        let rho = DensityMatrix::new(v.adjoint() * rho.entries() * v)?;
        Ok((rotated, rho))
    }
}

pub fn reduce_target(theta: &TargetOperator) -> TargetReduction {
    TargetReduction {
        scale: theta.lambda1 - theta.lambda2,
        offset: theta.lambda2,
        basis: theta.basis,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    #[test]
    fn reduce_examples() {
        let r = reduce_target(&TargetOperator::theta0());
        assert_eq!((r.scale, r.offset), (1.0, 0.0));
        assert_eq!(r.basis, Mat2::identity());

        let d = TargetOperator::new(Mat2::new(c(2.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0))).unwrap();
        let r = reduce_target(&d);
        assert_eq!((r.scale, r.offset), (3.0, -1.0));
        assert_eq!(r.basis, Mat2::identity());

        let sx = TargetOperator::new(Mat2::new(c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0))).unwrap();
        let r = reduce_target(&sx);
        assert!((r.scale - 2.0).abs() < 1e-15 && (r.offset + 1.0).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.basis[(0, 0)].re - h).abs() < 1e-15 && (r.basis[(1, 0)].re - h).abs() < 1e-15);
    }

    #[test]
    fn degenerate_target_is_flat() {
        let r = reduce_target(&TargetOperator::new(Mat2::identity() * c(0.4, 0.0)).unwrap());
        assert!(r.is_flat());
        assert_eq!(r.offset, 0.4);
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Mat2::new(c(1.0, 0.0), c(0.0, 1.0), c(0.0, 1.0), c(0.0, 0.0));
        assert!(matches!(TargetOperator::new(m), Err(LandscapeError::NotHermitian(_))));
    }
}
