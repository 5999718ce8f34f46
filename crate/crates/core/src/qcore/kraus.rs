use crate::error::{LandscapeError, Result};
use crate::linalg::{max_abs2, Mat2, C64};
use crate::qcore::state::DensityMatrix;
use crate::qcore::target::TargetOperator;

/// Default tolerance on `‖Σ K†K − I‖_max`.
pub const COMPLETENESS_TOL: f64 = 1e-10;

pub const MAX_OPERATORS: usize = 4;

/// Up to four 2×2 Kraus operators.
///
/// Construction through [`KrausSet::new`] enforces the completeness relation;
/// [`KrausSet::unchecked`] keeps an arbitrary list around so that its residual
/// can still be reported. Every channel operation re-checks completeness.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    operators: Vec<Mat2>,
    tolerance: f64,
}

impl KrausSet {
    pub fn new(operators: Vec<Mat2>) -> Result<Self> {
        Self::with_tolerance(operators, COMPLETENESS_TOL)
    }

    pub fn with_tolerance(operators: Vec<Mat2>, tolerance: f64) -> Result<Self> {
        let set = Self::unchecked(operators)?.tolerance(tolerance);
        set.check()?;
        Ok(set)
    }

    /// Count and finiteness are still validated; completeness is not.
    pub fn unchecked(operators: Vec<Mat2>) -> Result<Self> {
        if operators.is_empty() || operators.len() > MAX_OPERATORS {
            return Err(LandscapeError::KrausCount(operators.len()));
        }
        if operators
            .iter()
            .flat_map(|k| k.iter())
            .any(|z| !(z.re.is_finite() && z.im.is_finite()))
        {
            return Err(LandscapeError::NonFinite("Kraus operator"));
        }
        Ok(Self { operators, tolerance: COMPLETENESS_TOL })
    }

    pub fn tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn m(&self) -> usize {
        self.operators.len()
    }

    pub fn operators(&self) -> &[Mat2] {
        &self.operators
    }

    pub fn completeness_tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Returns the set extended with zero operators up to four entries.
    pub fn padded(&self) -> Self {
        let mut operators = self.operators.clone();
        operators.resize(MAX_OPERATORS, Mat2::zeros());
        Self { operators, tolerance: self.tolerance }
    }

    pub fn check(&self) -> Result<()> {
        let residual = completeness_residual(self);
        if residual < self.tolerance {
            Ok(())
        } else {
            Err(LandscapeError::Completeness { residual, tolerance: self.tolerance })
        }
    }

    pub fn identity() -> Self {
        Self { operators: vec![Mat2::identity()], tolerance: COMPLETENESS_TOL }
    }

    pub fn dephasing() -> Self {
        let p0 = Mat2::new(C64::from(1.0), C64::from(0.0), C64::from(0.0), C64::from(0.0));
        let p1 = Mat2::new(C64::from(0.0), C64::from(0.0), C64::from(0.0), C64::from(1.0));
        Self { operators: vec![p0, p1], tolerance: COMPLETENESS_TOL }
    }

    pub fn amplitude_damping(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(LandscapeError::Config(format!("damping probability {p} outside [0, 1]")));
        }
        let z = C64::from(0.0);
        let k1 = Mat2::new(C64::from(1.0), z, z, C64::from((1.0 - p).sqrt()));
        let k2 = Mat2::new(z, C64::from(p.sqrt()), z, z);
        Self::new(vec![k1, k2])
    }
}

/// `‖Σ K_l†K_l − I‖_max`.
pub fn completeness_residual(k: &KrausSet) -> f64 {
    let sum: Mat2 = k.operators.iter().map(|op| op.adjoint() * op).sum();
    max_abs2(&(sum - Mat2::identity()))
}

/// `Φ(ρ) = Σ K_l ρ K_l†`.
pub fn apply_kraus(k: &KrausSet, rho: &DensityMatrix) -> Result<DensityMatrix> {
    k.check()?;
    let out = channel_sum(k, rho.entries());
    DensityMatrix::new(out)
}

pub(crate) fn channel_sum(k: &KrausSet, rho: &Mat2) -> Mat2 {
    k.operators.iter().map(|op| op * rho * op.adjoint()).sum()
}

/// `J = Tr[Σ K_l ρ₀ K_l† Θ]`.
pub fn objective_trace(k: &KrausSet, rho0: &DensityMatrix, theta: &TargetOperator) -> Result<f64> {
    k.check()?;
    let out = channel_sum(k, rho0.entries());
    Ok((out * theta.entries()).trace().re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::qcore::state::{bloch_to_density, BlochVector};

    fn dm(a: f64, b: C64, d: f64) -> DensityMatrix {
        DensityMatrix::new(Mat2::new(C64::from(a), b, b.conj(), C64::from(d))).unwrap()
    }

    #[test]
    fn identity_channel_is_identity() {
        let rho = dm(0.3, c(0.2, -0.1), 0.7);
        let out = apply_kraus(&KrausSet::identity(), &rho).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn dephasing_kills_coherences() {
        let rho = dm(0.35, c(0.3, 0.25), 0.65);
        let out = apply_kraus(&KrausSet::dephasing(), &rho).unwrap();
        let want = Mat2::new(c(0.35, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.65, 0.0));
        assert!(max_abs2(&(out.entries() - want)) < 1e-15);
    }

    #[test]
    fn amplitude_damping_example() {
        let k = KrausSet::amplitude_damping(0.3).unwrap();
        let out = apply_kraus(&k, &dm(0.0, c(0.0, 0.0), 1.0)).unwrap();
        let want = Mat2::new(c(0.3, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.7, 0.0));
        assert!(max_abs2(&(out.entries() - want)) < 1e-15);
        assert!(completeness_residual(&k) <= 1e-15);
    }

    #[test]
    fn residual_examples() {
        assert_eq!(completeness_residual(&KrausSet::identity()), 0.0);
        let doubled = KrausSet::unchecked(vec![Mat2::identity(), Mat2::identity()]).unwrap();
        assert_eq!(completeness_residual(&doubled), 1.0);
        assert!(matches!(
            apply_kraus(&doubled, &dm(0.5, c(0.0, 0.0), 0.5)),
            Err(LandscapeError::Completeness { residual, .. }) if residual == 1.0
        ));
        assert!(KrausSet::new(vec![Mat2::identity(), Mat2::identity()]).is_err());
    }

    #[test]
    fn operator_count_is_bounded() {
        assert!(matches!(KrausSet::unchecked(vec![]), Err(LandscapeError::KrausCount(0))));
        assert!(KrausSet::unchecked(vec![Mat2::zeros(); 5]).is_err());
    }

    #[test]
    fn objective_trace_examples() {
        let theta0 = TargetOperator::theta0();
        let north = bloch_to_density(&BlochVector::new(0.0, 0.0, 1.0).unwrap());
        assert_eq!(objective_trace(&KrausSet::identity(), &north, &theta0).unwrap(), 1.0);

        let rho = bloch_to_density(&BlochVector::new(0.8, 0.0, 0.0).unwrap());
        let j = objective_trace(&KrausSet::dephasing(), &rho, &theta0).unwrap();
        assert!((j - 0.5).abs() < 1e-15);

        let ident = TargetOperator::new(Mat2::identity()).unwrap();
        let j = objective_trace(&KrausSet::identity(), &dm(0.2, c(0.1, 0.3), 0.8), &ident).unwrap();
        assert!((j - 1.0).abs() < 1e-15);
    }
}
