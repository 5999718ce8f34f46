use crate::error::{LandscapeError, Result};
use crate::linalg::{max_abs2, Mat2, C64};

/// Slack allowed on `‖w‖ ≤ 1` and on the density-matrix invariants.
pub const STATE_TOL: f64 = 1e-12;

/// Stokes vector `w = (α, β, γ)` of a two-level state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlochVector {
    alpha: f64,
    beta: f64,
    gamma: f64,
}

impl BlochVector {
    pub fn new(alpha: f64, beta: f64, gamma: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite() && gamma.is_finite()) {
            return Err(LandscapeError::NonFinite("Bloch vector"));
        }
        let w = Self { alpha, beta, gamma };
        let norm = w.norm();
        if norm > 1.0 + STATE_TOL {
            return Err(LandscapeError::NotAState { norm });
        }
        Ok(w)
    }

    pub fn origin() -> Self {
        Self { alpha: 0.0, beta: 0.0, gamma: 0.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn components(&self) -> [f64; 3] {
        [self.alpha, self.beta, self.gamma]
    }

    pub fn norm(&self) -> f64 {
        self.alpha.hypot(self.beta).hypot(self.gamma)
    }
}

/// A 2×2 density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    entries: Mat2,
}

impl DensityMatrix {
    pub fn new(entries: Mat2) -> Result<Self> {
        if entries.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(LandscapeError::NonFinite("density matrix"));
        }
        let herm_dev = max_abs2(&(entries - entries.adjoint()));
        if herm_dev >= STATE_TOL {
            return Err(LandscapeError::InvalidDensity(format!(
                "not Hermitian (deviation {herm_dev:e})"
            )));
        }
        let tr = entries[(0, 0)].re + entries[(1, 1)].re;
        if (tr - 1.0).abs() >= STATE_TOL {
            return Err(LandscapeError::InvalidDensity(format!("trace {tr}")));
        }
        let (_, lmin, _) = crate::linalg::hermitian_eig2(&hermitian_part(&entries));
        if lmin < -STATE_TOL {
            return Err(LandscapeError::InvalidDensity(format!(
                "negative eigenvalue {lmin:e}"
            )));
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &Mat2 {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        self.entries[(0, 0)].re + self.entries[(1, 1)].re
    }
}

fn hermitian_part(m: &Mat2) -> Mat2 {
    (m + m.adjoint()) * C64::from(0.5)
}

/// `ρ = ½(I + ασ_x + βσ_y + γσ_z)`.
pub fn bloch_to_density(w: &BlochVector) -> DensityMatrix {
    let half = 0.5;
    let off = C64::new(half * w.alpha, -half * w.beta);
    let entries = Mat2::new(
        C64::from(half * (1.0 + w.gamma)),
        off,
        off.conj(),
        C64::from(half * (1.0 - w.gamma)),
    );
    DensityMatrix { entries }
}

pub fn density_to_bloch(rho: &DensityMatrix) -> BlochVector {
    let m = &rho.entries;
    let off = m[(0, 1)];
    BlochVector {
        alpha: 2.0 * off.re,
        beta: -2.0 * off.im,
        gamma: m[(0, 0)].re - m[(1, 1)].re,
    }
}
