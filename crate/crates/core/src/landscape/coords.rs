//! The unitary change of coordinates that diagonalizes the objective.
//!
//! Generic branch (`z₀ ≠ 0`), with `q = z₀/|z₀|`:
//!
//! ```text
//! u₁ = μ ũ₁ − ν ũ₂        u₂ = q (ν ũ₁ + μ ũ₂)
//! ũ₁ = μ u₁ + q* ν u₂     ũ₂ = −ν u₁ + q* μ u₂
//! ```
//!
//! and the same for `v`. In these coordinates `J = λ₊‖ũ₁‖² + λ₋‖ũ₂‖²`.
//! For `z₀ = 0` the map is the identity (`γ ≥ 0`) or the swap `1 ↔ 2` (`γ < 0`).

use serde::{Deserialize, Serialize};

use crate::landscape::params::LandscapeParams;
use crate::linalg::C64;
use crate::stiefel::{Blocks, KrausPoint, C4};

/// `|z₀|` below this selects the `z₀ = 0` branches.
pub const Z0_BRANCH_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoordBranch {
    Generic,
    Z0ZeroGammaNonneg,
    Z0ZeroGammaNeg,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoordChange {
    pub mu: f64,
    pub nu: f64,
    pub phase: C64,
    pub branch: CoordBranch,
}

impl CoordChange {
    pub fn new(params: &LandscapeParams) -> Self {
        let r = params.z0.norm();
        let gamma = params.gamma();
        if r < Z0_BRANCH_TOL {
            let branch = if gamma >= 0.0 { CoordBranch::Z0ZeroGammaNonneg } else { CoordBranch::Z0ZeroGammaNeg };
            return Self { mu: 1.0, nu: 0.0, phase: C64::from(1.0), branch };
        }
        let n = params.norm_w;
        // μ = |z₀|/√(2‖w‖(‖w‖−γ)) = √((‖w‖+γ)/(2‖w‖)), ν = |z₀|/√(2‖w‖(‖w‖+γ));
        // take the root without cancellation and recover the other from μν = |z₀|/(2‖w‖)
        let (mu, nu) = if gamma >= 0.0 {
            let mu = ((n + gamma) / (2.0 * n)).sqrt();
            (mu, r / (2.0 * n * mu))
        } else {
            let nu = ((n - gamma) / (2.0 * n)).sqrt();
            (r / (2.0 * n * nu), nu)
        };
        Self { mu, nu, phase: params.z0 / r, branch: CoordBranch::Generic }
    }
}

/// Blocks `(ũ₁, ũ₂, ṽ₁, ṽ₂)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DiagCoords {
    pub ut1: C4,
    pub ut2: C4,
    pub vt1: C4,
    pub vt2: C4,
}

impl DiagCoords {
    pub fn as_blocks(&self) -> Blocks {
        Blocks { u1: self.ut1, u2: self.ut2, v1: self.vt1, v2: self.vt2 }
    }

    pub fn from_blocks(b: &Blocks) -> Self {
        Self { ut1: b.u1, ut2: b.u2, vt1: b.v1, vt2: b.v2 }
    }
}

fn forward_pair(ch: &CoordChange, a: &C4, b: &C4) -> (C4, C4) {
    // (u₁, u₂) → (ũ₁, ũ₂)
    let qc = ch.phase.conj();
    let mut t1 = [C64::from(0.0); 4];
    let mut t2 = [C64::from(0.0); 4];
    for i in 0..4 {
        t1[i] = a[i] * ch.mu + qc * b[i] * ch.nu;
        t2[i] = -a[i] * ch.nu + qc * b[i] * ch.mu;
    }
    (t1, t2)
}

fn inverse_pair(ch: &CoordChange, t1: &C4, t2: &C4) -> (C4, C4) {
    let mut a = [C64::from(0.0); 4];
    let mut b = [C64::from(0.0); 4];
    for i in 0..4 {
        a[i] = t1[i] * ch.mu - t2[i] * ch.nu;
        b[i] = ch.phase * (t1[i] * ch.nu + t2[i] * ch.mu);
    }
    (a, b)
}

pub fn to_diag_blocks(b: &Blocks, params: &LandscapeParams) -> DiagCoords {
    let ch = CoordChange::new(params);
    match ch.branch {
        CoordBranch::Z0ZeroGammaNonneg => DiagCoords::from_blocks(b),
        CoordBranch::Z0ZeroGammaNeg => DiagCoords { ut1: b.u2, ut2: b.u1, vt1: b.v2, vt2: b.v1 },
        CoordBranch::Generic => {
            let (ut1, ut2) = forward_pair(&ch, &b.u1, &b.u2);
            let (vt1, vt2) = forward_pair(&ch, &b.v1, &b.v2);
            DiagCoords { ut1, ut2, vt1, vt2 }
        }
    }
}

pub fn from_diag_blocks(d: &DiagCoords, params: &LandscapeParams) -> Blocks {
    let ch = CoordChange::new(params);
    match ch.branch {
        CoordBranch::Z0ZeroGammaNonneg => d.as_blocks(),
        CoordBranch::Z0ZeroGammaNeg => Blocks { u1: d.ut2, u2: d.ut1, v1: d.vt2, v2: d.vt1 },
        CoordBranch::Generic => {
            let (u1, u2) = inverse_pair(&ch, &d.ut1, &d.ut2);
            let (v1, v2) = inverse_pair(&ch, &d.vt1, &d.vt2);
            Blocks { u1, u2, v1, v2 }
        }
    }
}

pub fn to_diag(p: &KrausPoint, params: &LandscapeParams) -> DiagCoords {
    to_diag_blocks(p.blocks(), params)
}

/// The map is unitary, so feasibility carries over; residual drift is at
/// rounding level.
pub fn from_diag(d: &DiagCoords, params: &LandscapeParams) -> KrausPoint {
    KrausPoint::new_unchecked(from_diag_blocks(d, params))
}
