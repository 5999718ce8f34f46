//! Exact constructors for every critical sub-manifold, in diagonal coordinates.
//!
//! | manifold      | condition              | value | legal for        |
//! |---------------|------------------------|-------|------------------|
//! | global min    | ũ₁ = ũ₂ = 0 (ũ₁ = 0)   | 0     | all w            |
//! | global max    | ṽ₁ = ṽ₂ = 0 (ṽ₁ = 0)   | 1     | all w            |
//! | saddle minus  | ũ₁ = ṽ₂ = 0            | λ₋    | 0 < ‖w‖ < 1      |
//! | saddle plus   | ũ₂ = ṽ₁ = 0            | λ₊    | 0 < ‖w‖ < 1      |
//! | mixed saddle  | ũ₂ = zũ₁, ṽ₁ = −z*ṽ₂   | ½     | w = 0            |
//!
//! The bracketed conditions apply to pure states, where the extremal sets grow.

use serde::{Deserialize, Serialize};

use crate::error::{LandscapeError, Result};
use crate::landscape::coords::{from_diag, DiagCoords};
use crate::landscape::params::{LandscapeCase, LandscapeParams};
use crate::linalg::{CMatrix, C64, ONE};
use crate::stiefel::{derive_seed, random_point, KrausPoint, C4};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ManifoldTag {
    GlobalMin,
    GlobalMax,
    SaddleMinus,
    SaddlePlus,
    MixedSaddle,
}

impl ManifoldTag {
    pub const ALL: [ManifoldTag; 5] = [
        ManifoldTag::GlobalMin,
        ManifoldTag::GlobalMax,
        ManifoldTag::SaddleMinus,
        ManifoldTag::SaddlePlus,
        ManifoldTag::MixedSaddle,
    ];

    pub fn is_saddle(self) -> bool {
        matches!(self, Self::SaddleMinus | Self::SaddlePlus | Self::MixedSaddle)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::GlobalMin => "global-min",
            Self::GlobalMax => "global-max",
            Self::SaddleMinus => "saddle-minus",
            Self::SaddlePlus => "saddle-plus",
            Self::MixedSaddle => "mixed",
        }
    }
}

impl std::str::FromStr for ManifoldTag {
    type Err = LandscapeError;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| LandscapeError::Parse(format!("unknown manifold '{s}'")))
    }
}

/// A critical sub-manifold; `z` picks the chart of the mixed saddle
/// (`None` is the boundary chart `ũ₁ = ṽ₂ = 0`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalManifoldId {
    pub tag: ManifoldTag,
    pub z: Option<C64>,
}

impl CriticalManifoldId {
    pub fn new(tag: ManifoldTag) -> Self {
        Self { tag, z: None }
    }

    pub fn mixed(z: Option<C64>) -> Self {
        Self { tag: ManifoldTag::MixedSaddle, z }
    }

    pub fn check_legal(&self, params: &LandscapeParams) -> Result<()> {
        let illegal = |reason| {
            Err(LandscapeError::IllegalManifold { id: *self, norm_w: params.norm_w, reason })
        };
        let case = params.case();
        match self.tag {
            ManifoldTag::GlobalMin | ManifoldTag::GlobalMax => Ok(()),
            ManifoldTag::MixedSaddle if case != LandscapeCase::Mixed => {
                illegal("the mixed saddle exists only for w = 0")
            }
            ManifoldTag::SaddleMinus | ManifoldTag::SaddlePlus if case == LandscapeCase::Pure => {
                illegal("a pure initial state has no saddles")
            }
            ManifoldTag::SaddleMinus | ManifoldTag::SaddlePlus if case == LandscapeCase::Mixed => {
                illegal("w = 0 has only the mixed saddle")
            }
            _ => Ok(()),
        }
    }
}

/// Counts of positive, negative and zero Hessian eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseSignature {
    pub nu_plus: usize,
    pub nu_minus: usize,
    pub nu_zero: usize,
}

impl MorseSignature {
    pub fn total(&self) -> usize {
        self.nu_plus + self.nu_minus + self.nu_zero
    }
}

impl std::fmt::Display for MorseSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.nu_plus, self.nu_minus, self.nu_zero)
    }
}

pub fn predicted_value(id: &CriticalManifoldId, params: &LandscapeParams) -> Result<f64> {
    id.check_legal(params)?;
    Ok(match id.tag {
        ManifoldTag::GlobalMin => 0.0,
        ManifoldTag::GlobalMax => 1.0,
        ManifoldTag::SaddleMinus => params.lambda_minus,
        ManifoldTag::SaddlePlus => params.lambda_plus,
        ManifoldTag::MixedSaddle => 0.5,
    })
}

pub fn predicted_morse(id: &CriticalManifoldId, params: &LandscapeParams) -> Result<MorseSignature> {
    if !id.tag.is_saddle() {
        return Err(LandscapeError::NotASaddle(*id));
    }
    id.check_legal(params)?;
    let (nu_plus, nu_minus, nu_zero) = match id.tag {
        ManifoldTag::SaddleMinus => (8, 6, 14),
        ManifoldTag::SaddlePlus => (6, 8, 14),
        _ => (6, 6, 16),
    };
    Ok(MorseSignature { nu_plus, nu_minus, nu_zero })
}

const ZERO4: C4 = [C64::new(0.0, 0.0); 4];

fn subseed(seed: u64, slot: u64) -> u64 {
    derive_seed(seed, slot)
}

fn unit4(seed: u64) -> C4 {
    let x = random_point(4, 1, seed).expect("4 ≥ 1");
    std::array::from_fn(|i| x.frame()[(i, 0)])
}

fn frame4(seed: u64) -> (C4, C4) {
    let x = random_point(4, 2, seed).expect("4 ≥ 2");
    let f = x.frame();
    (std::array::from_fn(|i| f[(i, 0)]), std::array::from_fn(|i| f[(i, 1)]))
}

/// Haar point of `{X = a ⊕ 0 or 0 ⊕ a, Y ⊥ X}`: `X` confined to one half, `Y` free.
fn half_confined(seed: u64, top: bool) -> (CMatrix, CMatrix) {
    let a = unit4(subseed(seed, 1));
    let mut x = CMatrix::zeros(8, 1);
    let off = if top { 0 } else { 4 };
    for i in 0..4 {
        x[(i + off, 0)] = a[i];
    }
    let mut y = random_point(8, 1, subseed(seed, 2)).expect("8 ≥ 1").frame().clone();
    for _ in 0..2 {
        let proj = x.column(0).dotc(&y.column(0));
        let xc = x.column(0).clone_owned();
        y.column_mut(0).axpy(-proj, &xc, ONE);
    }
    let n = y.norm();
    (x, y / C64::from(n))
}

fn split(col: &CMatrix) -> (C4, C4) {
    (std::array::from_fn(|i| col[(i, 0)]), std::array::from_fn(|i| col[(i + 4, 0)]))
}

/// A seeded, Haar-random point of the requested critical sub-manifold.
pub fn critical_point(id: &CriticalManifoldId, params: &LandscapeParams, seed: u64) -> Result<KrausPoint> {
    id.check_legal(params)?;
    let pure = params.case() == LandscapeCase::Pure;
    let d = match id.tag {
        ManifoldTag::GlobalMin if pure => {
            let (x, y) = half_confined(seed, false);
            let (ut1, vt1) = split(&x);
            let (ut2, vt2) = split(&y);
            DiagCoords { ut1, ut2, vt1, vt2 }
        }
        ManifoldTag::GlobalMax if pure => {
            let (x, y) = half_confined(seed, true);
            let (ut1, vt1) = split(&x);
            let (ut2, vt2) = split(&y);
            DiagCoords { ut1, ut2, vt1, vt2 }
        }
        ManifoldTag::GlobalMin => {
            let (vt1, vt2) = frame4(seed);
            DiagCoords { ut1: ZERO4, ut2: ZERO4, vt1, vt2 }
        }
        ManifoldTag::GlobalMax => {
            let (ut1, ut2) = frame4(seed);
            DiagCoords { ut1, ut2, vt1: ZERO4, vt2: ZERO4 }
        }
        ManifoldTag::SaddleMinus => DiagCoords {
            ut1: ZERO4,
            ut2: unit4(subseed(seed, 1)),
            vt1: unit4(subseed(seed, 2)),
            vt2: ZERO4,
        },
        ManifoldTag::SaddlePlus => DiagCoords {
            ut1: unit4(subseed(seed, 1)),
            ut2: ZERO4,
            vt1: ZERO4,
            vt2: unit4(subseed(seed, 2)),
        },
        ManifoldTag::MixedSaddle => match id.z {
            None => DiagCoords {
                ut1: ZERO4,
                ut2: unit4(subseed(seed, 1)),
                vt1: unit4(subseed(seed, 2)),
                vt2: ZERO4,
            },
            Some(z) => {
                // ‖ũ₁‖ = ‖ṽ₂‖ = r with r²(1+|z|²) = 1 meets Φ₁ and Φ₂; Φ₃ = z r² − z r² = 0
                let r = 1.0 / (1.0 + z.norm_sqr()).sqrt();
                let a = unit4(subseed(seed, 1)).map(|x| x * r);
                let b = unit4(subseed(seed, 2)).map(|x| x * r);
                DiagCoords { ut1: a, ut2: a.map(|x| z * x), vt1: b.map(|x| -z.conj() * x), vt2: b }
            }
        },
    };
    let p = from_diag(&d, params);
    KrausPoint::new(*p.blocks())
}
