//! Kraus quadruples as points of V₂(C⁸).
//!
//! For operators `K_l = [[a_l, b_l], [c_l, d_l]]`, l = 1..4, the block vectors are
//! `u₁ = (a_l)`, `v₁ = (c_l)`, `u₂ = (b_l)`, `v₂ = (d_l)`. The first column of
//! every operator stacks into `X = u₁ ⊕ v₁` and the second into `Y = u₂ ⊕ v₂`,
//! so `Σ K†K = I` is exactly orthonormality of `(X, Y)`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{LandscapeError, Result};
use crate::linalg::{inner, norm_sqr, CMatrix, Mat2, C64};
use crate::qcore::{KrausSet, MAX_OPERATORS};
use crate::stiefel::point::{StiefelPoint, FRAME_TOL};

pub type C4 = [C64; 4];

const ZERO4: C4 = [C64::new(0.0, 0.0); 4];

/// Four C⁴ blocks with no feasibility guarantee; also used for ambient
/// directions such as gradients.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Blocks {
    pub u1: C4,
    pub u2: C4,
    pub v1: C4,
    pub v2: C4,
}

impl Blocks {
    pub fn zero() -> Self {
        Self { u1: ZERO4, u2: ZERO4, v1: ZERO4, v2: ZERO4 }
    }

    /// 8×2 matrix with columns `u₁ ⊕ v₁` and `u₂ ⊕ v₂`.
    pub fn to_matrix(&self) -> CMatrix {
        let mut m = CMatrix::zeros(8, 2);
        for i in 0..4 {
            m[(i, 0)] = self.u1[i];
            m[(i + 4, 0)] = self.v1[i];
            m[(i, 1)] = self.u2[i];
            m[(i + 4, 1)] = self.v2[i];
        }
        m
    }

    pub fn from_matrix(m: &CMatrix) -> Result<Self> {
        if m.nrows() != 8 || m.ncols() != 2 {
            return Err(LandscapeError::Dimension(format!(
                "Kraus point needs an 8×2 frame, got {}×{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let mut b = Self::zero();
        for i in 0..4 {
            b.u1[i] = m[(i, 0)];
            b.v1[i] = m[(i + 4, 0)];
            b.u2[i] = m[(i, 1)];
            b.v2[i] = m[(i + 4, 1)];
        }
        Ok(b)
    }

    pub fn is_finite(&self) -> bool {
        [self.u1, self.u2, self.v1, self.v2]
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

/// `(Φ₁, Φ₂, Φ₃) = (‖u₁‖²+‖v₁‖²−1, ‖u₂‖²+‖v₂‖²−1, ⟨u₁,u₂⟩+⟨v₁,v₂⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstraintResiduals {
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: C64,
}

impl ConstraintResiduals {
    pub fn max_abs(&self) -> f64 {
        self.phi1.abs().max(self.phi2.abs()).max(self.phi3.norm())
    }

    pub fn is_feasible(&self) -> bool {
        self.phi1.abs() < FRAME_TOL && self.phi2.abs() < FRAME_TOL && self.phi3.norm() < FRAME_TOL
    }
}

pub fn constraint_residuals(b: &Blocks) -> ConstraintResiduals {
    ConstraintResiduals {
        phi1: norm_sqr(&b.u1) + norm_sqr(&b.v1) - 1.0,
        phi2: norm_sqr(&b.u2) + norm_sqr(&b.v2) - 1.0,
        phi3: inner(&b.u1, &b.u2) + inner(&b.v1, &b.v2),
    }
}

/// A feasible Kraus quadruple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrausPoint {
    blocks: Blocks,
}

impl KrausPoint {
    pub fn new(blocks: Blocks) -> Result<Self> {
        if !blocks.is_finite() {
            return Err(LandscapeError::NonFinite("Kraus point"));
        }
        let r = constraint_residuals(&blocks);
        if !r.is_feasible() {
            return Err(LandscapeError::NotOrthonormal(r.max_abs()));
        }
        Ok(Self { blocks })
    }

    pub(crate) fn new_unchecked(blocks: Blocks) -> Self {
        Self { blocks }
    }

    pub fn blocks(&self) -> &Blocks {
        &self.blocks
    }

    pub fn u1(&self) -> &C4 {
        &self.blocks.u1
    }

    pub fn u2(&self) -> &C4 {
        &self.blocks.u2
    }

    pub fn v1(&self) -> &C4 {
        &self.blocks.v1
    }

    pub fn v2(&self) -> &C4 {
        &self.blocks.v2
    }

    pub fn to_stiefel(&self) -> StiefelPoint {
        StiefelPoint::new_unchecked(self.blocks.to_matrix())
    }

    pub fn from_stiefel(x: &StiefelPoint) -> Result<Self> {
        let blocks = Blocks::from_matrix(x.frame())?;
        Self::new(blocks)
    }

    pub fn residuals(&self) -> ConstraintResiduals {
        constraint_residuals(&self.blocks)
    }

    /// Chordal (Frobenius) distance between the two frames.
    pub fn distance(&self, other: &Self) -> f64 {
        let a = self.blocks.to_matrix();
        let b = other.blocks.to_matrix();
        (a - b).norm()
    }
}

/// Pads to four operators and reads off the block vectors.
pub fn kraus_to_point(k: &KrausSet) -> Result<KrausPoint> {
    k.check()?;
    let padded = k.padded();
    let mut b = Blocks::zero();
    for (l, op) in padded.operators().iter().enumerate() {
        b.u1[l] = op[(0, 0)];
        b.v1[l] = op[(1, 0)];
        b.u2[l] = op[(0, 1)];
        b.v2[l] = op[(1, 1)];
    }
    KrausPoint::new(b)
}

/// Always returns four operators.
pub fn point_to_kraus(p: &KrausPoint) -> KrausSet {
    let b = &p.blocks;
    let ops = (0..MAX_OPERATORS)
        .map(|l| Mat2::new(b.u1[l], b.u2[l], b.v1[l], b.v2[l]))
        .collect();
    KrausSet::unchecked(ops).expect("four finite operators")
}

/// Haar-random feasible point: a seeded frame of V₂(C⁸).
pub fn random_kraus_point(seed: u64) -> KrausPoint {
    let x = crate::stiefel::random_point(8, 2, seed).expect("8 ≥ 2");
    KrausPoint::new_unchecked(Blocks::from_matrix(x.frame()).expect("8×2"))
}

/// Seeded random Kraus set with `m` operators, drawn from V₂(C^{2m}).
pub fn random_kraus_set(m: usize, seed: u64) -> Result<KrausSet> {
    if m == 0 || m > MAX_OPERATORS {
        return Err(LandscapeError::KrausCount(m));
    }
    let x = crate::stiefel::random_point(2 * m, 2, seed)?;
    let f = x.frame();
    let ops = (0..m)
        .map(|l| Mat2::new(f[(l, 0)], f[(l, 1)], f[(m + l, 0)], f[(m + l, 1)]))
        .collect();
    KrausSet::new(ops)
}

/// Seeded i.i.d. complex Gaussian blocks, feasible or not.
pub fn random_blocks(seed: u64) -> Blocks {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = || {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re, im)
    };
    let mut b = Blocks::zero();
    for v in [&mut b.u1, &mut b.u2, &mut b.v1, &mut b.v2] {
        for z in v.iter_mut() {
            *z = draw();
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::qcore::completeness_residual;

    fn e(i: usize) -> C4 {
        let mut v = ZERO4;
        v[i] = C64::from(1.0);
        v
    }

    #[test]
    fn identity_layout() {
        let p = kraus_to_point(&KrausSet::identity()).unwrap();
        assert_eq!(p.u1(), &e(0));
        assert_eq!(p.v2(), &e(0));
        assert_eq!(p.u2(), &ZERO4);
        assert_eq!(p.v1(), &ZERO4);
    }

    #[test]
    fn dephasing_layout() {
        let p = kraus_to_point(&KrausSet::dephasing()).unwrap();
        assert_eq!(p.u1(), &e(0));
        assert_eq!(p.v2(), &e(1));
        assert_eq!(p.u2(), &ZERO4);
        assert_eq!(p.v1(), &ZERO4);
    }

    #[test]
    fn round_trips() {
        for k in [KrausSet::identity(), KrausSet::dephasing(), KrausSet::amplitude_damping(0.3).unwrap()] {
            let p = kraus_to_point(&k).unwrap();
            assert_eq!(point_to_kraus(&p), k.padded());
            assert_eq!(kraus_to_point(&point_to_kraus(&p)).unwrap(), p);
        }
    }

    #[test]
    fn residual_examples() {
        let b = Blocks { u1: e(0), v2: e(0), ..Blocks::zero() };
        let r = constraint_residuals(&b);
        assert_eq!((r.phi1, r.phi2, r.phi3), (0.0, 0.0, C64::from(0.0)));

        let r = constraint_residuals(&Blocks::zero());
        assert_eq!((r.phi1, r.phi2, r.phi3), (-1.0, -1.0, C64::from(0.0)));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let half = |i: usize| {
            let mut v = ZERO4;
            v[i] = c(s, 0.0);
            v
        };
        let b = Blocks { u1: half(0), u2: half(0), v1: half(1), v2: half(1) };
        let r = constraint_residuals(&b);
        assert!(r.phi1.abs() < 1e-15 && r.phi2.abs() < 1e-15);
        assert!((r.phi3 - C64::from(1.0)).norm() < 1e-15);
        assert!(KrausPoint::new(b).is_err());
    }

    #[test]
    fn feasibility_matches_completeness() {
        for seed in 0..100 {
            let k = random_kraus_set(4, seed).unwrap();
            let p = kraus_to_point(&k).unwrap();
            assert!(p.residuals().max_abs() < 1e-10);
            assert!(completeness_residual(&point_to_kraus(&p)) < 1e-10);

            // an infeasible perturbation fails both checks together
            let mut bad = *p.blocks();
            bad.u1[0] += c(1e-3, 0.0);
            let raw = point_to_kraus(&KrausPoint::new_unchecked(bad));
            assert!(KrausPoint::new(bad).is_err());
            assert!(completeness_residual(&raw) > 1e-10);
        }
    }

    #[test]
    fn infeasible_set_is_rejected() {
        let k = KrausSet::unchecked(vec![Mat2::identity(), Mat2::identity()]).unwrap();
        assert!(matches!(kraus_to_point(&k), Err(LandscapeError::Completeness { .. })));
    }
}
