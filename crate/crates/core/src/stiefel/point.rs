use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{LandscapeError, Result};
use crate::linalg::{max_abs, orthonormality_residual, polar_q, qr_q, real_inner, CMatrix, C64, I, ONE};

/// Orthonormality slack accepted for a frame.
pub const FRAME_TOL: f64 = 1e-10;

/// An orthonormal k-frame in Cⁿ, stored as the columns of an n×k matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct StiefelPoint {
    frame: CMatrix,
}

impl StiefelPoint {
    pub fn new(frame: CMatrix) -> Result<Self> {
        if frame.ncols() > frame.nrows() || frame.ncols() == 0 {
            return Err(LandscapeError::Dimension(format!(
                "{}-frame in C^{}",
                frame.ncols(),
                frame.nrows()
            )));
        }
        let residual = orthonormality_residual(&frame);
        if !(residual < FRAME_TOL) {
            return Err(LandscapeError::NotOrthonormal(residual));
        }
        Ok(Self { frame })
    }

    pub(crate) fn new_unchecked(frame: CMatrix) -> Self {
        Self { frame }
    }

    pub fn n(&self) -> usize {
        self.frame.nrows()
    }

    pub fn k(&self) -> usize {
        self.frame.ncols()
    }

    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    pub fn residual(&self) -> f64 {
        orthonormality_residual(&self.frame)
    }

    /// Real dimension `2nk − k²` of the manifold this point lives on.
    pub fn manifold_dim(&self) -> usize {
        2 * self.n() * self.k() - self.k() * self.k()
    }

    /// Frobenius distance between frames, used as the chordal metric.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        (&self.frame - &other.frame).norm()
    }
}

/// A direction `Δ` at `base` with `X†Δ + Δ†X = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    pub base: StiefelPoint,
    pub delta: CMatrix,
}

impl TangentVector {
    pub fn zero(base: &StiefelPoint) -> Self {
        Self { base: base.clone(), delta: CMatrix::zeros(base.n(), base.k()) }
    }

    pub fn residual(&self) -> f64 {
        let x = self.base.frame();
        let s = x.adjoint() * &self.delta;
        max_abs(&(&s + s.adjoint()))
    }

    pub fn norm(&self) -> f64 {
        self.delta.norm()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self { base: self.base.clone(), delta: &self.delta * C64::from(s) }
    }

    /// Real inner product `Re tr(Δ₁† Δ₂)`.
    pub fn dot(&self, other: &Self) -> f64 {
        real_inner(&self.delta, &other.delta)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Retraction {
    #[default]
    Qr,
    Polar,
}

/// Orthogonal projection of an ambient n×k matrix onto the tangent space at `x`:
/// `Z − X·herm(X†Z)`.
pub fn project_tangent(x: &StiefelPoint, ambient: &CMatrix) -> TangentVector {
    let xf = x.frame();
    let s = xf.adjoint() * ambient;
    let herm = (&s + s.adjoint()) * C64::from(0.5);
    TangentVector { base: x.clone(), delta: ambient - xf * herm }
}

pub fn retract(x: &StiefelPoint, t: &TangentVector, kind: Retraction) -> Result<StiefelPoint> {
    if t.delta.iter().all(|z| *z == C64::from(0.0)) {
        return Ok(x.clone());
    }
    let moved = x.frame() + &t.delta;
    let frame = match kind {
        Retraction::Qr => qr_q(&moved)?,
        Retraction::Polar => polar_q(&moved)?,
    };
    Ok(StiefelPoint::new_unchecked(frame))
}

/// Independent child seed for slot `index` of a seeded computation.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(index.wrapping_mul(0xBF58_476D_1CE4_E5B9))
}

/// Haar-distributed frame: orthonormalized i.i.d. complex Gaussians.
pub fn random_point(n: usize, k: usize, seed: u64) -> Result<StiefelPoint> {
    if k == 0 || k > n {
        return Err(LandscapeError::Dimension(format!("{k}-frame in C^{n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gaussian = CMatrix::from_fn(n, k, |_, _| {
        let re: f64 = StandardNormal.sample(&mut rng);
        let im: f64 = StandardNormal.sample(&mut rng);
        C64::new(re, im)
    });
    Ok(StiefelPoint::new_unchecked(qr_q(&gaussian)?))
}

/// A real-orthonormal basis of the tangent space.
#[derive(Debug, Clone)]
pub struct TangentBasis {
    pub base: StiefelPoint,
    pub vectors: Vec<TangentVector>,
}

impl TangentBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    /// `Σ cᵢ tᵢ`.
    pub fn combine(&self, coeffs: &[f64]) -> TangentVector {
        assert_eq!(coeffs.len(), self.vectors.len());
        let mut delta = CMatrix::zeros(self.base.n(), self.base.k());
        for (c, t) in coeffs.iter().zip(&self.vectors) {
            if *c != 0.0 {
                delta += &t.delta * C64::from(*c);
            }
        }
        TangentVector { base: self.base.clone(), delta }
    }
}

/// Projects the 2nk real coordinate directions and orthonormalizes them under
/// the real inner product, dropping dependent ones.
pub fn orthonormal_tangent_basis(x: &StiefelPoint) -> TangentBasis {
    let (n, k) = (x.n(), x.k());
    let target = x.manifold_dim();
    let mut vectors: Vec<TangentVector> = Vec::with_capacity(target);
    'outer: for j in 0..k {
        for i in 0..n {
            for phase in [ONE, I] {
                let mut e = CMatrix::zeros(n, k);
                e[(i, j)] = phase;
                let mut t = project_tangent(x, &e);
                for _ in 0..2 {
                    for b in &vectors {
                        let p = b.dot(&t);
                        t.delta -= &b.delta * C64::from(p);
                    }
                }
                let nrm = t.norm();
                if nrm > 1e-8 {
                    t.delta /= C64::from(nrm);
                    vectors.push(t);
                    if vectors.len() == target {
                        break 'outer;
                    }
                }
            }
        }
    }
    TangentBasis { base: x.clone(), vectors }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn ambient(n: usize, k: usize, seed: u64) -> CMatrix {
        random_point(n, k, seed).unwrap().frame().map(|z| z * c(1.3, -0.4)) + CMatrix::from_fn(n, k, |i, j| c(0.1 * i as f64, -0.05 * j as f64))
    }

    #[test]
    fn random_point_is_deterministic_and_valid() {
        let a = random_point(8, 2, 42).unwrap();
        let b = random_point(8, 2, 42).unwrap();
        assert_eq!(a, b);
        assert!(a.residual() < 1e-14);
        assert_ne!(a, random_point(8, 2, 43).unwrap());
        assert!(random_point(2, 3, 0).is_err());
    }

    #[test]
    fn projection_examples() {
        let x = random_point(8, 2, 1).unwrap();
        let t = project_tangent(&x, x.frame());
        assert!(max_abs(&t.delta) < 1e-12);

        // orthogonal to span(X): untouched
        let full = random_point(8, 4, 9).unwrap();
        let x = StiefelPoint::new(full.frame().columns(0, 2).clone_owned()).unwrap();
        let perp = full.frame().columns(2, 2).clone_owned() * c(0.7, 0.2);
        let t = project_tangent(&x, &perp);
        assert!(max_abs(&(&t.delta - &perp)) < 1e-12);

        for seed in 0..20 {
            let x = random_point(8, 2, seed).unwrap();
            let t = project_tangent(&x, &ambient(8, 2, seed + 100));
            assert!(t.residual() < 1e-12);
            let again = project_tangent(&x, &t.delta);
            assert!(max_abs(&(again.delta - &t.delta)) < 1e-12);
        }
    }

    #[test]
    fn projection_is_self_adjoint() {
        for seed in 0..10 {
            let x = random_point(8, 2, seed).unwrap();
            let a = ambient(8, 2, seed + 1);
            let b = ambient(8, 2, seed + 2);
            let lhs = real_inner(&project_tangent(&x, &a).delta, &b);
            let rhs = real_inner(&a, &project_tangent(&x, &b).delta);
            assert!((lhs - rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn retraction_properties() {
        let x = random_point(8, 2, 5).unwrap();
        assert_eq!(retract(&x, &TangentVector::zero(&x), Retraction::Qr).unwrap(), x);
        assert_eq!(retract(&x, &TangentVector::zero(&x), Retraction::Polar).unwrap(), x);

        let t = project_tangent(&x, &ambient(8, 2, 77));
        for kind in [Retraction::Qr, Retraction::Polar] {
            let y = retract(&x, &t, kind).unwrap();
            assert!(y.residual() < 1e-10);
            // second-order agreement with the straight line
            let mut prev = f64::INFINITY;
            for eps in [1e-2, 1e-3] {
                let y = retract(&x, &t.scaled(eps), kind).unwrap();
                let dist = (y.frame() - (x.frame() + &t.delta * C64::from(eps))).norm();
                assert!(dist < 10.0 * eps * eps * t.norm().powi(2) + 1e-14);
                assert!(dist < prev);
                prev = dist;
            }
            // d/ds retract(x, s t) at 0 is t
            let h = 1e-6;
            let fwd = retract(&x, &t.scaled(h), kind).unwrap();
            let bwd = retract(&x, &t.scaled(-h), kind).unwrap();
            let slope = (fwd.frame() - bwd.frame()) / C64::from(2.0 * h);
            assert!((&slope - &t.delta).norm() / t.norm() < 1e-6);
        }
    }

    #[test]
    fn qr_and_polar_agree_to_first_order() {
        let x = random_point(8, 2, 11).unwrap();
        let t = project_tangent(&x, &ambient(8, 2, 12));
        let gap = |s: f64| {
            let q = retract(&x, &t.scaled(s), Retraction::Qr).unwrap();
            let p = retract(&x, &t.scaled(s), Retraction::Polar).unwrap();
            q.chordal_distance(&p)
        };
        let (g1, g2) = (gap(1e-2), gap(1e-3));
        // O(s²): shrinking s by 10 shrinks the gap by ~100
        assert!(g2 < g1 / 50.0, "{g1} {g2}");
    }

    #[test]
    fn tangent_basis_has_full_dimension() {
        for (n, k, seed) in [(8, 2, 3), (4, 2, 4), (8, 2, 99)] {
            let x = random_point(n, k, seed).unwrap();
            let basis = orthonormal_tangent_basis(&x);
            assert_eq!(basis.len(), 2 * n * k - k * k);
            for (i, a) in basis.vectors.iter().enumerate() {
                assert!(a.residual() < 1e-12);
                let p = project_tangent(&x, &a.delta);
                assert!(max_abs(&(p.delta - &a.delta)) < 1e-12);
                for (j, b) in basis.vectors.iter().enumerate() {
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((a.dot(b) - want).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn haar_marginal_matches_prediction() {
        // ‖u₁‖² is the weight of the first column on the top 4 of 8 coordinates
        let samples = 1000;
        let vals: Vec<f64> = (0..samples)
            .map(|s| {
                let x = random_point(8, 2, 10_000 + s).unwrap();
                (0..4).map(|i| x.frame()[(i, 0)].norm_sqr()).sum::<f64>()
            })
            .collect();
        let mean = vals.iter().sum::<f64>() / samples as f64;
        // Beta(4, 4): variance 16/(64·9)
        let sigma = (16.0f64 / (64.0 * 9.0) / samples as f64).sqrt();
        assert!((mean - 0.5).abs() < 3.0 * sigma, "mean {mean}, sigma {sigma}");
    }
}
