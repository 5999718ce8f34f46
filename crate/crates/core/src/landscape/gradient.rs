use crate::landscape::params::LandscapeParams;
use crate::linalg::CMatrix;
use crate::stiefel::{project_tangent, Blocks, KrausPoint, StiefelPoint, TangentVector};

/// Wirtinger gradient `(∂J/∂u₁*, ∂J/∂u₂*, ∂J/∂v₁*, ∂J/∂v₂*)` of the
/// unconstrained objective:
///
/// ```text
/// ∂J/∂u₁* = ½[(1+γ) u₁ + z₀* u₂]
/// ∂J/∂u₂* = ½[(1−γ) u₂ + z₀  u₁]
/// ```
///
/// The `v` blocks vanish. Twice this is the gradient for the real metric
/// `Re⟨·,·⟩`.
pub fn euclidean_gradient(b: &Blocks, params: &LandscapeParams) -> Blocks {
    let g = params.gamma();
    let z = params.z0;
    let mut out = Blocks::zero();
    for i in 0..4 {
        out.u1[i] = 0.5 * ((1.0 + g) * b.u1[i] + z.conj() * b.u2[i]);
        out.u2[i] = 0.5 * ((1.0 - g) * b.u2[i] + z * b.u1[i]);
    }
    out
}

/// Real-metric gradient as an 8×2 ambient matrix, computed from a frame.
pub fn ambient_gradient_frame(frame: &CMatrix, params: &LandscapeParams) -> CMatrix {
    let g = params.gamma();
    let z = params.z0;
    let mut out = CMatrix::zeros(8, 2);
    for i in 0..4 {
        let a = frame[(i, 0)];
        let b = frame[(i, 1)];
        out[(i, 0)] = (1.0 + g) * a + z.conj() * b;
        out[(i, 1)] = (1.0 - g) * b + z * a;
    }
    out
}

pub fn riemannian_gradient_at(x: &StiefelPoint, params: &LandscapeParams) -> TangentVector {
    project_tangent(x, &ambient_gradient_frame(x.frame(), params))
}

pub fn riemannian_gradient(p: &KrausPoint, params: &LandscapeParams) -> TangentVector {
    riemannian_gradient_at(&p.to_stiefel(), params)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;
    use crate::landscape::objective::objective_blocks;
    use crate::stiefel::{random_blocks, random_kraus_point};

    fn w(a: f64, b: f64, g: f64) -> LandscapeParams {
        LandscapeParams::from_components(a, b, g).unwrap()
    }

    /// Central differences over the 32 real coordinates of the u-blocks and v-blocks.
    fn fd_gradient(b: &Blocks, params: &LandscapeParams, h: f64) -> Vec<f64> {
        let f = |x: &Blocks| objective_blocks(&x.u1, &x.u2, params);
        let mut out = Vec::with_capacity(32);
        for blk in 0..4 {
            for i in 0..4 {
                for dir in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                    let mut p = *b;
                    let mut m = *b;
                    let (pp, mm) = match blk {
                        0 => (&mut p.u1, &mut m.u1),
                        1 => (&mut p.u2, &mut m.u2),
                        2 => (&mut p.v1, &mut m.v1),
                        _ => (&mut p.v2, &mut m.v2),
                    };
                    pp[i] += dir * h;
                    mm[i] -= dir * h;
                    out.push((f(&p) - f(&m)) / (2.0 * h));
                }
            }
        }
        out
    }

    fn analytic_real(b: &Blocks, params: &LandscapeParams) -> Vec<f64> {
        let g = euclidean_gradient(b, params);
        let mut out = Vec::with_capacity(32);
        for blk in [g.u1, g.u2, g.v1, g.v2] {
            for z in blk {
                // ∂J/∂Re = 2 Re(∂J/∂z*), ∂J/∂Im = 2 Im(∂J/∂z*)
                out.push(2.0 * z.re);
                out.push(2.0 * z.im);
            }
        }
        out
    }

    #[test]
    fn matches_central_differences() {
        let params = w(0.3, -0.4, 0.2);
        for seed in 0..20 {
            let b = random_blocks(seed);
            let fd = fd_gradient(&b, &params, 1e-6);
            let an = analytic_real(&b, &params);
            let num: f64 = fd.iter().zip(&an).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
            let den: f64 = an.iter().map(|x| x * x).sum::<f64>().sqrt();
            assert!(num / den < 1e-6, "seed {seed}: {}", num / den);
        }
    }

    #[test]
    fn pure_north_pole_ignores_u2() {
        let params = w(0.0, 0.0, 1.0);
        let mut b = random_blocks(4);
        b.u1 = [C64::from(0.0); 4];
        let g = euclidean_gradient(&b, &params);
        assert!(g.u1.iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn mixed_state_gradient_is_half_identity() {
        let params = w(0.0, 0.0, 0.0);
        let b = random_blocks(5);
        let g = euclidean_gradient(&b, &params);
        for i in 0..4 {
            assert_eq!(g.u1[i], 0.5 * b.u1[i]);
            assert_eq!(g.u2[i], 0.5 * b.u2[i]);
            assert_eq!(g.v1[i], C64::from(0.0));
        }
    }

    #[test]
    fn riemannian_gradient_is_tangent_and_generic_nonzero() {
        let params = w(0.3, -0.4, 0.2);
        for seed in 0..10 {
            let p = random_kraus_point(seed);
            let g = riemannian_gradient(&p, &params);
            assert!(g.residual() < 1e-12);
            assert!(g.norm() > 1e-3);
        }
    }
}
