use serde::{Deserialize, Serialize};

use crate::error::{LandscapeError, Result};
use crate::landscape::{
    objective_uv, riemannian_gradient, to_diag, CriticalManifoldId, LandscapeCase, LandscapeParams, ManifoldTag,
};
use crate::linalg::{inner, norm_sqr};
use crate::stiefel::KrausPoint;

/// Gradient norm at or above which a point is non-critical.
pub const CRITICAL_GRAD_TOL: f64 = 1e-6;
/// Distance to a predicted critical value for a match.
pub const VALUE_MATCH_TOL: f64 = 1e-6;
/// Two predicted values this close cannot be told apart.
pub const AMBIGUITY_TOL: f64 = 2e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Classification {
    NonCritical { value: f64, grad_norm: f64 },
    Critical { id: CriticalManifoldId, value: f64, grad_norm: f64 },
}

fn candidates(params: &LandscapeParams) -> Vec<(ManifoldTag, f64)> {
    let mut c = vec![(ManifoldTag::GlobalMin, 0.0), (ManifoldTag::GlobalMax, 1.0)];
    match params.case() {
        LandscapeCase::Mixed => c.push((ManifoldTag::MixedSaddle, 0.5)),
        LandscapeCase::Partial => {
            c.push((ManifoldTag::SaddleMinus, params.lambda_minus));
            c.push((ManifoldTag::SaddlePlus, params.lambda_plus));
        }
        LandscapeCase::Pure => {}
    }
    c
}

/// Chart of the mixed saddle containing `p`: `z = ⟨ũ₁,ũ₂⟩/‖ũ₁‖²`, or the
/// boundary chart when `ũ₁` vanishes.
fn mixed_chart(p: &KrausPoint, params: &LandscapeParams) -> Option<crate::linalg::C64> {
    let d = to_diag(p, params);
    let n = norm_sqr(&d.ut1);
    (n > 1e-12).then(|| inner(&d.ut1, &d.ut2) / n)
}

/// Names the critical sub-manifold `p` lies on, judged by gradient norm and value.
pub fn classify_critical(p: &KrausPoint, params: &LandscapeParams) -> Result<Classification> {
    let value = objective_uv(p, params);
    let grad_norm = riemannian_gradient(p, params).norm();
    if grad_norm >= CRITICAL_GRAD_TOL {
        return Ok(Classification::NonCritical { value, grad_norm });
    }
    let cands = candidates(params);
    let near: Vec<_> = cands.iter().filter(|(_, v)| (v - value).abs() < VALUE_MATCH_TOL).collect();
    for (i, a) in near.iter().enumerate() {
        for b in &near[i + 1..] {
            if (a.1 - b.1).abs() < AMBIGUITY_TOL {
                return Err(LandscapeError::Ambiguous { value, a: a.1, b: b.1 });
            }
        }
    }
    let Some(&&(tag, _)) = near.iter().min_by(|a, b| (a.1 - value).abs().total_cmp(&(b.1 - value).abs())) else {
        // vanishing gradient away from every critical value; only reachable
        // through the tolerance gap, so report it as not critical
        return Ok(Classification::NonCritical { value, grad_norm });
    };
    let id = match tag {
        ManifoldTag::MixedSaddle => CriticalManifoldId::mixed(mixed_chart(p, params)),
        t => CriticalManifoldId::new(t),
    };
    Ok(Classification::Critical { id, value, grad_norm })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::critical_point;
    use crate::linalg::C64;
    use crate::stiefel::random_kraus_point;

    fn w(a: f64, b: f64, g: f64) -> LandscapeParams {
        LandscapeParams::from_components(a, b, g).unwrap()
    }

    fn tag_of(c: Classification) -> Option<ManifoldTag> {
        match c {
            Classification::Critical { id, .. } => Some(id.tag),
            Classification::NonCritical { .. } => None,
        }
    }

    #[test]
    fn constructed_points_classify_to_their_manifold() {
        for params in [w(0.0, 0.0, 0.5), w(0.3, -0.4, 0.2), w(0.0, 0.0, 1.0), w(0.6, 0.0, 0.8)] {
            for tag in ManifoldTag::ALL {
                let id = CriticalManifoldId::new(tag);
                if id.check_legal(&params).is_err() || tag == ManifoldTag::MixedSaddle {
                    continue;
                }
                let p = critical_point(&id, &params, 9).unwrap();
                assert_eq!(tag_of(classify_critical(&p, &params).unwrap()), Some(tag));
            }
        }
    }

    #[test]
    fn mixed_saddle_recovers_chart() {
        let params = w(0.0, 0.0, 0.0);
        let z = C64::new(0.7, -1.2);
        let p = critical_point(&CriticalManifoldId::mixed(Some(z)), &params, 1).unwrap();
        match classify_critical(&p, &params).unwrap() {
            Classification::Critical { id, .. } => {
                assert_eq!(id.tag, ManifoldTag::MixedSaddle);
                assert!((id.z.unwrap() - z).norm() < 1e-12);
            }
            other => panic!("{other:?}"),
        }
        let p = critical_point(&CriticalManifoldId::mixed(None), &params, 1).unwrap();
        match classify_critical(&p, &params).unwrap() {
            Classification::Critical { id, .. } => assert_eq!(id.z, None),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn random_point_is_not_critical() {
        let params = w(0.3, -0.4, 0.2);
        assert_eq!(tag_of(classify_critical(&random_kraus_point(2), &params).unwrap()), None);
    }

    #[test]
    fn near_mixed_state_is_ambiguous() {
        let params = w(0.0, 0.0, 1e-7);
        let p = critical_point(&CriticalManifoldId::new(ManifoldTag::SaddlePlus), &params, 0).unwrap();
        assert!(matches!(classify_critical(&p, &params), Err(LandscapeError::Ambiguous { .. })));
    }
}
