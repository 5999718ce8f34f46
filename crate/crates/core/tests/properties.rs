use kraus_landscape::landscape::{
    duality_map, objective_diag, objective_uv, objective_via_trace, riemannian_gradient, to_diag,
};
use kraus_landscape::linalg::{max_abs2, Mat2, C64};
use kraus_landscape::qcore::{
    apply_kraus, bloch_to_density, dilate, objective_trace, reduce_target, verify_dilation,
};
use kraus_landscape::stiefel::{
    kraus_to_point, point_to_kraus, project_tangent, random_kraus_point, random_kraus_set, random_point, retract,
};
use kraus_landscape::{BlochVector, KrausPoint, LandscapeParams, Retraction, TargetOperator};
use proptest::prelude::*;

/// Bloch vectors filling the closed unit ball, pure states included.
fn bloch() -> impl Strategy<Value = BlochVector> {
    (0.0..=1.0f64, -1.0..=1.0f64, 0.0..std::f64::consts::TAU, prop::bool::ANY).prop_map(|(r, ct, phi, pure)| {
        let r = if pure { 1.0 } else { r.cbrt() };
        let st = (1.0 - ct * ct).max(0.0).sqrt();
        let (a, b, g) = (r * st * phi.cos(), r * st * phi.sin(), r * ct);
        let n = (a * a + b * b + g * g).sqrt();
        let s = if n > 1.0 { 1.0 / n } else { 1.0 };
        BlochVector::new(a * s, b * s, g * s).unwrap()
    })
}

fn hermitian() -> impl Strategy<Value = TargetOperator> {
    (-3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, d, re, im)| {
        let m = Mat2::new(C64::from(a), C64::new(re, im), C64::new(re, -im), C64::from(d));
        TargetOperator::new(m).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn channels_preserve_states(m in 1usize..=4, seed in any::<u64>(), w in bloch()) {
        let k = random_kraus_set(m, seed).unwrap();
        let rho = bloch_to_density(&w);
        let out = apply_kraus(&k, &rho).unwrap();
        prop_assert!((out.trace() - 1.0).abs() < 1e-12);
        let e = out.entries();
        prop_assert!(max_abs2(&(e - e.adjoint())) < 1e-12);
    }

    #[test]
    fn target_reduction_is_affine(m in 1usize..=4, seed in any::<u64>(), w in bloch(), theta in hermitian()) {
        let k = random_kraus_set(m, seed).unwrap();
        let rho = bloch_to_density(&w);
        let r = reduce_target(&theta);
        let direct = objective_trace(&k, &rho, &theta).unwrap();
        let (k2, rho2) = r.rotate_problem(&k, &rho).unwrap();
        let reduced = objective_trace(&k2, &rho2, &TargetOperator::theta0()).unwrap();
        prop_assert!((direct - (r.scale * reduced + r.offset)).abs() < 1e-10);
    }

    #[test]
    fn dilation_reproduces_channel(m in 1usize..=4, seed in any::<u64>(), w in bloch()) {
        let k = random_kraus_set(m, seed).unwrap();
        let u = dilate(&k).unwrap();
        prop_assert!(u.unitarity_residual() < 1e-10);
        prop_assert!(verify_dilation(&u, &k, &bloch_to_density(&w)).unwrap() < 1e-12);
    }

    #[test]
    fn objective_forms_agree_and_are_bounded(seed in any::<u64>(), w in bloch()) {
        let params = LandscapeParams::new(w);
        let p = random_kraus_point(seed);
        let uv = objective_uv(&p, &params);
        prop_assert!((uv - objective_via_trace(&p, &params).unwrap()).abs() < 1e-12);
        prop_assert!((uv - objective_diag(&to_diag(&p, &params), &params)).abs() < 1e-12);
        prop_assert!((-1e-12..=1.0 + 1e-12).contains(&uv));
    }

    #[test]
    fn duality_complements_value(seed in any::<u64>(), w in bloch()) {
        let params = LandscapeParams::new(w);
        let p = random_kraus_point(seed);
        let t = duality_map(&p);
        prop_assert!((objective_uv(&p, &params) + objective_uv(&t, &params) - 1.0).abs() < 1e-12);
        prop_assert_eq!(duality_map(&t), p);
    }

    #[test]
    fn kraus_point_round_trip(m in 1usize..=4, seed in any::<u64>()) {
        let k = random_kraus_set(m, seed).unwrap();
        let p = kraus_to_point(&k).unwrap();
        let back = point_to_kraus(&p);
        for (a, b) in k.operators().iter().zip(back.operators()) {
            prop_assert_eq!(a, b);
        }
        for extra in &back.operators()[m..] {
            prop_assert_eq!(*extra, Mat2::zeros());
        }
    }

    #[test]
    fn retraction_stays_feasible(seed in any::<u64>(), dir_seed in any::<u64>(), s in 0.0..3.0f64) {
        let x = random_kraus_point(seed).to_stiefel();
        let t = project_tangent(&x, random_point(8, 2, dir_seed).unwrap().frame());
        for kind in [Retraction::Qr, Retraction::Polar] {
            let y = retract(&x, &t.scaled(s), kind).unwrap();
            prop_assert!(KrausPoint::from_stiefel(&y).is_ok());
        }
    }

    #[test]
    fn gradient_is_tangent(seed in any::<u64>(), w in bloch()) {
        let params = LandscapeParams::new(w);
        let g = riemannian_gradient(&random_kraus_point(seed), &params);
        prop_assert!(g.residual() < 1e-12);
    }
}
