use std::f64::consts::PI;

use num_complex::Complex64;
use otcss::gaussian::{cf_of_covariance, log_negativity, wigner_of_covariance, PURE_DET};
use otcss::otcss::{
    basis_change, cf_closed, covariance, enhanced_squeezing, heisenberg_transform, variances,
    wigner_closed, ComplexFormMatrix, MAX_ABS_GAMMA, MAX_LAMBDA,
};
use otcss::{OtcssParams, PhasePoint4};
use proptest::prelude::*;

fn params() -> impl Strategy<Value = OtcssParams> {
    (0.0..=MAX_LAMBDA, -MAX_ABS_GAMMA..=MAX_ABS_GAMMA).prop_map(|(l, g)| OtcssParams::new(l, g).unwrap())
}

/// Parameters where entries stay below ~50, so absolute tolerances apply.
fn moderate() -> impl Strategy<Value = OtcssParams> {
    (0.0..1.5f64, -1.5..1.5f64).prop_map(|(l, g)| OtcssParams::new(l, g).unwrap())
}

fn point() -> impl Strategy<Value = PhasePoint4> {
    prop::array::uniform4(-1.0f64..1.0).prop_map(|x| PhasePoint4::new(x[0], x[1], x[2], x[3]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    /// `m1 m2 - m3² = 1` holds to relative rounding across the whole envelope.
    #[test]
    fn purity_to_relative_precision(p in params()) {
        let c = p.coefficients();
        let scale = c.m1 * c.m2;
        prop_assert!((c.m1 * c.m2 - c.m3 * c.m3 - 1.0).abs() <= 8.0 * f64::EPSILON * scale);
    }

    #[test]
    fn determinant_is_pure(p in moderate()) {
        prop_assert!((covariance(&p).det() - PURE_DET).abs() < 1e-10);
    }

    #[test]
    fn closed_wigner_matches_covariance_route(p in moderate(), x in point()) {
        let a = wigner_closed(&p, &x);
        let b = wigner_of_covariance(&covariance(&p), &x).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn closed_cf_matches_covariance_route(p in moderate(), x in point()) {
        let a = cf_closed(&p, &x);
        let b = cf_of_covariance(&covariance(&p), &x);
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn complex_form_matrix_routes_agree(p in moderate()) {
        let printed = ComplexFormMatrix::from_coefficients(&p.coefficients());
        let derived = ComplexFormMatrix::from_covariance(&covariance(&p));
        prop_assert!(printed.is_hermitian(1e-12));
        prop_assert!((printed.entries - derived.entries).iter().all(|z| z.norm() < 1e-11));
    }

    /// The Wigner exponent is `-½ vᵀMv` with `v = (α*, α, β*, β)`.
    #[test]
    fn complex_form_reproduces_wigner(p in moderate(), x in point()) {
        let form = ComplexFormMatrix::from_coefficients(&p.coefficients());
        let q = form.quadratic_form(x.alpha(), x.beta());
        prop_assert!(q.im.abs() < 1e-12);
        let w = (-q.re / 2.0).exp() / (PI * PI);
        prop_assert!((w - wigner_closed(&p, &x)).abs() < 1e-12);
    }

    #[test]
    fn negativity_is_arcsinh_m3(p in moderate()) {
        let en = log_negativity(&covariance(&p)).unwrap();
        prop_assert!((en - p.coefficients().m3.asinh()).abs() < 1e-10);
    }

    #[test]
    fn negativity_is_even_and_grows_with_abs_gamma(l in 0.05..1.5f64, g in 0.0..1.4f64) {
        let en = |g: f64| log_negativity(&covariance(&OtcssParams::new(l, g).unwrap())).unwrap();
        prop_assert!((en(g) - en(-g)).abs() < 1e-12);
        prop_assert!(en(g + 0.1) > en(g));
    }

    #[test]
    fn heisenberg_map_reproduces_covariance(p in moderate()) {
        let sigma = heisenberg_transform(&p).covariance_of_vacuum();
        prop_assert!((sigma - covariance(&p).entries()).amax() < 1e-12);
    }

    #[test]
    fn wigner_transforms_as_vacuum_of_primed_coordinates(p in moderate(), x in point()) {
        let primed = heisenberg_transform(&p).primed(&x);
        let v = primed.as_vector();
        let vacuum = (-v.norm_squared()).exp() / (PI * PI);
        prop_assert!((vacuum - wigner_closed(&p, &x)).abs() < 1e-12);
    }

    #[test]
    fn variances_from_covariance(p in moderate()) {
        let s = covariance(&p);
        let e = s.entries();
        let (v1, v2) = variances(&p);
        prop_assert!((v1 - (e[(0, 0)] + e[(2, 2)] + 2.0 * e[(0, 2)]) / 4.0).abs() < 1e-12);
        prop_assert!((v2 - (e[(1, 1)] + e[(3, 3)] + 2.0 * e[(1, 3)]) / 4.0).abs() < 1e-12);
    }

    /// For `γ ≠ 0` the compact predicate holds exactly when `x1` is noisier
    /// and `x2` quieter than in the two-mode squeezed vacuum of the same `λ`.
    #[test]
    fn squeezing_predicate_matches_inequalities(l in 0.01..2.0f64, g in 0.01..3.0f64, sign in prop::bool::ANY) {
        let g = if sign { g } else { -g };
        let p = OtcssParams::new(l, g).unwrap();
        let (v1, v2) = variances(&p);
        let both = v1 > (2.0 * l).exp() / 4.0 && v2 < (-2.0 * l).exp() / 4.0;
        prop_assert_eq!(enhanced_squeezing(&p).unwrap(), both);
    }
}

#[test]
fn basis_change_maps_quadratures_to_amplitudes() {
    let n = basis_change();
    let x = PhasePoint4::new(0.3, -0.7, 1.1, 0.4);
    let v = x.as_vector().map(|r| Complex64::new(r, 0.0));
    let w = n.try_inverse().unwrap().transpose() * v;
    let (a, b) = (x.alpha(), x.beta());
    let expected = [a.conj(), a, b.conj(), b];
    for k in 0..4 {
        assert!((w[k] - expected[k]).norm() < 1e-14, "component {k}");
    }
}

/// Large entries make the symplectic discriminant noisy; the covariance must
/// still validate on a dense sweep of the outer envelope.
#[test]
fn covariance_validates_near_envelope_edge() {
    for a in 0..=50 {
        for b in -50..=50 {
            let l = MAX_LAMBDA * (0.5 + a as f64 / 100.0);
            let g = MAX_ABS_GAMMA * b as f64 / 50.0;
            let sigma = covariance(&OtcssParams::new(l, g).unwrap());
            let (np, nm) = sigma.symplectic_eigenvalues().unwrap();
            // entries reach 1e8 here, so only a coarse closeness is meaningful
            assert!((np - 0.5).abs() < 1e-4 && (nm - 0.5).abs() < 1e-4, "{l} {g}: {np} {nm}");
        }
    }
}
