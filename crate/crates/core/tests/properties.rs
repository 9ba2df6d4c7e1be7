use std::f64::consts::{PI, SQRT_2, TAU};

use circ_bridge::bridge_approx::*;
use circ_bridge::circular_dist::*;
use circ_bridge::special_fn::*;
use proptest::prelude::*;

proptest! {
    #[test]
    fn cdf_expansion_antisymmetric(dt in -4.0..4.0f64, kappa in 1.0..1e5f64) {
        let up = cdf_expansion(dt, kappa).unwrap().value;
        let down = cdf_expansion(-dt, kappa).unwrap().value;
        prop_assert!((up + down - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn cdf_expansion_is_a_probability_in_the_bulk(dt in -3.0..3.0f64, kappa in 10.0..1e5f64) {
        let v = cdf_expansion(dt, kappa).unwrap().value;
        prop_assert!((0.0..=1.0).contains(&v));
    }

    #[test]
    fn normal_cdf_reflection(z in -30.0..30.0f64) {
        prop_assert!((normal_cdf(z) + normal_cdf(-z) - 1.0).abs() <= 2.0 * f64::EPSILON);
    }

    #[test]
    fn vm_density_symmetric(mu in 0.0..TAU, kappa in 0.0..5e3f64, t in 0.0..PI) {
        let p = VonMisesParams::new(mu, kappa).unwrap();
        let a = vm_density(&p, mu + t);
        let b = vm_density(&p, mu - t);
        // mu +- t is itself rounded; kappa amplifies that in the exponent
        prop_assert!((a - b).abs() <= 1e-15 * (1.0 + kappa) * a.max(b).max(1e-300));
    }

    #[test]
    fn vm_density_is_periodic(mu in 0.0..TAU, kappa in 0.0..100.0f64, theta in -10.0..10.0f64) {
        let p = VonMisesParams::new(mu, kappa).unwrap();
        let a = vm_density(&p, theta);
        let b = vm_density(&p, theta + TAU);
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
    }

    #[test]
    fn wrapped_difference_in_principal_range(theta in -1e3..1e3f64, mu in -1e3..1e3f64) {
        let d = wrapped_difference(theta, mu);
        prop_assert!(d > -PI && d <= PI);
        let turns = (theta - mu - d) / TAU;
        prop_assert!((turns - turns.round()).abs() < 1e-9);
    }

    #[test]
    fn deviates_are_consistent(kappa in 0.5..1e4f64, offset in -3.0..3.0f64) {
        let p = VonMisesParams::new(1.0, kappa).unwrap();
        let d = standardized_deviate(&p, 1.0 + offset).unwrap();
        prop_assert!((d.delta_tilde - d.delta / SQRT_2).abs() <= 1e-15 * d.delta.abs().max(1.0));
    }

    #[test]
    fn point_at_inverts_deviate(kappa in 1.0..1e4f64, dt in -2.0..2.0f64) {
        let p = VonMisesParams::new(2.0, kappa).unwrap();
        let x = point_at(&p, dt).unwrap();
        let back = standardized_deviate(&p, x).unwrap().delta_tilde;
        prop_assert!((back - dt).abs() <= 1e-12);
    }

    #[test]
    fn log_ratio_exact_even(kappa in 1.0..1e4f64, t in 0.0..1.0f64) {
        let p = VonMisesParams::new(PI, kappa).unwrap();
        let a = log_ratio_exact(&p, PI + t).unwrap();
        let b = log_ratio_exact(&p, PI - t).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1.0));
    }

    #[test]
    fn ratio_is_exp_of_log_ratio(kappa in 1.0..1e4f64, dt in -3.0..3.0f64) {
        let r = ratio_expansion(dt, kappa, 2).unwrap().value;
        prop_assert!(r > 0.0);
        let p = VonMisesParams::new(PI, kappa).unwrap();
        let x = point_at(&p, dt).unwrap();
        let exact = ratio_exact(&p, x).unwrap();
        prop_assert!((exact.ln() - log_ratio_exact(&p, x).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn circular_variance_in_unit_interval(kappa in 0.0..1e6f64) {
        let v = circular_variance_exact(kappa).unwrap();
        prop_assert!(v.value > 0.0 && v.value <= 1.0);
        prop_assert!((v.sigma * v.sigma - v.value).abs() <= 4.0 * f64::EPSILON * v.value);
    }

    #[test]
    fn bessel_scaled_consistent(x in 0.0..700.0f64) {
        let i0 = bessel_i0(x).unwrap();
        let i1 = bessel_i1(x).unwrap();
        prop_assert!(i1.value < i0.value);
        prop_assert!(((i0.scaled_value * x.exp()) / i0.value - 1.0).abs() <= 1e-13);
        prop_assert!((log_i0(x).unwrap() - i0.value.ln()).abs() <= 1e-13 * x.max(1.0));
    }
}
