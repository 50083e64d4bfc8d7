use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use sobolev_core::basis::rational::mt_function;
use sobolev_core::basis::{BasisSystem, SystemKind};
use sobolev_core::cascade::connection_matrix;
use sobolev_core::diffmat::{lambda_recurrence_residual, DifferentiationMatrix};
use sobolev_core::fastmt::MtPlan;
use sobolev_core::orthopoly::{recurrence_coeffs, RecurrenceMethod};
use sobolev_core::ou::{energy_identity, GaussianPoly};
use sobolev_core::sobolev::{gram_matrix, GramMethod};
use sobolev_core::weights::{WeightFamily, WeightSpec};
use sobolev_core::CoefficientVector;

fn complex_vec(len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64).prop_map(|(a, b)| Complex64::new(a, b)), len)
}

fn family() -> impl Strategy<Value = WeightFamily> {
    prop_oneof![
        Just(WeightFamily::Hermite),
        Just(WeightFamily::Legendre),
        Just(WeightFamily::LaguerreHalfline),
        Just(WeightFamily::BilateralLaguerre),
        (-1.5..1.5f64).prop_map(|rho| WeightFamily::HermiteShifted { rho }),
        (0.3..3.0f64).prop_map(|gamma| WeightFamily::HermiteScaled { gamma }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mt_modulus_law(n in -60i64..60, x in -200.0..200.0f64) {
        let want = (2.0 / PI).sqrt() / (1.0 + 4.0 * x * x).sqrt();
        prop_assert!((mt_function(n, x).norm() - want).abs() <= 1e-14 * (1.0 + want));
    }

    #[test]
    fn integer_systems_reflect(s in 0u32..3, n in 0i64..6, x in -8.0..8.0f64) {
        let sys = BasisSystem::new(SystemKind::SobolevLaguerre2nd { s }, 6).unwrap();
        let v = sys.eval(n, x).unwrap();
        let r = sys.eval(-n - 1, x).unwrap();
        prop_assert!((r - Complex64::new(0.0, -1.0) * v.conj()).norm() < 1e-14);
    }

    #[test]
    fn symmetric_weights_give_parity(s in 0u32..4, n in 0i64..8, x in -6.0..6.0f64) {
        let sys = BasisSystem::new(SystemKind::HermiteClosed { s }, 8).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let (a, b) = (sys.eval(n, -x).unwrap(), sys.eval(n, x).unwrap());
        prop_assert!((a - sign * b).norm() < 1e-13);
    }

    #[test]
    fn bilateral_degree_law(n in 0usize..8, x in 0.1..30.0f64) {
        let sys = BasisSystem::new(SystemKind::BilateralLaguerre1, 8).unwrap();
        let form = sys.bilateral_form(n).unwrap();
        prop_assert_eq!(form.power as usize, n + 1);
        let degree = form.numerator.degree(1e-9).unwrap();
        prop_assert!(degree <= 2 * n);
        prop_assert_eq!(degree % 2, n % 2);
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((form.eval(-x) - sign * form.eval(x)).abs() < 1e-14);
    }

    #[test]
    fn hermite_lambda_structure(s in 0u32..4) {
        let sys = BasisSystem::new(SystemKind::HermiteClosed { s }, 8).unwrap();
        prop_assert!(lambda_recurrence_residual(&sys, 6).unwrap() < 1e-10);
    }

    #[test]
    fn h_infinity_gram_is_identity(sigma in 0.05..0.95f64) {
        let sys = BasisSystem::new(SystemKind::HermiteHinf { sigma }, 8).unwrap();
        let report = gram_matrix(&sys, sys.sequence(), 8, GramMethod::Fourier).unwrap();
        prop_assert!(report.max_deviation() < 1e-10, "{}", report.max_deviation());
    }

    #[test]
    fn shifted_hermite_gram_is_identity(rho in -3.0..3.0f64) {
        let sys = BasisSystem::new(SystemKind::HermiteShifted0 { rho }, 8).unwrap();
        let report = gram_matrix(&sys, sys.sequence(), 8, GramMethod::Fourier).unwrap();
        prop_assert!(report.max_deviation() < 1e-10);
    }

    #[test]
    fn differentiation_matrix_is_skew_hermitian(f in family(), s in 0u32..3, n in 2usize..12, a in complex_vec(12)) {
        let spec = WeightSpec::new(f, s).unwrap();
        let rc = recurrence_coeffs(&spec, n + 1, RecurrenceMethod::Christoffel).unwrap();
        let d = DifferentiationMatrix::from_recurrence(&rc, n).unwrap();
        prop_assert_eq!(d.skew_hermitian_defect(), 0.0);
        prop_assert!(d.energy_defect(&a[..n]).unwrap() < 1e-13);
        let z = DifferentiationMatrix::from_recurrence_integers(&rc, n).unwrap();
        prop_assert_eq!(z.skew_hermitian_defect(), 0.0);
    }

    #[test]
    fn christoffel_matches_stieltjes(f in family(), s in 1u32..3) {
        let spec = WeightSpec::new(f, s).unwrap();
        let a = recurrence_coeffs(&spec, 8, RecurrenceMethod::Christoffel).unwrap();
        let b = recurrence_coeffs(&spec, 8, RecurrenceMethod::Stieltjes).unwrap();
        for k in 0..8 {
            prop_assert!((a.a[k] - b.a[k]).abs() < 1e-9 * (1.0 + b.a[k].abs()));
            prop_assert!((a.b[k] - b.b[k]).abs() < 1e-9 * b.b[k]);
        }
    }

    #[test]
    fn connection_coefficients_round_trip(s in 1usize..4, a in complex_vec(16)) {
        let c = connection_matrix(&WeightSpec::hermite(0), s, 16).unwrap();
        let up = c.coeffs_0_to_s(&a).unwrap();
        let back = c.coeffs_s_to_0(&up).unwrap();
        for (x, y) in back.iter().zip(&a) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn mt_transform_round_trip(values in complex_vec(64)) {
        let plan = MtPlan::new(32).unwrap();
        let coeffs = CoefficientVector::new(-32, values);
        let samples = plan.synthesis(&coeffs).unwrap();
        prop_assert!(plan.analysis_samples(&samples).unwrap().max_abs_diff(&coeffs) < 1e-13);
    }

    #[test]
    fn ou_energy_identity(poly in prop::collection::vec(-2.0..2.0f64, 1..7), a in 0.1..3.0f64) {
        let (lhs, rhs) = energy_identity(&GaussianPoly(poly), a);
        prop_assert!((lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1.0));
    }
}
