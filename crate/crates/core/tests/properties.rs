mod common;

use common::*;
use proptest::prelude::*;
use qgeom::charts::{xi_chart, xi_inverse, chi_chart, tangent_functional};
use qgeom::geometry::{bogoliubov_metric, metric_via_g, ExponentialArc};
use qgeom::matfun::log_mean;
use qgeom::modular::{modular_flow, modular_operator};
use qgeom::scalar::trace_norm;
use qgeom::states::umegaki_divergence;
use qgeom::GnsSpace;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn log_mean_between_geometric_and_arithmetic(x in 1e-6f64..10.0, y in 1e-6f64..10.0) {
        let l = log_mean(x, y).unwrap();
        prop_assert!((l - log_mean(y, x).unwrap()).abs() <= 1e-15 * l);
        prop_assert!(l >= (x * y).sqrt() * (1.0 - 1e-12));
        prop_assert!(l <= 0.5 * (x + y) * (1.0 + 1e-12));
    }

    #[test]
    fn divergence_nonnegative(n in 2usize..=5, s1 in any::<u64>(), s2 in any::<u64>()) {
        let (a, b) = (state(n, s1), state(n, s2));
        prop_assert!(umegaki_divergence(&a, &b) >= -1e-12);
        prop_assert!(umegaki_divergence(&a, &a).abs() < 1e-12);
    }

    #[test]
    fn xi_chart_round_trip(n in 2usize..=4, s1 in any::<u64>(), s2 in any::<u64>()) {
        let space = GnsSpace::new(state(n, s1));
        let sigma = state(n, s2);
        let back = xi_inverse(&space, &xi_chart(&space, &sigma));
        let err = trace_norm(&(back.matrix().as_matrix() - sigma.matrix().as_matrix()));
        prop_assert!(err < 1e-10, "{}", err);
    }

    #[test]
    fn tangent_functional_bounded_and_unnormalized(n in 2usize..=4, s1 in any::<u64>(), s2 in any::<u64>()) {
        let space = GnsSpace::new(state(n, s1));
        let k = chi_chart(&space, &state(n, s2));
        let f = tangent_functional(&space, &k);
        prop_assert!(f.norm() <= k.norm() * (1.0 + 1e-12) + 1e-14);
        prop_assert!(f.dual_matrix().trace().abs() < 1e-12);
    }

    #[test]
    fn metric_symmetric_and_formulations_agree(n in 2usize..=4, s in any::<u64>()) {
        let (r, a, b) = (state(n, s), state(n, s ^ 1), state(n, s ^ 2));
        let g = bogoliubov_metric(&r, &a, &b);
        prop_assert!((g - bogoliubov_metric(&r, &b, &a)).abs() < 1e-10);
        prop_assert!((g - metric_via_g(&r, &a, &b)).abs() < 1e-9);
        prop_assert!(bogoliubov_metric(&r, &a, &a) >= -1e-12);
    }

    #[test]
    fn zeta_nonpositive_on_arc(n in 2usize..=4, s in any::<u64>(), t in 0.0f64..=1.0) {
        let arc = ExponentialArc::new(state(n, s), state(n, s.wrapping_add(1)));
        prop_assert!(arc.zeta(t) <= 1e-10);
    }

    #[test]
    fn modular_flow_preserves_state_and_unitarity(n in 2usize..=4, s in any::<u64>(), t in -5.0f64..5.0) {
        let rho = state(n, s);
        let space = GnsSpace::new(rho.clone());
        let mut g = rng(s, 0xf10);
        let a = complex(&mut g, n);
        let flowed = modular_flow(&space, &a, t);
        let e0 = qgeom::states::expectation_complex(&rho, &a);
        let e1 = qgeom::states::expectation_complex(&rho, &flowed);
        prop_assert!((e0 - e1).norm() < 1e-11);
        let v = qgeom::GnsVector::new(complex(&mut g, n));
        let w = modular_operator(&space).unitary(t, &v);
        prop_assert!((w.norm() - v.norm()).abs() < 1e-12);
    }
}
