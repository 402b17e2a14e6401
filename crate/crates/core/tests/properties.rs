use liegamma::groups::{adjoint_of, exp_group, gamma_adjoint, gamma_group, jacobian_any};
use liegamma::linalg::{max_abs, MatN};
use liegamma::oracle::{series_eval, SeriesSpec};
use liegamma::{curlywedge, vee, wedge, GroupId, TangentVector};
use proptest::prelude::*;

fn tangent() -> impl Strategy<Value = TangentVector> {
    (0..GroupId::BASE.len()).prop_flat_map(|k| {
        let g = GroupId::BASE[k];
        prop::collection::vec(-1.7f64..1.7, g.tangent_dim()).prop_map(move |c| TangentVector::new(g, &c).unwrap())
    })
}

fn pair() -> impl Strategy<Value = (TangentVector, Vec<f64>, f64)> {
    tangent().prop_flat_map(|x| {
        let n = x.group().tangent_dim();
        (Just(x), prop::collection::vec(-2.0f64..2.0, n), -3.0f64..3.0)
    })
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

proptest! {
    #[test]
    fn wedge_is_linear((x, c, a) in pair()) {
        let y = TangentVector::new(x.group(), &c).unwrap();
        let z = x.axpy(a, &y).unwrap();
        prop_assert!(max_abs(&(wedge(&z) - (wedge(&x) + wedge(&y) * a))) < 1e-14);
        prop_assert!(max_abs(&(curlywedge(&z) - (curlywedge(&x) + curlywedge(&y) * a))) < 1e-14);
    }

    #[test]
    fn vee_inverts_wedge(x in tangent()) {
        let back = vee(x.group(), &wedge(&x)).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn exp_of_negation_is_inverse(x in tangent()) {
        let t = exp_group(&x).matrix * exp_group(&x.scaled(-1.0)).matrix;
        let n = t.nrows();
        prop_assert!(max_abs(&(t - MatN::identity(n, n))) < 1e-12);
    }

    #[test]
    fn generator_is_fixed(x in tangent()) {
        let v = x.to_vector();
        prop_assert!((adjoint_of(&x).matrix * &v - &v).amax() < 1e-12);
        prop_assert!((jacobian_any(&x) * &v - &v).amax() < 1e-12);
    }

    #[test]
    fn adjoint_is_identity_plus_generator_times_jacobian(x in tangent()) {
        let lhs = gamma_adjoint(0, &x);
        let n = lhs.nrows();
        let rhs = MatN::identity(n, n) + curlywedge(&x) * jacobian_any(&x);
        prop_assert!(max_abs(&(lhs - rhs)) < 1e-12);
    }

    #[test]
    fn gamma_at_origin_is_scaled_identity(k in 0..GroupId::BASE.len(), ell in 0usize..5) {
        let z = TangentVector::zero(GroupId::BASE[k]).unwrap();
        let m = gamma_group(ell, &z);
        let n = m.nrows();
        prop_assert!(max_abs(&(m - MatN::identity(n, n) / factorial(ell))) < 1e-15);
    }

    #[test]
    fn group_gamma_matches_series(x in tangent(), ell in 0usize..4) {
        let s = series_eval(&SeriesSpec::gamma(ell, wedge(&x))).unwrap();
        prop_assert!(max_abs(&(gamma_group(ell, &x) - s)) < 1e-11);
    }
}
