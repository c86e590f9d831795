use fuchsian::instances::{hypergeometric_onf, hypergeometric_scf};
use fuchsian::katz::{addition, middle_convolution, permute, swap_with_infinity};
use fuchsian::okubo::{euler_transform, onf_from_scf, scf_from_onf};
use fuchsian::schlesinger::{index_of_rigidity, is_equivalent, is_irreducible, verify_scheme};
use fuchsian::spectral::{idx_spec, PartitionTuple};
use fuchsian::yokoyama::{extend_direct, restrict, ExtensionParams, RestrictionParams};
use fuchsian::{commutant_dim, GaussianRational as Scalar, Matrix, OkuboSystem, SchlesingerTuple};
use proptest::prelude::*;

fn arb_matrix(n: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec(-3i64..=3, n * n)
        .prop_map(move |v| Matrix::from_fn(n, n, |i, j| Scalar::from_int(v[i * n + j])))
}

fn arb_tuple() -> impl Strategy<Value = SchlesingerTuple> {
    (1usize..=3, 2usize..=3).prop_flat_map(|(n, p)| {
        proptest::collection::vec(arb_matrix(n), p).prop_map(move |mats| {
            let poles = (0..p as i64).map(Scalar::from_int).collect();
            SchlesingerTuple::new(poles, mats).unwrap()
        })
    })
}

fn nondegenerate(t: &SchlesingerTuple) -> bool {
    t.matrices().iter().all(|m| !m.is_zero()) && is_irreducible(t)
}

fn arb_generic() -> impl Strategy<Value = Scalar> {
    (prop_oneof![Just(2i64), Just(3), Just(5), Just(7)], -20i64..=20)
        .prop_filter("non-integer", |(d, k)| k % d != 0)
        .prop_map(|(d, k)| Scalar::from_frac(k, d))
}

/// Kernel dimension of `X ↦ AX − XA` from the Kronecker matrix.
fn kronecker_commutant_dim(a: &Matrix) -> usize {
    let n = a.rows();
    let k = Matrix::from_fn(n * n, n * n, |r, c| {
        let (i, j) = (r / n, r % n);
        let (s, t) = (c / n, c % n);
        let mut v = Scalar::default();
        if t == j {
            v = &v + a.get(i, s);
        }
        if s == i {
            v = &v - a.get(t, j);
        }
        v
    });
    n * n - k.rank()
}

#[test]
fn commutant_dim_known_values() {
    assert_eq!(commutant_dim(&Matrix::identity(3)).unwrap(), 9);
    assert_eq!(commutant_dim(&Matrix::from_i64(&[&[1, 0], &[0, 2]])).unwrap(), 2);
    assert_eq!(commutant_dim(&Matrix::from_i64(&[&[0, 1], &[0, 0]])).unwrap(), 2);
    assert_eq!(
        commutant_dim(&Matrix::from_i64(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]])).unwrap(),
        5
    );
}

#[test]
fn index_agrees_with_spectral_type() {
    for n in 1..=4 {
        let t = hypergeometric_scf(n);
        let m = PartitionTuple::from_scheme(t.scheme().unwrap());
        assert_eq!(index_of_rigidity(&t), idx_spec(&m));
        assert_eq!(index_of_rigidity(&t), 2);
    }
}

#[test]
fn okubo_round_trip_on_hypergeometric_systems() {
    for n in 1..=4 {
        let o = hypergeometric_onf(n);
        let back = onf_from_scf(&scf_from_onf(&o)).unwrap();
        assert!(is_equivalent(&scf_from_onf(&back), &scf_from_onf(&o)));
        assert_eq!(back.blocks(), o.blocks());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn commutant_dim_matches_kronecker_oracle(a in (1usize..=3).prop_flat_map(arb_matrix)) {
        prop_assert_eq!(commutant_dim(&a).unwrap(), kronecker_commutant_dim(&a));
    }

    #[test]
    fn katz_operations_preserve_index(t in arb_tuple(), lambda in arb_generic(), mu in arb_generic()) {
        prop_assume!(nondegenerate(&t));
        let idx = index_of_rigidity(&t);
        prop_assert_eq!(index_of_rigidity(&middle_convolution(&t, &lambda)), idx);
        let shift: Vec<Scalar> = (0..t.p()).map(|_| mu.clone()).collect();
        prop_assert_eq!(index_of_rigidity(&addition(&t, &shift).unwrap()), idx);
        prop_assert_eq!(index_of_rigidity(&swap_with_infinity(&t, 1).unwrap()), idx);
    }

    #[test]
    fn convolution_inverts(t in arb_tuple(), lambda in arb_generic()) {
        prop_assume!(nondegenerate(&t));
        let there = middle_convolution(&t, &lambda);
        let back = middle_convolution(&there, &-&lambda);
        prop_assert!(is_equivalent(&back, &t));
    }

    #[test]
    fn convolution_commutes_with_reversal(t in arb_tuple(), lambda in arb_generic()) {
        prop_assume!(nondegenerate(&t));
        let sigma: Vec<usize> = (1..=t.p()).rev().collect();
        let lhs = middle_convolution(&permute(&t, &sigma).unwrap(), &lambda);
        let rhs = permute(&middle_convolution(&t, &lambda), &sigma).unwrap();
        prop_assert!(is_equivalent(&lhs, &rhs));
    }

    #[test]
    fn declared_schemes_survive_convolution(n in 1usize..=3, lambda in arb_generic()) {
        let t = hypergeometric_scf(n);
        let r = middle_convolution(&t, &lambda);
        if let Some(s) = r.scheme() {
            prop_assert!(verify_scheme(&r, s).unwrap());
        }
    }

    #[test]
    fn restriction_undoes_extension(n in 1usize..=3, rho1 in arb_generic(), rho2 in arb_generic()) {
        let o = hypergeometric_onf(n);
        let params = ExtensionParams { rho1: rho1.clone(), rho2: rho2.clone(), t_new: Scalar::from_int(9) };
        let q = &o.a().add_scalar(&-&params.rho1) * &o.a().add_scalar(&-&params.rho2);
        prop_assume!(!q.is_zero());
        let ext = extend_direct(&o, &params).unwrap();
        let back = restrict(&ext, &RestrictionParams { mu1: rho1, mu2: rho2, j: o.p() + 1 }).unwrap();
        prop_assert_eq!(back.a(), o.a());
        prop_assert_eq!(back.blocks(), o.blocks());
    }

    #[test]
    fn euler_transform_keeps_okubo_conditions(n in 1usize..=3, lambda in arb_generic()) {
        let o: OkuboSystem = hypergeometric_onf(n);
        prop_assume!(o.a().add_scalar(&lambda).rank() == o.n());
        let e = euler_transform(&o, &lambda).unwrap();
        prop_assert_eq!(e.n(), o.n());
        prop_assert_eq!(index_of_rigidity(&scf_from_onf(&e)), 2);
    }
}
