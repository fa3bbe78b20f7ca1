use proptest::prelude::*;
use qreset_core::linalg::{gate_from_generator, hermitian_eig, kron, one_norm, psd_sqrt, Complex, Matrix};

type M = Matrix<f64>;

fn hermitian(dim: usize) -> impl Strategy<Value = M> {
    prop::collection::vec(-3.0f64..3.0, 2 * dim * dim).prop_map(move |v| {
        let raw = M::from_fn(dim, |i, j| Complex::new(v[2 * (i * dim + j)], v[2 * (i * dim + j) + 1]));
        raw.hermitian_part()
    })
}

fn any_hermitian() -> impl Strategy<Value = M> {
    (1usize..=8).prop_flat_map(hermitian)
}

fn square(dim: usize) -> impl Strategy<Value = M> {
    prop::collection::vec(-2.0f64..2.0, 2 * dim * dim)
        .prop_map(move |v| M::from_fn(dim, |i, j| Complex::new(v[2 * (i * dim + j)], v[2 * (i * dim + j) + 1])))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigen_reconstruction(a in any_hermitian()) {
        let spec = hermitian_eig(&a, 1e-12).unwrap();
        prop_assert!(one_norm(&(&spec.reconstruct() - &a)) < 1e-10);
        prop_assert!(spec.eigenvectors.is_unitary(1e-12));
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn group_law(a in hermitian(4), t1 in -3.0f64..3.0, t2 in -3.0f64..3.0) {
        let spec = hermitian_eig(&a, 1e-12).unwrap();
        let lhs = &gate_from_generator(&spec, t1) * &gate_from_generator(&spec, t2);
        let rhs = gate_from_generator(&spec, t1 + t2);
        prop_assert!(one_norm(&(&lhs - &rhs)) < 1e-10);
        prop_assert!((&gate_from_generator(&spec, 0.0) - &M::identity(4)).max_abs() < 1e-12);
    }

    #[test]
    fn sqrt_squares_back(b in square(4)) {
        let a = &b * &b.adjoint();
        let s = psd_sqrt(&a, 1e-10).unwrap();
        prop_assert!(s.is_hermitian(1e-10));
        prop_assert!(one_norm(&(&(&s * &s) - &a)) < 1e-10);
    }

    #[test]
    fn kron_mixed_product(a in square(2), b in square(3), c in square(2), d in square(3)) {
        let lhs = &kron(&a, &b) * &kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!((&lhs - &rhs).max_abs() < 1e-12);
    }

    #[test]
    fn kron_associative(a in square(2), b in square(2), c in square(2)) {
        let l = kron(&kron(&a, &b), &c);
        let r = kron(&a, &kron(&b, &c));
        prop_assert!((&l - &r).max_abs() < 1e-13);
    }
}

#[test]
fn matrix_json_round_trip() {
    let a = M::from_fn(3, |i, j| Complex::new(i as f64 - 0.5 * j as f64, (i * j) as f64 / 7.0));
    let text = serde_json::to_string(&a).unwrap();
    let back: M = serde_json::from_str(&text).unwrap();
    assert_eq!(a, back);
}

#[test]
fn sqrt_of_weak_limit_state() {
    let rho = M::from_fn(4, |i, j| {
        let rows = [[3.0, 0.0, 0.0, -1.0], [0.0, 1.0, 1.0, 0.0], [0.0, 1.0, 1.0, 0.0], [-1.0, 0.0, 0.0, 3.0]];
        Complex::real(rows[i][j] / 8.0)
    });
    let s = psd_sqrt(&rho, 1e-12).unwrap();
    assert!(one_norm(&(&(&s * &s) - &rho)) < 1e-12);
}
