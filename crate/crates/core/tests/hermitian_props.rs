use conelab::hermitian::{
    bipartite_to_tuple, choi_matrix, tuple_to_bipartite, CMatrix, HermitianMatrix, LinearMapSpec,
    Sampler,
};
use proptest::prelude::*;

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=3, 1usize..=3)
}

fn random_map(sampler: &mut Sampler, d: usize, s: usize) -> LinearMapSpec {
    let k = sampler.complex_matrix(d, s);
    let l = sampler.complex_matrix(d, s);
    LinearMapSpec::from_kraus(d, s, &[k, l]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn gamma_is_an_isometric_involution(seed in any::<u64>(), (d, s) in dims()) {
        let mut sampler = Sampler::new(seed);
        let x = sampler.bipartite_hermitian(d, s);
        let g = x.partial_transpose();
        prop_assert_eq!(g.partial_transpose(), x.clone());
        prop_assert!((g.frobenius_norm() - x.frobenius_norm()).abs() <= 1e-12 * x.tol_scale());
    }

    #[test]
    fn gamma_is_real_linear(seed in any::<u64>(), (d, s) in dims(), t in -3.0f64..3.0) {
        let mut sampler = Sampler::new(seed);
        let x = sampler.bipartite_hermitian(d, s);
        let y = sampler.bipartite_hermitian(d, s);
        let lhs = x.add(&y.scale(t)).partial_transpose();
        let rhs = x.partial_transpose().add(&y.partial_transpose().scale(t));
        prop_assert!(lhs.sub(&rhs).frobenius_norm() <= 1e-12 * lhs.tol_scale());
    }

    #[test]
    fn compress_composes(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=4, k in 1usize..=4) {
        let mut sampler = Sampler::new(seed);
        let a = sampler.hermitian(n);
        let v = sampler.complex_matrix(n, m);
        let w = sampler.complex_matrix(m, k);
        let twice = a.compress(&v).unwrap().compress(&w).unwrap();
        let once = a.compress(&(&v * &w)).unwrap();
        let scale = once.tol_scale();
        prop_assert!(twice.sub(&once).frobenius_norm() <= 1e-12 * scale);
    }

    #[test]
    fn compress_keeps_psd(seed in any::<u64>(), n in 1usize..=4, m in 1usize..=4) {
        let mut sampler = Sampler::new(seed);
        let a = sampler.psd(n);
        let v = sampler.complex_matrix(n, m);
        prop_assert!(a.compress(&v).unwrap().is_psd(1e-9));
    }

    #[test]
    fn choi_is_linear(seed in any::<u64>(), (d, s) in dims(), t in -2.0f64..2.0) {
        let mut sampler = Sampler::new(seed);
        let f = random_map(&mut sampler, d, s);
        let g = random_map(&mut sampler, d, s);
        let combo = LinearMapSpec::from_fn(d, s, |a| {
            &f.apply(a).unwrap() + &g.apply(a).unwrap().scale(t)
        })
        .unwrap();
        let lhs = choi_matrix(&combo);
        let rhs = choi_matrix(&f).add(&choi_matrix(&g).scale(t));
        prop_assert!(lhs.sub(&rhs).frobenius_norm() <= 1e-10 * lhs.tol_scale());
    }

    #[test]
    fn tuple_round_trip(seed in any::<u64>(), (d, s) in dims()) {
        let mut sampler = Sampler::new(seed);
        let x = sampler.bipartite_hermitian(d, s);
        let back = tuple_to_bipartite(d, &bipartite_to_tuple(&x)).unwrap();
        prop_assert!(back.sub(&x).frobenius_norm() <= 1e-12 * x.tol_scale());
    }

    #[test]
    fn spectrum_reconstructs(seed in any::<u64>(), n in 1usize..=9) {
        let h = Sampler::new(seed).hermitian(n);
        let spec = h.spectrum();
        prop_assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let err = spec.reconstruct().max_abs_diff(h.as_cmatrix());
        prop_assert!(err <= 1e-10 * h.tol_scale());
    }
}

#[test]
fn project_psd_is_a_metric_projection() {
    let mut sampler = Sampler::new(11);
    for n in [2, 3, 4, 6] {
        let h = sampler.hermitian(n);
        let p = h.project_psd();
        let diff = h.sub(&p);
        for _ in 0..100 {
            let q = sampler.psd(n);
            assert!(diff.inner(&q.sub(&p)) <= 1e-9 * h.tol_scale() * q.tol_scale());
        }
    }
}

#[test]
fn choi_of_star_linear_map_is_hermitian() {
    // Conjugation by an arbitrary matrix is *-linear.
    let mut sampler = Sampler::new(12);
    let v = sampler.complex_matrix(2, 3);
    let t = LinearMapSpec::from_fn(2, 3, |a| &(&v.adjoint() * a) * &v).unwrap();
    let c = choi_matrix(&t);
    assert!(c.matrix().as_cmatrix().hermitian_deviation() == 0.0);
}

#[test]
fn identity_choi_matrix() {
    let c = choi_matrix(&LinearMapSpec::identity(2));
    let expected = HermitianMatrix::from_real_rows(&[
        vec![1.0, 0.0, 0.0, 1.0],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![0.0, 0.0, 0.0, 0.0],
        vec![1.0, 0.0, 0.0, 1.0],
    ])
    .unwrap();
    assert_eq!(c.matrix(), &expected);
    let swap = choi_matrix(&LinearMapSpec::transposition(2));
    assert_eq!(swap.partial_transpose(), c);
    let e = CMatrix::identity(4);
    assert_eq!(
        HermitianMatrix::new(e).unwrap(),
        HermitianMatrix::identity(4)
    );
}
