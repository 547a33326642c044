use crate::error::{Error, Result};
use crate::hermitian::{BipartiteOperator, CMatrix};

/// Kraus operators of the completely positive map whose Choi matrix is `c`.
///
/// For each eigenpair `(λ_k, w_k)` with `λ_k > 0`, `K_k` is the `d x s`
/// matrix with entries `conj(√λ_k (w_k)_{i·s + a})`, so that
/// `T(A) = Σ_k K_k^* A K_k` has `choi_matrix(T) = c`.
pub fn kraus_from_psd(c: &BipartiteOperator, psd_tol: f64) -> Result<Vec<CMatrix>> {
    let spec = c.matrix().spectrum();
    if spec.min() < -psd_tol * c.tol_scale() {
        return Err(Error::NotPsd {
            min_eigenvalue: spec.min(),
        });
    }
    let (d, s) = (c.d(), c.s());
    Ok(spec
        .eigenvalues
        .iter()
        .enumerate()
        .filter(|(_, &l)| l > 0.0)
        .map(|(k, &l)| {
            let root = l.sqrt();
            CMatrix::from_fn(d, s, |i, a| {
                (spec.eigenvectors[(i * s + a, k)] * root).conj()
            })
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{choi_matrix, LinearMapSpec, Sampler};

    fn round_trip_error(c: &BipartiteOperator) -> f64 {
        let kraus = kraus_from_psd(c, 1e-9).unwrap();
        let t = LinearMapSpec::from_kraus(c.d(), c.s(), &kraus).unwrap();
        choi_matrix(&t).sub(c).frobenius_norm()
    }

    #[test]
    fn identity_channel_has_one_kraus_operator() {
        let c = choi_matrix(&LinearMapSpec::identity(2));
        let kraus = kraus_from_psd(&c, 1e-9).unwrap();
        assert_eq!(kraus.len(), 1);
        // Up to a global phase the operator is I_2.
        let k = &kraus[0];
        let phase = k[(0, 0)] / k[(0, 0)].norm();
        assert!(
            k.scale_complex(phase.conj())
                .max_abs_diff(&CMatrix::identity(2))
                < 1e-12
        );
    }

    #[test]
    fn identity_choi_has_four_rank_one_terms() {
        let c = BipartiteOperator::identity(2, 2);
        assert_eq!(kraus_from_psd(&c, 1e-9).unwrap().len(), 4);
        assert!(round_trip_error(&c) < 1e-12);
    }

    #[test]
    fn random_round_trips() {
        let mut sampler = Sampler::new(5);
        for (d, s) in [(2, 2), (2, 3), (3, 2), (3, 3)] {
            for _ in 0..10 {
                let c = sampler.bipartite_psd(d, s);
                assert!(round_trip_error(&c) <= 1e-8 * c.tol_scale());
            }
        }
    }

    #[test]
    fn rejects_non_psd() {
        let c = choi_matrix(&LinearMapSpec::transposition(2));
        assert!(matches!(
            kraus_from_psd(&c, 1e-9),
            Err(Error::NotPsd { .. })
        ));
    }
}
