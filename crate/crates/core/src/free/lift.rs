use crate::error::{Error, Result};
use crate::hermitian::{BipartiteOperator, CMatrix, C64};

/// Places the four `2 x 2` blocks of `m` in the top-left corners of the
/// blocks `(i, j) ∈ {0, 1}²` of a `(d, s)` operator, zero elsewhere.
pub fn lift(m: &BipartiteOperator, d: usize, s: usize) -> Result<BipartiteOperator> {
    if m.d() != 2 || m.s() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "lift expects a (2, 2) operator, got ({}, {})",
            m.d(),
            m.s()
        )));
    }
    if d < 2 || s < 2 {
        return Err(Error::InvalidInput(format!(
            "lift target ({d}, {s}) must have d, s >= 2"
        )));
    }
    BipartiteOperator::from_blocks(d, s, |i, j| {
        let mut block = CMatrix::zeros(s, s);
        if i < 2 && j < 2 {
            let src = m.block(i, j);
            for k in 0..2 {
                for l in 0..2 {
                    block[(k, l)] = src[(k, l)];
                }
            }
        }
        block
    })
}

/// `ι_d ⊗ ι_s` for the coordinate embeddings `ℂ² → ℂ^d`, `ℂ² → ℂ^s`.
pub fn embedding_isometry(d: usize, s: usize) -> CMatrix {
    let mut v = CMatrix::zeros(d * s, 4);
    for i in 0..2 {
        for k in 0..2 {
            v[(i * s + k, i * 2 + k)] = C64::new(1.0, 0.0);
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::Sampler;

    #[test]
    fn lift_to_same_size_is_identity() {
        let m = Sampler::new(1).bipartite_hermitian(2, 2);
        assert_eq!(lift(&m, 2, 2).unwrap(), m);
    }

    #[test]
    fn compression_recovers_original() {
        let m = Sampler::new(2).bipartite_hermitian(2, 2);
        for (d, s) in [(3, 3), (3, 2), (2, 4)] {
            let big = lift(&m, d, s).unwrap();
            let back = big.matrix().compress(&embedding_isometry(d, s)).unwrap();
            assert_eq!(&back, m.matrix());
            assert!((big.frobenius_norm() - m.frobenius_norm()).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_small_targets() {
        let m = BipartiteOperator::identity(2, 2);
        assert!(lift(&m, 1, 3).is_err());
        assert!(lift(&BipartiteOperator::identity(3, 2), 3, 3).is_err());
    }
}
