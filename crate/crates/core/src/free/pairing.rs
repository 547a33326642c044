use crate::error::{Error, Result};
use crate::hermitian::{BipartiteOperator, HermitianMatrix, MatrixTuple};

/// An element of `Her_s(ℂ)^d`; its level is [`MatrixTuple::level`].
pub type FreeElement = MatrixTuple;

/// `Σ_i B_iᵀ ⊗ A_i`, of size `t·s` for `B` at level `t` and `A` at level `s`.
pub fn pairing_tuple(b: &FreeElement, a: &FreeElement) -> Result<HermitianMatrix> {
    if b.len() != a.len() {
        return Err(Error::DimensionMismatch(format!(
            "pairing tuples of lengths {} and {}",
            b.len(),
            a.len()
        )));
    }
    let mut acc = HermitianMatrix::zeros(b.level() * a.level());
    for (bi, ai) in b.entries().iter().zip(a.entries()) {
        acc = acc.add(&bi.transpose().tensor(ai));
    }
    Ok(acc)
}

/// `Σ_ij B_ijᵀ ⊗ A_ji` for `B` in `Her_d ⊗ Her_t` and `A` in `Her_d ⊗ Her_s`.
pub fn pairing_bipartite(b: &BipartiteOperator, a: &BipartiteOperator) -> Result<HermitianMatrix> {
    if b.d() != a.d() {
        return Err(Error::DimensionMismatch(format!(
            "first factors differ: {} and {}",
            b.d(),
            a.d()
        )));
    }
    let d = a.d();
    let n = b.s() * a.s();
    let mut acc = crate::hermitian::CMatrix::zeros(n, n);
    for i in 0..d {
        for j in 0..d {
            acc = &acc + &b.block(i, j).transpose().kron(&a.block(j, i));
        }
    }
    HermitianMatrix::new(acc)
}
