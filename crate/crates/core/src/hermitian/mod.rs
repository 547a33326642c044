//! Complex Hermitian linear algebra: dense matrices, Jacobi eigensolver,
//! bipartite operators with partial transpose, Choi matrices and sampling.

mod bipartite;
mod choi;
mod eigen;
#[allow(clippy::module_inception)]
mod hermitian;
mod matrix;
pub mod random;
pub mod wire;

pub use bipartite::{
    bipartite_to_tuple, hermitian_basis, tuple_to_bipartite, BipartiteOperator, MatrixTuple,
};
pub use choi::{choi_matrix, LinearMapSpec};
pub use eigen::{eig_hermitian, Spectrum, MAX_SWEEPS, OFF_DIAGONAL_THRESHOLD};
pub use hermitian::{HermitianMatrix, HERMITIAN_REJECT_TOL};
pub use matrix::{kron_vec, CMatrix, C64};
pub use random::{random_hermitian, random_product_vector, random_psd, random_separable, Sampler};

/// `λ_min(H) ≥ −tol·max(1, ‖H‖_F)`.
pub fn is_psd(h: &HermitianMatrix, tol: f64) -> bool {
    h.is_psd(tol)
}

pub fn partial_transpose(x: &BipartiteOperator) -> BipartiteOperator {
    x.partial_transpose()
}
