use serde::{Deserialize, Serialize};

use super::eigen::{eig_hermitian, Spectrum};
use super::matrix::{CMatrix, C64};
use super::wire::MatrixWire;
use crate::error::{Error, Result};

/// Largest relative correction `‖(H − H*)/2‖_F / ‖H‖_F` accepted at construction.
pub const HERMITIAN_REJECT_TOL: f64 = 1e-8;

/// A complex Hermitian matrix. Exactly Hermitian after construction:
/// `entries[j][i] == conj(entries[i][j])` bit for bit, real diagonal.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixWire", into = "MatrixWire")]
pub struct HermitianMatrix {
    inner: CMatrix,
}

/// Replace `m` by `(m + m*)/2` with an exactly real diagonal.
fn symmetrize(m: &mut CMatrix) {
    let n = m.rows();
    for i in 0..n {
        m[(i, i)].im = 0.0;
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
}

impl HermitianMatrix {
    /// Validates finiteness and near-Hermiticity, then symmetrizes.
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() || m.rows() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square and non-empty, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        if let Some((row, col)) = m.first_non_finite() {
            return Err(Error::NonFinite { row, col });
        }
        let deviation = m.hermitian_deviation();
        let limit = HERMITIAN_REJECT_TOL * m.frobenius_norm();
        if deviation > limit {
            return Err(Error::NotHermitian { deviation, limit });
        }
        Ok(Self::symmetrized(m))
    }

    /// Symmetrizes without the rejection check. For matrices that are
    /// Hermitian up to rounding by construction.
    pub(crate) fn symmetrized(mut m: CMatrix) -> Self {
        debug_assert!(m.is_square());
        debug_assert!(
            m.hermitian_deviation() <= 1e-8 * m.frobenius_norm().max(1.0),
            "internal construction produced a non-Hermitian matrix"
        );
        symmetrize(&mut m);
        Self { inner: m }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            inner: CMatrix::zeros(n, n),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: CMatrix::identity(n),
        }
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self {
            inner: CMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new(values[i], 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            }),
        }
    }

    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(CMatrix::from_real_rows(rows)?)
    }

    /// Rank-one projector-like matrix `v v*`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        Self::symmetrized(CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.inner.rows()
    }

    pub fn as_cmatrix(&self) -> &CMatrix {
        &self.inner
    }

    pub fn into_cmatrix(self) -> CMatrix {
        self.inner
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.inner[(i, j)]
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    /// `max(1, ‖H‖_F)`, the scale used by every relative tolerance.
    pub fn tol_scale(&self) -> f64 {
        self.frobenius_norm().max(1.0)
    }

    pub fn trace(&self) -> f64 {
        self.inner.trace().re
    }

    /// Trace pairing `tr(A B)`, real for Hermitian arguments.
    pub fn inner(&self, other: &HermitianMatrix) -> f64 {
        assert_eq!(self.dim(), other.dim(), "trace pairing dimension mismatch");
        self.inner
            .data()
            .iter()
            .zip(other.inner.data())
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }

    pub fn add(&self, other: &HermitianMatrix) -> HermitianMatrix {
        Self {
            inner: &self.inner + &other.inner,
        }
    }

    pub fn sub(&self, other: &HermitianMatrix) -> HermitianMatrix {
        Self {
            inner: &self.inner - &other.inner,
        }
    }

    pub fn scale(&self, factor: f64) -> HermitianMatrix {
        Self {
            inner: self.inner.scale(factor),
        }
    }

    /// `self + t·I`.
    pub fn shift(&self, t: f64) -> HermitianMatrix {
        let mut inner = self.inner.clone();
        for i in 0..self.dim() {
            inner[(i, i)].re += t;
        }
        Self { inner }
    }

    /// Entrywise transpose, which equals the entrywise conjugate here.
    pub fn transpose(&self) -> HermitianMatrix {
        Self {
            inner: self.inner.transpose(),
        }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn tensor(&self, other: &HermitianMatrix) -> HermitianMatrix {
        Self {
            inner: self.inner.kron(&other.inner),
        }
    }

    /// `V* A V` for an `n x t` matrix `V`.
    pub fn compress(&self, v: &CMatrix) -> Result<HermitianMatrix> {
        if v.rows() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "compression by a {}x{} matrix of a {}x{} matrix",
                v.rows(),
                v.cols(),
                self.dim(),
                self.dim()
            )));
        }
        let av = self.inner.try_mul(v)?;
        Ok(Self::symmetrized(v.adjoint().try_mul(&av)?))
    }

    /// `Re(v* H v)`.
    pub fn quadratic_form(&self, v: &[C64]) -> f64 {
        let n = self.dim();
        assert_eq!(v.len(), n, "quadratic form dimension mismatch");
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            let row = self.inner.row(i);
            let hv: C64 = row.iter().zip(v).map(|(h, x)| h * x).sum();
            acc += v[i].conj() * hv;
        }
        acc.re
    }

    /// Eigendecomposition. Panics only if the Jacobi iteration fails to
    /// converge, which does not happen for finite Hermitian input.
    pub fn spectrum(&self) -> Spectrum {
        match eig_hermitian(self) {
            Ok(s) => s,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.spectrum().min()
    }

    /// `λ_min ≥ −tol·max(1, ‖H‖_F)`.
    pub fn is_psd(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol * self.tol_scale()
    }

    /// Frobenius-nearest psd matrix (eigenvalue clipping).
    pub fn project_psd(&self) -> HermitianMatrix {
        let spec = self.spectrum();
        if spec.min() >= 0.0 {
            return self.clone();
        }
        Self::symmetrized(spec.map_eigenvalues(|l| l.max(0.0)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::random::Sampler;

    #[test]
    fn rejects_non_hermitian_and_nan() {
        let m = CMatrix::from_real_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NotHermitian { .. })
        ));
        let m = CMatrix::from_real_rows(&[vec![f64::NAN, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            HermitianMatrix::new(m),
            Err(Error::NonFinite { row: 0, col: 0 })
        ));
    }

    #[test]
    fn tolerates_rounding_and_symmetrizes_exactly() {
        let m = CMatrix::from_rows(&[
            vec![C64::new(1.0, 1e-12), C64::new(0.5, 0.25)],
            vec![C64::new(0.5 + 1e-12, -0.25), C64::new(2.0, 0.0)],
        ])
        .unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        assert_eq!(h.get(0, 0).im, 0.0);
        assert_eq!(h.get(1, 0), h.get(0, 1).conj());
    }

    #[test]
    fn psd_checks() {
        assert!(HermitianMatrix::identity(3).is_psd(1e-9));
        assert!(!HermitianMatrix::diag(&[1.0, -1.0]).is_psd(1e-9));
    }

    #[test]
    fn tensor_examples() {
        let i2 = HermitianMatrix::identity(2);
        assert_eq!(i2.tensor(&i2), HermitianMatrix::identity(4));
        let t = HermitianMatrix::diag(&[1.0, 2.0]).tensor(&HermitianMatrix::diag(&[3.0, 4.0]));
        assert_eq!(t, HermitianMatrix::diag(&[3.0, 4.0, 6.0, 8.0]));
    }

    #[test]
    fn tensor_spectrum_is_product_of_spectra() {
        let mut sampler = Sampler::new(11);
        let a = sampler.hermitian(3);
        let b = sampler.hermitian(2);
        let la = a.spectrum().eigenvalues;
        let lb = b.spectrum().eigenvalues;
        let mut expected: Vec<f64> = la
            .iter()
            .flat_map(|x| lb.iter().map(move |y| x * y))
            .collect();
        expected.sort_by(f64::total_cmp);
        let got = a.tensor(&b).spectrum().eigenvalues;
        for (g, e) in got.iter().zip(&expected) {
            assert!((g - e).abs() < 1e-10, "{g} vs {e}");
        }
    }

    #[test]
    fn compress_examples() {
        let mut sampler = Sampler::new(3);
        let a = sampler.hermitian(3);
        assert_eq!(a.compress(&CMatrix::identity(3)).unwrap(), a);
        let e1 =
            CMatrix::column_vector(&[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]);
        let c = a.compress(&e1).unwrap();
        assert_eq!(c.dim(), 1);
        assert_eq!(c.get(0, 0), a.get(0, 0));
        assert!(a.compress(&CMatrix::identity(2)).is_err());
    }

    #[test]
    fn compress_composes() {
        let mut sampler = Sampler::new(5);
        let a = sampler.hermitian(4);
        let v = sampler.complex_matrix(4, 3);
        let w = sampler.complex_matrix(3, 2);
        let lhs = a.compress(&v).unwrap().compress(&w).unwrap();
        let rhs = a.compress(&(&v * &w)).unwrap();
        let scale = lhs.tol_scale();
        assert!((lhs.sub(&rhs)).frobenius_norm() <= 1e-12 * scale);
    }

    #[test]
    fn compress_keeps_psd() {
        let mut sampler = Sampler::new(9);
        for _ in 0..20 {
            let a = sampler.psd(4);
            let v = sampler.complex_matrix(4, 3);
            assert!(a.compress(&v).unwrap().is_psd(1e-9));
        }
    }

    #[test]
    fn project_psd_examples() {
        let p = HermitianMatrix::diag(&[1.0, -2.0]).project_psd();
        assert!(p.sub(&HermitianMatrix::diag(&[1.0, 0.0])).frobenius_norm() < 1e-15);
        let mut sampler = Sampler::new(13);
        let q = sampler.psd(3);
        assert_eq!(q.project_psd(), q);
    }

    #[test]
    fn project_psd_is_idempotent_metric_projection() {
        let mut sampler = Sampler::new(17);
        for _ in 0..5 {
            let h = sampler.hermitian(4);
            let p = h.project_psd();
            let pp = p.project_psd();
            assert!(p.sub(&pp).frobenius_norm() <= 1e-10);
            let residual = h.sub(&p);
            for _ in 0..100 {
                let q = sampler.psd(4);
                assert!(residual.inner(&q.sub(&p)) <= 1e-9);
            }
        }
    }
}
