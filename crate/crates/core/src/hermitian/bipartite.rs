use serde::{Deserialize, Serialize};

use super::hermitian::HermitianMatrix;
use super::matrix::{kron_vec, CMatrix, C64};
use super::wire::BipartiteWire;
use crate::error::{Error, Result};

/// Hermitian element of `Mat_d ⊗ Mat_s`, stored as a `ds x ds` matrix whose
/// `(i, j)` block of size `s x s` is `A_ij`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BipartiteWire", into = "BipartiteWire")]
pub struct BipartiteOperator {
    d: usize,
    s: usize,
    mat: HermitianMatrix,
}

impl BipartiteOperator {
    pub fn new(d: usize, s: usize, mat: HermitianMatrix) -> Result<Self> {
        if d == 0 || s == 0 || mat.dim() != d * s {
            return Err(Error::DimensionMismatch(format!(
                "field \"mat\" has dimension {}, expected d*s = {}*{} = {}",
                mat.dim(),
                d,
                s,
                d * s
            )));
        }
        Ok(Self { d, s, mat })
    }

    /// Assemble from blocks `A_ij = block(i, j)`; the result must be Hermitian.
    pub fn from_blocks(
        d: usize,
        s: usize,
        mut block: impl FnMut(usize, usize) -> CMatrix,
    ) -> Result<Self> {
        let mut m = CMatrix::zeros(d * s, d * s);
        for i in 0..d {
            for j in 0..d {
                let b = block(i, j);
                if b.rows() != s || b.cols() != s {
                    return Err(Error::DimensionMismatch(format!(
                        "block ({i},{j}) is {}x{}, expected {s}x{s}",
                        b.rows(),
                        b.cols()
                    )));
                }
                for k in 0..s {
                    for l in 0..s {
                        m[(i * s + k, j * s + l)] = b[(k, l)];
                    }
                }
            }
        }
        Self::new(d, s, HermitianMatrix::new(m)?)
    }

    pub(crate) fn from_matrix_unchecked(d: usize, s: usize, mat: HermitianMatrix) -> Self {
        debug_assert_eq!(mat.dim(), d * s);
        Self { d, s, mat }
    }

    pub fn identity(d: usize, s: usize) -> Self {
        Self::from_matrix_unchecked(d, s, HermitianMatrix::identity(d * s))
    }

    pub fn zeros(d: usize, s: usize) -> Self {
        Self::from_matrix_unchecked(d, s, HermitianMatrix::zeros(d * s))
    }

    /// `A ⊗ B` for `A` of size `d` and `B` of size `s`.
    pub fn product(a: &HermitianMatrix, b: &HermitianMatrix) -> Self {
        Self::from_matrix_unchecked(a.dim(), b.dim(), a.tensor(b))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> HermitianMatrix {
        self.mat
    }

    pub fn block(&self, i: usize, j: usize) -> CMatrix {
        self.mat
            .as_cmatrix()
            .submatrix(i * self.s, j * self.s, self.s, self.s)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.mat.frobenius_norm()
    }

    pub fn tol_scale(&self) -> f64 {
        self.mat.tol_scale()
    }

    pub fn trace(&self) -> f64 {
        self.mat.trace()
    }

    pub fn inner(&self, other: &BipartiteOperator) -> f64 {
        self.mat.inner(&other.mat)
    }

    fn check_same_shape(&self, other: &BipartiteOperator) {
        assert!(
            self.d == other.d && self.s == other.s,
            "bipartite shape mismatch: ({},{}) vs ({},{})",
            self.d,
            self.s,
            other.d,
            other.s
        );
    }

    pub fn add(&self, other: &BipartiteOperator) -> BipartiteOperator {
        self.check_same_shape(other);
        Self::from_matrix_unchecked(self.d, self.s, self.mat.add(&other.mat))
    }

    pub fn sub(&self, other: &BipartiteOperator) -> BipartiteOperator {
        self.check_same_shape(other);
        Self::from_matrix_unchecked(self.d, self.s, self.mat.sub(&other.mat))
    }

    pub fn scale(&self, factor: f64) -> BipartiteOperator {
        Self::from_matrix_unchecked(self.d, self.s, self.mat.scale(factor))
    }

    pub fn shift(&self, t: f64) -> BipartiteOperator {
        Self::from_matrix_unchecked(self.d, self.s, self.mat.shift(t))
    }

    /// `Γ`: transposes the first tensor factor, i.e. block `(i, j)` of the
    /// result is block `(j, i)` of `self`.
    pub fn partial_transpose(&self) -> BipartiteOperator {
        let (d, s) = (self.d, self.s);
        let src = self.mat.as_cmatrix();
        let m = CMatrix::from_fn(d * s, d * s, |r, c| {
            let (i, k) = (r / s, r % s);
            let (j, l) = (c / s, c % s);
            src[(j * s + k, i * s + l)]
        });
        Self::from_matrix_unchecked(d, s, HermitianMatrix::symmetrized(m))
    }

    /// `(x ⊗ y)* X (x ⊗ y)`.
    pub fn product_value(&self, x: &[C64], y: &[C64]) -> f64 {
        self.mat.quadratic_form(&kron_vec(x, y))
    }

    /// `Σ_ij conj(x_i) x_j A_ij`, the `s x s` matrix of the form for fixed `x`.
    pub fn contract_first(&self, x: &[C64]) -> HermitianMatrix {
        let (d, s) = (self.d, self.s);
        let m = self.mat.as_cmatrix();
        let mut out = CMatrix::zeros(s, s);
        for i in 0..d {
            for j in 0..d {
                let w = x[i].conj() * x[j];
                if w == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..s {
                    for l in 0..s {
                        out[(k, l)] += w * m[(i * s + k, j * s + l)];
                    }
                }
            }
        }
        HermitianMatrix::symmetrized(out)
    }

    /// `(y* A_ij y)_ij`, the `d x d` matrix of the form for fixed `y`.
    pub fn contract_second(&self, y: &[C64]) -> HermitianMatrix {
        let (d, s) = (self.d, self.s);
        let m = self.mat.as_cmatrix();
        let out = CMatrix::from_fn(d, d, |i, j| {
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..s {
                let mut row = C64::new(0.0, 0.0);
                for l in 0..s {
                    row += m[(i * s + k, j * s + l)] * y[l];
                }
                acc += y[k].conj() * row;
            }
            acc
        });
        HermitianMatrix::symmetrized(out)
    }
}

/// A `d`-tuple of Hermitian `s x s` matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixTuple {
    entries: Vec<HermitianMatrix>,
}

impl MatrixTuple {
    pub fn new(entries: Vec<HermitianMatrix>) -> Result<Self> {
        let Some(first) = entries.first() else {
            return Err(Error::InvalidInput("empty matrix tuple".into()));
        };
        let s = first.dim();
        if entries.iter().any(|e| e.dim() != s) {
            return Err(Error::DimensionMismatch(
                "tuple entries must share one size".into(),
            ));
        }
        Ok(Self { entries })
    }

    /// Tuple length `d`.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Matrix size `s` of each entry.
    pub fn level(&self) -> usize {
        self.entries[0].dim()
    }

    pub fn entries(&self) -> &[HermitianMatrix] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &HermitianMatrix {
        &self.entries[i]
    }

    /// `Σ_i tr(A_i B_i)`.
    pub fn inner(&self, other: &MatrixTuple) -> f64 {
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.inner(b))
            .sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|e| e.frobenius_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }
}

/// Orthonormal basis of `Her_d` for the trace inner product: all `E_ii`,
/// then for each `i < j` the pair `(E_ij + E_ji)/√2`, `i(E_ij − E_ji)/√2`.
pub fn hermitian_basis(d: usize) -> Vec<HermitianMatrix> {
    let mut basis = Vec::with_capacity(d * d);
    for i in 0..d {
        basis.push(HermitianMatrix::symmetrized(CMatrix::unit(d, i, i)));
    }
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..d {
        for j in (i + 1)..d {
            let mut sym = CMatrix::zeros(d, d);
            sym[(i, j)] = C64::new(r, 0.0);
            sym[(j, i)] = C64::new(r, 0.0);
            basis.push(HermitianMatrix::symmetrized(sym));
            let mut anti = CMatrix::zeros(d, d);
            anti[(i, j)] = C64::new(0.0, r);
            anti[(j, i)] = C64::new(0.0, -r);
            basis.push(HermitianMatrix::symmetrized(anti));
        }
    }
    basis
}

/// Coordinates of `X = Σ_k B_k ⊗ A_k` with respect to [`hermitian_basis`]:
/// `A_k = Σ_ij conj((B_k)_ij) X_ij`.
pub fn bipartite_to_tuple(x: &BipartiteOperator) -> MatrixTuple {
    let (d, s) = (x.d(), x.s());
    let blocks: Vec<CMatrix> = (0..d * d).map(|k| x.block(k / d, k % d)).collect();
    let entries = hermitian_basis(d)
        .iter()
        .map(|b| {
            let mut acc = CMatrix::zeros(s, s);
            for i in 0..d {
                for j in 0..d {
                    let w = b.get(i, j).conj();
                    if w != C64::new(0.0, 0.0) {
                        acc = &acc + &blocks[i * d + j].scale_complex(w);
                    }
                }
            }
            HermitianMatrix::symmetrized(acc)
        })
        .collect();
    MatrixTuple { entries }
}

/// Inverse of [`bipartite_to_tuple`]: `X = Σ_k B_k ⊗ A_k`.
pub fn tuple_to_bipartite(d: usize, tuple: &MatrixTuple) -> Result<BipartiteOperator> {
    if tuple.len() != d * d {
        return Err(Error::DimensionMismatch(format!(
            "tuple of length {} cannot be coordinates in Her_{d} (needs {})",
            tuple.len(),
            d * d
        )));
    }
    let s = tuple.level();
    let mut acc = HermitianMatrix::zeros(d * s);
    for (b, a) in hermitian_basis(d).iter().zip(tuple.entries()) {
        acc = acc.add(&b.tensor(a));
    }
    Ok(BipartiteOperator::from_matrix_unchecked(d, s, acc))
}
