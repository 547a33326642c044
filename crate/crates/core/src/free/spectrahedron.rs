use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hermitian::{hermitian_basis, HermitianMatrix, MatrixTuple};

use super::pairing::FreeElement;

/// Smallest admissible `λ_min / λ_max` of the coefficient Gram matrix.
pub const GRAM_CONDITION_THRESHOLD: f64 = 1e-8;
pub const ORDER_UNIT_TOL: f64 = 1e-10;

/// `{A : Σ_i B_i ⊗ A_i ≽ 0}` at every level, for linearly independent
/// Hermitian coefficients `B_i` of size `r x r`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FreeSpectrahedron {
    coeffs: MatrixTuple,
    order_unit: Option<Vec<f64>>,
}

impl FreeSpectrahedron {
    pub fn new(coeffs: MatrixTuple, order_unit: Option<Vec<f64>>) -> Result<Self> {
        let n = coeffs.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|k| (0..n).map(|l| coeffs.get(k).inner(coeffs.get(l))).collect())
            .collect();
        let spec = HermitianMatrix::from_real_rows(&rows)?.spectrum();
        if spec.min().is_nan() || spec.min() <= GRAM_CONDITION_THRESHOLD * spec.max() {
            return Err(Error::InvalidInput(format!(
                "coefficients are numerically dependent (Gram eigenvalues {:.3e} .. {:.3e})",
                spec.min(),
                spec.max()
            )));
        }
        if let Some(u) = &order_unit {
            if u.len() != n {
                return Err(Error::DimensionMismatch(format!(
                    "order unit has length {}, expected {n}",
                    u.len()
                )));
            }
            let r = coeffs.level();
            let sum = u
                .iter()
                .zip(coeffs.entries())
                .fold(HermitianMatrix::zeros(r), |acc, (&ui, b)| {
                    acc.add(&b.scale(ui))
                });
            let dev = sum.sub(&HermitianMatrix::identity(r)).frobenius_norm();
            if dev > ORDER_UNIT_TOL {
                return Err(Error::InvalidInput(format!(
                    "order unit does not reproduce the identity (deviation {dev:.3e})"
                )));
            }
        }
        Ok(Self { coeffs, order_unit })
    }

    /// `Psd_d` as a free spectrahedron: the coefficients are the
    /// orthonormal basis of `Her_d` and `Σ_i B_i ⊗ A_i` is the bipartite
    /// operator with coordinates `A`.
    pub fn psd(d: usize) -> Self {
        let basis = hermitian_basis(d);
        let unit = basis.iter().map(|b| b.trace()).collect();
        Self::new(
            MatrixTuple::new(basis).expect("non-empty basis"),
            Some(unit),
        )
        .expect("basis is orthonormal")
    }

    pub fn coeffs(&self) -> &MatrixTuple {
        &self.coeffs
    }

    pub fn order_unit(&self) -> Option<&[f64]> {
        self.order_unit.as_deref()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `Σ_i B_i ⊗ A_i`.
    pub fn pencil(&self, a: &FreeElement) -> Result<HermitianMatrix> {
        if a.len() != self.len() {
            return Err(Error::DimensionMismatch(format!(
                "element of length {} for a spectrahedron with {} coefficients",
                a.len(),
                self.len()
            )));
        }
        let n = self.coeffs.level() * a.level();
        Ok(self
            .coeffs
            .entries()
            .iter()
            .zip(a.entries())
            .fold(HermitianMatrix::zeros(n), |acc, (b, ai)| {
                acc.add(&b.tensor(ai))
            }))
    }
}

pub fn member_free_spectrahedron(
    s: &FreeSpectrahedron,
    a: &FreeElement,
    psd_tol: f64,
) -> Result<bool> {
    Ok(s.pencil(a)?.is_psd(psd_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cones::{member_psd, ToleranceConfig};
    use crate::hermitian::{bipartite_to_tuple, Sampler};

    #[test]
    fn order_unit_tuple_is_member() {
        let s = FreeSpectrahedron::psd(3);
        let u = s.order_unit().unwrap().to_vec();
        let a = MatrixTuple::new(
            u.iter()
                .map(|&ui| HermitianMatrix::identity(2).scale(ui))
                .collect(),
        )
        .unwrap();
        let pencil = s.pencil(&a).unwrap();
        assert!(pencil.sub(&HermitianMatrix::identity(6)).frobenius_norm() < 1e-12);
        assert!(member_free_spectrahedron(&s, &a, 1e-9).unwrap());
    }

    #[test]
    fn level_one_is_a_classical_spectrahedron() {
        let b = MatrixTuple::new(vec![
            HermitianMatrix::diag(&[1.0, 0.0]),
            HermitianMatrix::diag(&[0.0, 1.0]),
        ])
        .unwrap();
        let s = FreeSpectrahedron::new(b, Some(vec![1.0, 1.0])).unwrap();
        let point = |x: f64, y: f64| {
            MatrixTuple::new(vec![
                HermitianMatrix::diag(&[x]),
                HermitianMatrix::diag(&[y]),
            ])
            .unwrap()
        };
        assert!(member_free_spectrahedron(&s, &point(0.5, 0.2), 1e-9).unwrap());
        assert!(!member_free_spectrahedron(&s, &point(-0.5, 0.2), 1e-9).unwrap());
    }

    #[test]
    fn psd_basis_matches_bipartite_psd_test() {
        let cfg = ToleranceConfig::default();
        let s = FreeSpectrahedron::psd(2);
        let mut sampler = Sampler::new(12);
        for k in 0..40 {
            let x = if k % 2 == 0 {
                sampler.bipartite_psd(2, 3)
            } else {
                sampler.bipartite_hermitian(2, 3)
            };
            let a = bipartite_to_tuple(&x);
            assert!(s.pencil(&a).unwrap().sub(x.matrix()).frobenius_norm() < 1e-10);
            assert_eq!(
                member_free_spectrahedron(&s, &a, cfg.psd_tol).unwrap(),
                member_psd(&x, &cfg).is_in()
            );
        }
    }

    #[test]
    fn rejects_dependent_coefficients_and_bad_unit() {
        let i = HermitianMatrix::identity(2);
        let dep = MatrixTuple::new(vec![i.clone(), i.scale(2.0)]).unwrap();
        assert!(FreeSpectrahedron::new(dep, None).is_err());
        let b = MatrixTuple::new(vec![
            HermitianMatrix::diag(&[1.0, 0.0]),
            HermitianMatrix::diag(&[0.0, 1.0]),
        ])
        .unwrap();
        assert!(FreeSpectrahedron::new(b, Some(vec![1.0, 0.5])).is_err());
    }
}
