use super::bipartite::BipartiteOperator;
use super::hermitian::HermitianMatrix;
use super::matrix::CMatrix;
use crate::error::{Error, Result};

const STAR_LINEAR_TOL: f64 = 1e-8;

/// A linear map `T: Mat_d → Mat_s` recorded by its values on matrix units.
/// `images[i * d + j] = T(E_ij)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMapSpec {
    d: usize,
    s: usize,
    images: Vec<CMatrix>,
}

impl LinearMapSpec {
    /// Checks shapes and `T(E_ji) = T(E_ij)^*`, then enforces it exactly.
    pub fn new(d: usize, s: usize, mut images: Vec<CMatrix>) -> Result<Self> {
        if d == 0 || s == 0 || images.len() != d * d {
            return Err(Error::DimensionMismatch(format!(
                "expected {} images for d = {d}, got {}",
                d * d,
                images.len()
            )));
        }
        if images.iter().any(|m| m.rows() != s || m.cols() != s) {
            return Err(Error::DimensionMismatch(format!("images must be {s}x{s}")));
        }
        let scale = images
            .iter()
            .map(|m| m.frobenius_norm().powi(2))
            .sum::<f64>()
            .sqrt()
            .max(1.0);
        let mut deviation = 0.0f64;
        for i in 0..d {
            for j in i..d {
                let a = &images[i * d + j];
                let b = &images[j * d + i];
                deviation = deviation.max((a - &b.adjoint()).frobenius_norm());
            }
        }
        if deviation > STAR_LINEAR_TOL * scale {
            return Err(Error::NotStarLinear { deviation });
        }
        for i in 0..d {
            for j in i..d {
                let avg = (&images[i * d + j] + &images[j * d + i].adjoint()).scale(0.5);
                images[j * d + i] = avg.adjoint();
                images[i * d + j] = avg;
            }
        }
        Ok(Self { d, s, images })
    }

    /// Tabulates `f` on the matrix units.
    pub fn from_fn(d: usize, s: usize, f: impl Fn(&CMatrix) -> CMatrix) -> Result<Self> {
        let images = (0..d * d)
            .map(|k| f(&CMatrix::unit(d, k / d, k % d)))
            .collect();
        Self::new(d, s, images)
    }

    /// `T(A) = Σ_k K_k^* A K_k` for `d x s` Kraus operators.
    pub fn from_kraus(d: usize, s: usize, kraus: &[CMatrix]) -> Result<Self> {
        if kraus.iter().any(|k| k.rows() != d || k.cols() != s) {
            return Err(Error::DimensionMismatch(format!(
                "Kraus operators must be {d}x{s}"
            )));
        }
        Self::from_fn(d, s, |a| {
            kraus.iter().fold(CMatrix::zeros(s, s), |acc, k| {
                &acc + &(&(&k.adjoint() * a) * k)
            })
        })
    }

    pub fn identity(d: usize) -> Self {
        Self::from_fn(d, d, |a| a.clone()).expect("identity map is *-linear")
    }

    /// Matrix transposition on `Mat_d`.
    pub fn transposition(d: usize) -> Self {
        Self::from_fn(d, d, |a| a.transpose()).expect("transposition is *-linear")
    }

    /// `A ↦ tr(A) I_s / s`.
    pub fn trace_map(d: usize, s: usize) -> Self {
        Self::from_fn(d, s, |a| {
            CMatrix::identity(s).scale_complex(a.trace() / s as f64)
        })
        .expect("trace map is *-linear")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn image(&self, i: usize, j: usize) -> &CMatrix {
        &self.images[i * self.d + j]
    }

    /// `T(A) = Σ_ij A_ij T(E_ij)`.
    pub fn apply(&self, a: &CMatrix) -> Result<CMatrix> {
        if a.rows() != self.d || a.cols() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "map input must be {0}x{0}",
                self.d
            )));
        }
        let mut out = CMatrix::zeros(self.s, self.s);
        for i in 0..self.d {
            for j in 0..self.d {
                out = &out + &self.image(i, j).scale_complex(a[(i, j)]);
            }
        }
        Ok(out)
    }
}

/// `C_T = Σ_ij E_ij ⊗ T(E_ij)`.
pub fn choi_matrix(t: &LinearMapSpec) -> BipartiteOperator {
    let (d, s) = (t.d, t.s);
    let mut m = CMatrix::zeros(d * s, d * s);
    for i in 0..d {
        for j in 0..d {
            let img = t.image(i, j);
            for k in 0..s {
                for l in 0..s {
                    m[(i * s + k, j * s + l)] = img[(k, l)];
                }
            }
        }
    }
    BipartiteOperator::from_matrix_unchecked(d, s, HermitianMatrix::symmetrized(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::random::Sampler;

    #[test]
    fn choi_of_identity() {
        let c = choi_matrix(&LinearMapSpec::identity(2));
        let expected = HermitianMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(c.matrix(), &expected);
    }

    #[test]
    fn choi_of_transposition_is_swap() {
        let c = choi_matrix(&LinearMapSpec::transposition(2));
        let expected = HermitianMatrix::from_real_rows(&[
            vec![1.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 1.0],
        ])
        .unwrap();
        assert_eq!(c.matrix(), &expected);
    }

    #[test]
    fn choi_of_trace_map() {
        let c = choi_matrix(&LinearMapSpec::trace_map(2, 3));
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j {
                    CMatrix::identity(3).scale(1.0 / 3.0)
                } else {
                    CMatrix::zeros(3, 3)
                };
                assert!(c.block(i, j).max_abs_diff(&expected) < 1e-15);
            }
        }
    }

    #[test]
    fn rejects_non_star_linear_images() {
        let mut images = vec![CMatrix::zeros(2, 2); 4];
        images[1] = CMatrix::identity(2);
        assert!(matches!(
            LinearMapSpec::new(2, 2, images),
            Err(Error::NotStarLinear { .. })
        ));
    }

    #[test]
    fn choi_is_linear_in_the_map() {
        let mut sampler = Sampler::new(31);
        let k1: Vec<CMatrix> = (0..2).map(|_| sampler.complex_matrix(2, 3)).collect();
        let k2: Vec<CMatrix> = (0..3).map(|_| sampler.complex_matrix(2, 3)).collect();
        let t1 = LinearMapSpec::from_kraus(2, 3, &k1).unwrap();
        let t2 = LinearMapSpec::from_kraus(2, 3, &k2).unwrap();
        let images = (0..4)
            .map(|k| &t1.images[k].scale(2.0) + &t2.images[k].scale(-0.5))
            .collect();
        let combo = LinearMapSpec::new(2, 3, images).unwrap();
        let lhs = choi_matrix(&combo);
        let rhs = choi_matrix(&t1)
            .scale(2.0)
            .add(&choi_matrix(&t2).scale(-0.5));
        assert!(lhs.sub(&rhs).frobenius_norm() < 1e-12);
    }

    #[test]
    fn apply_matches_kraus_action() {
        let mut sampler = Sampler::new(37);
        let k: Vec<CMatrix> = (0..2).map(|_| sampler.complex_matrix(3, 2)).collect();
        let t = LinearMapSpec::from_kraus(3, 2, &k).unwrap();
        let a = sampler.complex_matrix(3, 3);
        let direct = k.iter().fold(CMatrix::zeros(2, 2), |acc, kk| {
            &acc + &(&(&kk.adjoint() * &a) * kk)
        });
        assert!(t.apply(&a).unwrap().max_abs_diff(&direct) < 1e-12);
    }
}
