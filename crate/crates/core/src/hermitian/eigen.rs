//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies a real Jacobi rotation, so the composite
//! transformation stays unitary and the diagonal stays real.

use super::hermitian::HermitianMatrix;
use super::matrix::{CMatrix, C64};
use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 100;

/// Convergence threshold on the off-diagonal norm, relative to `‖H‖_F`.
pub const OFF_DIAGONAL_THRESHOLD: f64 = 1e-12;

/// Eigenvalues in ascending order with matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: CMatrix,
}

impl Spectrum {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        *self.eigenvalues.last().expect("non-empty spectrum")
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// `V diag(f(λ)) V*`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.eigenvalues.len();
        let v = &self.eigenvectors;
        let w: Vec<f64> = self.eigenvalues.iter().map(|&l| f(l)).collect();
        let mut out = CMatrix::zeros(n, n);
        for (k, &wk) in w.iter().enumerate() {
            if wk == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * wk;
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map_eigenvalues(|l| l)
    }
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

pub fn eig_hermitian(h: &HermitianMatrix) -> Result<Spectrum> {
    let n = h.dim();
    let mut a = h.as_cmatrix().clone();
    let mut v = CMatrix::identity(n);
    let scale = a.frobenius_norm();
    let threshold = OFF_DIAGONAL_THRESHOLD * scale;

    let mut converged = n <= 1 || scale == 0.0;
    let mut sweeps = 0;
    while !converged {
        if off_diagonal_norm(&a) <= threshold {
            converged = true;
            break;
        }
        if sweeps == MAX_SWEEPS {
            break;
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps,
            off_norm: off_diagonal_norm(&a),
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| a[(i, i)].re).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |i, k| v[(i, order[k])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase = apq / g;

    // J = diag(1, conj(phase)) · [[c, s], [-s, c]] restricted to (p, q).
    let j_pp = C64::new(c, 0.0);
    let j_pq = C64::new(s, 0.0);
    let j_qp = phase.conj() * (-s);
    let j_qq = phase.conj() * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)].im = 0.0;
    a[(q, q)].im = 0.0;

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::random::Sampler;

    #[test]
    fn diagonal_case() {
        let h = HermitianMatrix::diag(&[3.0, 1.0]);
        let spec = eig_hermitian(&h).unwrap();
        assert_eq!(spec.eigenvalues, vec![1.0, 3.0]);
    }

    #[test]
    fn pauli_x() {
        let h = HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let spec = eig_hermitian(&h).unwrap();
        assert!((spec.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!((spec.eigenvalues[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pauli_y_complex_pivot() {
        let h = HermitianMatrix::new(
            CMatrix::from_rows(&[
                vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0)],
                vec![C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
            ])
            .unwrap(),
        )
        .unwrap();
        let spec = eig_hermitian(&h).unwrap();
        assert!((spec.eigenvalues[0] + 1.0).abs() < 1e-14);
        assert!(spec.reconstruct().max_abs_diff(h.as_cmatrix()) < 1e-14);
    }

    #[test]
    fn random_reconstruction_and_orthonormality() {
        let mut sampler = Sampler::new(7);
        for n in [1, 2, 3, 5, 9, 16, 36] {
            let h = sampler.hermitian(n);
            let spec = eig_hermitian(&h).unwrap();
            let scale = h.frobenius_norm().max(1.0);
            let diff = (&spec.reconstruct() - h.as_cmatrix()).frobenius_norm();
            assert!(diff <= 1e-10 * scale, "n={n}: reconstruction {diff:e}");
            let gram = &spec.eigenvectors.adjoint() * &spec.eigenvectors;
            let orth = (&gram - &CMatrix::identity(n)).frobenius_norm();
            assert!(orth <= 1e-10, "n={n}: orthonormality {orth:e}");
            assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        }
    }

    #[test]
    fn degenerate_spectrum() {
        let h = HermitianMatrix::identity(6).scale(2.5);
        let spec = eig_hermitian(&h).unwrap();
        assert!(spec.eigenvalues.iter().all(|&l| l == 2.5));
    }

    #[test]
    fn zero_matrix() {
        let spec = eig_hermitian(&HermitianMatrix::zeros(4)).unwrap();
        assert_eq!(spec.eigenvalues, vec![0.0; 4]);
    }
}
