//! Seeded sampling. All samplers use ChaCha8 so a seed gives identical
//! output on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::bipartite::BipartiteOperator;
use super::hermitian::HermitianMatrix;
use super::matrix::{normalize, CMatrix, C64};

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Uniform in `0..n`.
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.gen_range(0..n)
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn complex_normal(&mut self) -> C64 {
        C64::new(self.normal(), self.normal())
    }

    pub fn complex_matrix(&mut self, rows: usize, cols: usize) -> CMatrix {
        CMatrix::from_fn(rows, cols, |_, _| self.complex_normal())
    }

    /// Gaussian real and imaginary parts, then `(G + G*)/2`.
    pub fn hermitian(&mut self, n: usize) -> HermitianMatrix {
        let g = self.complex_matrix(n, n);
        HermitianMatrix::symmetrized((&g + &g.adjoint()).scale(0.5))
    }

    /// `G G*` with `G` complex Gaussian.
    pub fn psd(&mut self, n: usize) -> HermitianMatrix {
        let g = self.complex_matrix(n, n);
        HermitianMatrix::symmetrized(&g * &g.adjoint())
    }

    /// `G G*` with `G` of size `n x rank`.
    pub fn psd_with_rank(&mut self, n: usize, rank: usize) -> HermitianMatrix {
        let g = self.complex_matrix(n, rank);
        HermitianMatrix::symmetrized(&g * &g.adjoint())
    }

    pub fn unit_vector(&mut self, n: usize) -> Vec<C64> {
        let v: Vec<C64> = (0..n).map(|_| self.complex_normal()).collect();
        normalize(&v)
    }

    pub fn product_vector(&mut self, d: usize, s: usize) -> (Vec<C64>, Vec<C64>) {
        (self.unit_vector(d), self.unit_vector(s))
    }

    /// Sum of `k` terms `P ⊗ Q` with `P`, `Q` random psd of unit trace.
    pub fn separable(&mut self, d: usize, s: usize, k: usize) -> BipartiteOperator {
        let mut acc = BipartiteOperator::zeros(d, s);
        for _ in 0..k {
            let p = self.psd(d);
            let q = self.psd(s);
            let term =
                BipartiteOperator::product(&p.scale(1.0 / p.trace()), &q.scale(1.0 / q.trace()));
            acc = acc.add(&term);
        }
        acc
    }

    pub fn bipartite_hermitian(&mut self, d: usize, s: usize) -> BipartiteOperator {
        BipartiteOperator::from_matrix_unchecked(d, s, self.hermitian(d * s))
    }

    pub fn bipartite_psd(&mut self, d: usize, s: usize) -> BipartiteOperator {
        BipartiteOperator::from_matrix_unchecked(d, s, self.psd(d * s))
    }
}

pub fn random_hermitian(n: usize, seed: u64) -> HermitianMatrix {
    Sampler::new(seed).hermitian(n)
}

pub fn random_psd(n: usize, seed: u64) -> HermitianMatrix {
    Sampler::new(seed).psd(n)
}

pub fn random_separable(d: usize, s: usize, k: usize, seed: u64) -> BipartiteOperator {
    Sampler::new(seed).separable(d, s, k)
}

pub fn random_product_vector(d: usize, s: usize, seed: u64) -> (Vec<C64>, Vec<C64>) {
    Sampler::new(seed).product_vector(d, s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_under_seed() {
        assert_eq!(random_hermitian(4, 99), random_hermitian(4, 99));
        assert_eq!(random_separable(2, 3, 4, 5), random_separable(2, 3, 4, 5));
        assert_ne!(random_psd(3, 1), random_psd(3, 2));
    }

    #[test]
    fn psd_spectrum_nonnegative() {
        for seed in 0..20 {
            let p = random_psd(5, seed);
            assert!(p.is_psd(0.0));
        }
    }

    #[test]
    fn product_vectors_are_unit() {
        let (x, y) = random_product_vector(3, 2, 4);
        let nx: f64 = x.iter().map(|z| z.norm_sqr()).sum();
        let ny: f64 = y.iter().map(|z| z.norm_sqr()).sum();
        assert!((nx - 1.0).abs() < 1e-14 && (ny - 1.0).abs() < 1e-14);
    }
}
