use serde::{Deserialize, Serialize};

use crate::hermitian::{BipartiteOperator, HermitianMatrix};

/// Parameters `(a, b)` of the slice `M(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlicePoint {
    pub a: f64,
    pub b: f64,
}

impl SlicePoint {
    pub fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }
}

/// ```text
/// ⎡ 1    0    0    a/4 ⎤
/// ⎢ 0    1/4  a/4  0   ⎥
/// ⎢ 0    a/4  b    0   ⎥
/// ⎣ a/4  0    0    1/4 ⎦
/// ```
/// as an element of `Her_2 ⊗ Her_2`.
pub fn matrix_m(p: SlicePoint) -> BipartiteOperator {
    let q = p.a / 4.0;
    let mat = HermitianMatrix::from_real_rows(&[
        vec![1.0, 0.0, 0.0, q],
        vec![0.0, 0.25, q, 0.0],
        vec![0.0, q, p.b, 0.0],
        vec![q, 0.0, 0.0, 0.25],
    ])
    .expect("real symmetric");
    BipartiteOperator::new(2, 2, mat).expect("4 = 2 * 2")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryCurve {
    P1,
    P2,
    P3,
}

impl BoundaryCurve {
    pub const ALL: [BoundaryCurve; 3] = [BoundaryCurve::P1, BoundaryCurve::P2, BoundaryCurve::P3];

    /// `p₁ = 1 + 2a + a² − b`, `p₂ = 1 − 2a + a² − b`, `p₃ = b`.
    pub fn eval(self, p: SlicePoint) -> f64 {
        let SlicePoint { a, b } = p;
        match self {
            BoundaryCurve::P1 => 1.0 + 2.0 * a + a * a - b,
            BoundaryCurve::P2 => 1.0 - 2.0 * a + a * a - b,
            BoundaryCurve::P3 => b,
        }
    }

    pub fn gradient(self, p: SlicePoint) -> (f64, f64) {
        match self {
            BoundaryCurve::P1 => (2.0 + 2.0 * p.a, -1.0),
            BoundaryCurve::P2 => (-2.0 + 2.0 * p.a, -1.0),
            BoundaryCurve::P3 => (0.0, 1.0),
        }
    }

    /// Coefficients `c[i][j]` of `a^i b^j`.
    pub fn coefficients(self) -> Vec<Vec<i64>> {
        match self {
            BoundaryCurve::P1 => vec![vec![1, -1], vec![2, 0], vec![1, 0]],
            BoundaryCurve::P2 => vec![vec![1, -1], vec![-2, 0], vec![1, 0]],
            BoundaryCurve::P3 => vec![vec![0, 1]],
        }
    }
}

/// `D = (b + 1 − a²)² − 4b`.
pub fn discriminant(p: SlicePoint) -> f64 {
    let c = p.b + 1.0 - p.a * p.a;
    c * c - 4.0 * p.b
}

/// Coefficients of `D` as in [`BoundaryCurve::coefficients`].
pub fn discriminant_coefficients() -> Vec<Vec<i64>> {
    // (b + 1 − a²)² − 4b = 1 − 2b + b² − 2a² − 2a²b + a⁴
    vec![
        vec![1, -2, 1],
        vec![0, 0, 0],
        vec![-2, -2, 0],
        vec![0, 0, 0],
        vec![1, 0, 0],
    ]
}

/// Product of two bivariate integer polynomials in coefficient form.
pub fn poly_mul(x: &[Vec<i64>], y: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let rows = x.len() + y.len() - 1;
    let cols =
        x.iter().map(Vec::len).max().unwrap_or(0) + y.iter().map(Vec::len).max().unwrap_or(0) - 1;
    let mut out = vec![vec![0; cols]; rows];
    for (i, xr) in x.iter().enumerate() {
        for (j, &xc) in xr.iter().enumerate() {
            for (k, yr) in y.iter().enumerate() {
                for (l, &yc) in yr.iter().enumerate() {
                    out[i + k][j + l] += xc * yc;
                }
            }
        }
    }
    out
}

/// Coefficient-wise equality, ignoring trailing zeros.
pub fn poly_eq(x: &[Vec<i64>], y: &[Vec<i64>]) -> bool {
    let get =
        |p: &[Vec<i64>], i: usize, j: usize| p.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0);
    let rows = x.len().max(y.len());
    let cols = x.iter().chain(y).map(Vec::len).max().unwrap_or(0);
    (0..rows).all(|i| (0..cols).all(|j| get(x, i, j) == get(y, i, j)))
}

/// Closed form of the psd part of the slice: `|a| ≤ 2` and `b ≥ a²/4`.
///
/// Permuting to index pairs `{0, 3}` and `{1, 2}` makes `M(a, b)` block
/// diagonal with blocks `[[1, a/4], [a/4, 1/4]]` and `[[1/4, a/4], [a/4, b]]`.
pub fn psd_slice(p: SlicePoint) -> bool {
    p.a.abs() <= 2.0 && 4.0 * p.b >= p.a * p.a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{CMatrix, C64};

    #[test]
    fn entries_of_m() {
        let m = matrix_m(SlicePoint::new(0.0, 0.0));
        assert_eq!(m.matrix(), &HermitianMatrix::diag(&[1.0, 0.25, 0.0, 0.25]));
        let m = matrix_m(SlicePoint::new(1.3, -0.7));
        assert_eq!(m.matrix().get(0, 3), C64::new(1.3 / 4.0, 0.0));
        assert_eq!(m.matrix().get(2, 2), C64::new(-0.7, 0.0));
    }

    #[test]
    fn m_is_gamma_invariant() {
        for (a, b) in [(0.3, 1.7), (-4.1, 9.3), (1.0, 0.0)] {
            let m = matrix_m(SlicePoint::new(a, b));
            assert_eq!(m.partial_transpose(), m);
        }
    }

    #[test]
    fn m_blocks() {
        let m = matrix_m(SlicePoint::new(2.0, 3.0));
        let half = C64::new(0.5, 0.0);
        let mut off = CMatrix::zeros(2, 2);
        off[(0, 1)] = half;
        off[(1, 0)] = half;
        assert_eq!(m.block(0, 1), off);
        assert_eq!(
            m.block(1, 1),
            HermitianMatrix::diag(&[3.0, 0.25]).into_cmatrix()
        );
    }

    #[test]
    fn factorization_at_coefficient_level() {
        let prod = poly_mul(
            &BoundaryCurve::P1.coefficients(),
            &BoundaryCurve::P2.coefficients(),
        );
        assert!(poly_eq(&prod, &discriminant_coefficients()));
        let p = SlicePoint::new(1.0, 1.0);
        assert_eq!(
            BoundaryCurve::P1.eval(p) * BoundaryCurve::P2.eval(p),
            discriminant(p)
        );
    }

    #[test]
    fn psd_slice_examples() {
        assert!(psd_slice(SlicePoint::new(0.0, 0.0)));
        assert!(psd_slice(SlicePoint::new(2.0, 1.0)));
        assert!(!psd_slice(SlicePoint::new(2.1, 5.0)));
        assert!(!psd_slice(SlicePoint::new(3.0, 0.0)));
    }

    #[test]
    fn gradients() {
        assert_eq!(
            BoundaryCurve::P2.gradient(SlicePoint::new(1.0, 0.0)),
            (0.0, -1.0)
        );
        assert_eq!(
            BoundaryCurve::P1.gradient(SlicePoint::new(-1.0, 0.0)),
            (0.0, -1.0)
        );
        assert_eq!(
            BoundaryCurve::P1.gradient(SlicePoint::new(0.5, 2.25)),
            (3.0, -1.0)
        );
    }
}
