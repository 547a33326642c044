//! Positivity of the biquadratic form of `M(a, b)` checked directly on
//! the matrix polynomial
//!
//! ```text
//! p̂(r) = [[r² + b, a r / 2], [a r / 2, (r² + 1)/4]]
//! ```
//!
//! without using the description of the region by `S₁` and `S₂`.

use rand::Rng;

use super::family::SlicePoint;
use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, Sampler, C64};

pub const MIN_GRID_POINTS: usize = 100;

fn p_hat(p: SlicePoint, r: f64) -> [f64; 3] {
    [r * r + p.b, p.a * r / 2.0, (r * r + 1.0) / 4.0]
}

fn lambda_min_2x2(m: [f64; 3]) -> f64 {
    let [x, o, z] = m;
    0.5 * (x + z - ((x - z).powi(2) + 4.0 * o * o).sqrt())
}

/// `q(s) = s² + (b + 1 − a²) s + b`.
pub fn q_poly(p: SlicePoint, s: f64) -> f64 {
    s * s + (p.b + 1.0 - p.a * p.a) * s + p.b
}

/// `min_{s ≥ 0} q(s)`, from the vertex.
pub fn q_min_nonneg(p: SlicePoint) -> f64 {
    let vertex = -(p.b + 1.0 - p.a * p.a) / 2.0;
    q_poly(p, vertex.max(0.0))
}

/// Exact positivity of `p̂(r)` for all real `r`: `b ≥ 0` and `q ≥ 0` on
/// `[0, ∞)`. Returns the verdict and its signed margin.
pub fn exact_quartic(p: SlicePoint) -> (bool, f64) {
    let margin = p.b.min(q_min_nonneg(p));
    (margin >= 0.0, margin)
}

/// Exact verdict cross-checked against a grid of `grid_n` values
/// `r ∈ [−R, R]`, `R = 2(1 + |a| + √max(b, 0))`. At every grid point the
/// determinant of `p̂(r)` is also compared with `q(r²)/4`.
///
/// A disagreement between grid and exact verdict is an error unless the
/// exact margin is below what the grid spacing can resolve.
pub fn brute_force_region(p: SlicePoint, grid_n: usize) -> Result<bool> {
    if grid_n < MIN_GRID_POINTS {
        return Err(Error::InvalidInput(format!(
            "brute force needs at least {MIN_GRID_POINTS} grid points, got {grid_n}"
        )));
    }
    if !p.is_finite() {
        return Err(Error::InvalidInput(format!("non-finite slice point {p:?}")));
    }
    let (exact, margin) = exact_quartic(p);
    let radius = 2.0 * (1.0 + p.a.abs() + p.b.max(0.0).sqrt());
    let h = 2.0 * radius / (grid_n - 1) as f64;
    let scale = 1.0 + radius.powi(4) + p.a * p.a * radius * radius + p.b.abs();

    let mut grid_min = f64::INFINITY;
    for k in 0..grid_n {
        let r = (-radius * (grid_n - 1 - k) as f64 + radius * k as f64) / (grid_n - 1) as f64;
        let m = p_hat(p, r);
        let det = m[0] * m[2] - m[1] * m[1];
        let reduced = q_poly(p, r * r) / 4.0;
        if (det - reduced).abs() > 1e-12 * scale {
            return Err(Error::OracleDisagreement(format!(
                "det p̂({r}) = {det} but q(r²)/4 = {reduced} at {p:?}"
            )));
        }
        grid_min = grid_min.min(lambda_min_2x2(m));
    }

    let grid_ok = grid_min >= -1e-12 * scale;
    if grid_ok != exact {
        let resolvable = (2.0 * radius * h).powi(2) + 1e-9;
        if exact || margin.abs() > resolvable {
            return Err(Error::OracleDisagreement(format!(
                "grid minimum {grid_min:e} vs exact margin {margin:e} at {p:?}"
            )));
        }
    }
    Ok(exact)
}

/// `p(z, 1)` for complex `z`: `diag(1, ¼)|z|² + [[0, a/2], [a/2, 0]] Re z + diag(b, ¼)`.
pub fn p_complex(p: SlicePoint, z: C64) -> HermitianMatrix {
    let n = z.norm_sqr();
    HermitianMatrix::from_real_rows(&[
        vec![n + p.b, p.a * z.re / 2.0],
        vec![p.a * z.re / 2.0, (n + 1.0) / 4.0],
    ])
    .expect("real symmetric")
}

/// Samples complex `z` and checks `λ_min(p(z, 1)) ≥ λ_min(p̂(Re z))`.
/// Returns the number of violations.
pub fn complex_reduction_check(p: SlicePoint, samples: usize, seed: u64) -> usize {
    let mut sampler = Sampler::new(seed);
    let radius = 2.0 * (1.0 + p.a.abs() + p.b.max(0.0).sqrt());
    (0..samples)
        .filter(|_| {
            let z = C64::new(
                sampler.rng().gen_range(-radius..radius),
                sampler.rng().gen_range(-radius..radius),
            );
            let full = p_complex(p, z).min_eigenvalue();
            let real = lambda_min_2x2(p_hat(p, z.re));
            full < real - 1e-12 * (1.0 + z.norm_sqr())
        })
        .count()
}
