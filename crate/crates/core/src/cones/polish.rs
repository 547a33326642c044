//! Factored refinement of an approximate decomposition.
//!
//! Near the boundary of Decomp, alternating projections converge slowly and
//! stall well above `feas_tol`. Writing `X₁ = L₁L₁*` and `X₂^Γ = L₂L₂*`
//! makes both cone constraints automatic, and the remaining equation
//! `L₁L₁* + Γ(L₂L₂*) = X` is solved by Levenberg–Marquardt started from
//! square-root factors of the last iterate. Each damped Gauss–Newton step
//! is computed matrix-free by CGLS.

use crate::hermitian::{BipartiteOperator, CMatrix, HermitianMatrix};

const LM_ITERS: usize = 2000;
const CGLS_ITERS: usize = 200;

#[derive(Clone)]
struct Factors {
    l1: CMatrix,
    l2: CMatrix,
}

impl Factors {
    fn axpy(&self, t: f64, other: &Factors) -> Factors {
        Factors {
            l1: &self.l1 + &other.l1.scale(t),
            l2: &self.l2 + &other.l2.scale(t),
        }
    }

    fn norm_sq(&self) -> f64 {
        self.l1.frobenius_norm().powi(2) + self.l2.frobenius_norm().powi(2)
    }

    fn zeros_like(&self) -> Factors {
        Factors {
            l1: CMatrix::zeros(self.l1.rows(), self.l1.cols()),
            l2: CMatrix::zeros(self.l2.rows(), self.l2.cols()),
        }
    }
}

struct Problem<'a> {
    x: &'a BipartiteOperator,
}

impl Problem<'_> {
    fn bip(&self, m: CMatrix) -> BipartiteOperator {
        BipartiteOperator::from_matrix_unchecked(
            self.x.d(),
            self.x.s(),
            HermitianMatrix::symmetrized(m),
        )
    }

    fn parts(&self, f: &Factors) -> (BipartiteOperator, BipartiteOperator) {
        let x1 = self.bip(&f.l1 * &f.l1.adjoint());
        let x2 = self.bip(&f.l2 * &f.l2.adjoint()).partial_transpose();
        (x1, x2)
    }

    fn residual(&self, f: &Factors) -> BipartiteOperator {
        let (x1, x2) = self.parts(f);
        x1.add(&x2).sub(self.x)
    }

    /// Derivative of the residual at `f` in direction `dir`.
    fn jacobian(&self, f: &Factors, dir: &Factors) -> BipartiteOperator {
        let t1 = &dir.l1 * &f.l1.adjoint();
        let t2 = &dir.l2 * &f.l2.adjoint();
        let a = self.bip(&t1 + &t1.adjoint());
        let b = self.bip(&t2 + &t2.adjoint()).partial_transpose();
        a.add(&b)
    }

    fn jacobian_adjoint(&self, f: &Factors, r: &BipartiteOperator) -> Factors {
        let rg = r.partial_transpose();
        Factors {
            l1: (r.matrix().as_cmatrix() * &f.l1).scale(2.0),
            l2: (rg.matrix().as_cmatrix() * &f.l2).scale(2.0),
        }
    }

    /// `argmin ‖J δ + r‖² + μ‖δ‖²`.
    fn damped_step(&self, f: &Factors, r: &BipartiteOperator, mu: f64) -> Factors {
        let mut delta = f.zeros_like();
        let mut res = r.scale(-1.0);
        let mut s = self.jacobian_adjoint(f, &res);
        let mut p = s.clone();
        let mut gamma = s.norm_sq();
        let stop = gamma * 1e-24;
        for _ in 0..CGLS_ITERS {
            if gamma <= stop || gamma == 0.0 {
                break;
            }
            let q = self.jacobian(f, &p);
            let denom = q.frobenius_norm().powi(2) + mu * p.norm_sq();
            if denom == 0.0 {
                break;
            }
            let alpha = gamma / denom;
            delta = delta.axpy(alpha, &p);
            res = res.sub(&q.scale(alpha));
            s = self.jacobian_adjoint(f, &res).axpy(-mu, &delta);
            let next = s.norm_sq();
            p = s.axpy(next / gamma, &p);
            gamma = next;
        }
        delta
    }
}

fn sqrt_factor(h: &HermitianMatrix) -> CMatrix {
    let spec = h.spectrum();
    let n = h.dim();
    CMatrix::from_fn(n, n, |i, k| {
        spec.eigenvectors[(i, k)] * spec.eigenvalues[k].max(0.0).sqrt()
    })
}

/// Tries to turn the psd iterate `x1` into a decomposition of `x` with
/// `‖X − X₁ − X₂‖_F ≤ feas_tol·max(1, ‖X‖_F)`. Both returned parts are Gram
/// matrices, so they lie in their cones by construction.
pub(crate) fn polish(
    x: &BipartiteOperator,
    x1: &BipartiteOperator,
    feas_tol: f64,
) -> Option<(BipartiteOperator, BipartiteOperator)> {
    let problem = Problem { x };
    let x2_gamma = x.sub(x1).partial_transpose().matrix().project_psd();
    let mut f = Factors {
        l1: sqrt_factor(x1.matrix()),
        l2: sqrt_factor(&x2_gamma),
    };
    let target = feas_tol * x.tol_scale();
    let mut r = problem.residual(&f);
    let mut cost = r.frobenius_norm();
    let mut mu = 1e-3 * x.tol_scale();
    for _ in 0..LM_ITERS {
        if cost <= 0.5 * target {
            break;
        }
        let step = problem.damped_step(&f, &r, mu);
        let trial = f.axpy(1.0, &step);
        let trial_r = problem.residual(&trial);
        let trial_cost = trial_r.frobenius_norm();
        if trial_cost < cost {
            f = trial;
            r = trial_r;
            cost = trial_cost;
            mu = (mu / 3.0).max(1e-15);
        } else {
            mu *= 4.0;
            if mu > 1e8 {
                break;
            }
        }
    }
    if cost > target {
        return None;
    }
    Some(problem.parts(&f))
}
