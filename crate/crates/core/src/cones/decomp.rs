//! Decomposability `X = X₁ + X₂`, `X₁ ≽ 0`, `X₂^Γ ≽ 0`.
//!
//! Primal side: Dykstra's alternating projections between the psd cone `A`
//! and the translate `B = {X − Y : Y^Γ ≽ 0}`. If `A ∩ B` is empty the
//! difference of the two iterates tends to the gap vector `v`, which lies in
//! Dpsd and pairs negatively with `X`; after rounding into the unit-trace
//! Dpsd slice it is a dual witness. A projected-gradient search over that
//! slice is the fallback when the primal run ends undecided, after a
//! product-vector witness from the see-saw search.

use super::bpsd::see_saw;
use super::exact::{member_ppt, member_psd};
use super::polish::polish;
use super::verdict::{Certificate, ConeId, Status, ToleranceConfig, Verdict};
use crate::hermitian::{BipartiteOperator, HermitianMatrix};

const CHECK_EVERY: usize = 5;
const INNER_PROJECTION_ITERS: usize = 300;

/// Frobenius projection onto `{X − Y : Y^Γ ≽ 0}`.
fn project_translate(x: &BipartiteOperator, z: &BipartiteOperator) -> BipartiteOperator {
    let y = x.sub(z).partial_transpose();
    let y_proj = BipartiteOperator::from_matrix_unchecked(y.d(), y.s(), y.matrix().project_psd());
    x.sub(&y_proj.partial_transpose())
}

fn project_psd(z: &BipartiteOperator) -> BipartiteOperator {
    BipartiteOperator::from_matrix_unchecked(z.d(), z.s(), z.matrix().project_psd())
}

fn project_ppt(z: &BipartiteOperator) -> BipartiteOperator {
    project_psd(&z.partial_transpose()).partial_transpose()
}

/// Shift by a multiple of the identity until psd and Γ-psd, then normalize
/// the trace. `None` for the zero operator.
pub fn round_to_unit_dpsd(v: &BipartiteOperator) -> Option<BipartiteOperator> {
    let lo = v.matrix().min_eigenvalue();
    let lo_gamma = v.partial_transpose().matrix().min_eigenvalue();
    let shift = (-lo).max(-lo_gamma).max(0.0);
    let w = v.shift(shift);
    let tr = w.trace();
    if !(tr.is_finite() && tr > 0.0) {
        return None;
    }
    Some(w.scale(1.0 / tr))
}

fn primal_candidate(
    x: &BipartiteOperator,
    a: &BipartiteOperator,
    cfg: &ToleranceConfig,
) -> Option<(BipartiteOperator, BipartiteOperator, f64)> {
    let x2 = project_ppt(&x.sub(a));
    let residual = x.sub(a).sub(&x2).frobenius_norm();
    if residual > cfg.feas_tol * x.tol_scale() {
        return None;
    }
    let parts_ok =
        a.matrix().is_psd(cfg.psd_tol) && x2.partial_transpose().matrix().is_psd(cfg.psd_tol);
    parts_ok.then(|| (a.clone(), x2, residual))
}

fn dual_candidate(
    x: &BipartiteOperator,
    v: &BipartiteOperator,
    cfg: &ToleranceConfig,
) -> Option<(BipartiteOperator, f64)> {
    if v.frobenius_norm() <= f64::EPSILON * x.tol_scale() {
        return None;
    }
    let w = round_to_unit_dpsd(v)?;
    let pairing = w.inner(x);
    (pairing < -cfg.feas_tol).then_some((w, pairing))
}

enum PrimalOutcome {
    Feasible {
        psd_part: BipartiteOperator,
        ppt_part: BipartiteOperator,
        residual: f64,
    },
    Separated {
        witness: BipartiteOperator,
        pairing: f64,
    },
    Undecided {
        residual: f64,
        last: BipartiteOperator,
        gap: BipartiteOperator,
    },
}

fn dykstra(x: &BipartiteOperator, cfg: &ToleranceConfig) -> PrimalOutcome {
    let (d, s) = (x.d(), x.s());
    let mut y = x.clone();
    let mut p = BipartiteOperator::zeros(d, s);
    let mut q = BipartiteOperator::zeros(d, s);
    let mut best_residual = f64::INFINITY;
    let mut gap = BipartiteOperator::zeros(d, s);
    let mut last = BipartiteOperator::zeros(d, s);

    for it in 0..cfg.max_iters {
        let a = project_psd(&y.add(&p));
        p = y.add(&p).sub(&a);
        let b = project_translate(x, &a.add(&q));
        q = a.add(&q).sub(&b);
        y = b;

        if it % CHECK_EVERY == 0 || it + 1 == cfg.max_iters {
            if let Some((psd_part, ppt_part, residual)) = primal_candidate(x, &a, cfg) {
                return PrimalOutcome::Feasible {
                    psd_part,
                    ppt_part,
                    residual,
                };
            }
            let residual = x.sub(&a).sub(&project_ppt(&x.sub(&a))).frobenius_norm();
            best_residual = best_residual.min(residual);
            gap = a.sub(&y);
            last = a;
            if let Some((witness, pairing)) = dual_candidate(x, &gap, cfg) {
                return PrimalOutcome::Separated { witness, pairing };
            }
        }
    }
    PrimalOutcome::Undecided {
        residual: best_residual,
        last,
        gap,
    }
}

/// Approximate Frobenius projection onto `{W ≽ 0, W^Γ ≽ 0, tr W = 1}` by
/// Dykstra over the three sets.
fn project_unit_dpsd(z: &BipartiteOperator) -> BipartiteOperator {
    let n = (z.d() * z.s()) as f64;
    let (d, s) = (z.d(), z.s());
    let mut w = z.clone();
    let mut c1 = BipartiteOperator::zeros(d, s);
    let mut c2 = BipartiteOperator::zeros(d, s);
    for _ in 0..INNER_PROJECTION_ITERS {
        let t = w.add(&c1);
        let w1 = project_psd(&t);
        c1 = t.sub(&w1);
        let t = w1.add(&c2);
        let w2 = project_ppt(&t);
        c2 = t.sub(&w2);
        // Affine set: no correction term needed.
        let next = w2.shift((1.0 - w2.trace()) / n);
        let moved = next.sub(&w).frobenius_norm();
        w = next;
        if moved < 1e-13 {
            break;
        }
    }
    w
}

/// Projected-gradient minimization of `⟨W, X⟩` over the unit-trace Dpsd
/// slice, step `1/L` with `L = ‖X‖_F`. Returns the first rounded iterate
/// that certifies `⟨W, X⟩ < −feas_tol`.
pub fn dual_witness_search(
    x: &BipartiteOperator,
    start: Option<&BipartiteOperator>,
    cfg: &ToleranceConfig,
) -> Option<(BipartiteOperator, f64)> {
    let (d, s) = (x.d(), x.s());
    let lipschitz = x.frobenius_norm();
    if lipschitz == 0.0 {
        return None;
    }
    let mut w = start
        .and_then(round_to_unit_dpsd)
        .unwrap_or_else(|| BipartiteOperator::identity(d, s).scale(1.0 / (d * s) as f64));
    for _ in 0..cfg.witness_iters {
        if let Some(found) = dual_candidate(x, &w, cfg) {
            return Some(found);
        }
        let next = project_unit_dpsd(&w.sub(&x.scale(1.0 / lipschitz)));
        if next.sub(&w).frobenius_norm() < 1e-14 {
            break;
        }
        w = next;
    }
    dual_candidate(x, &w, cfg)
}

pub fn member_decomp(x: &BipartiteOperator, cfg: &ToleranceConfig) -> Verdict {
    let (d, s) = (x.d(), x.s());
    if member_psd(x, cfg).is_in() {
        return Verdict {
            cone: ConeId::Decomp,
            status: Status::In,
            residual: 0.0,
            certificate: Certificate::Decomposition {
                psd_part: x.clone(),
                ppt_part: BipartiteOperator::zeros(d, s),
            },
        };
    }
    if member_ppt(x, cfg).is_in() {
        return Verdict {
            cone: ConeId::Decomp,
            status: Status::In,
            residual: 0.0,
            certificate: Certificate::Decomposition {
                psd_part: BipartiteOperator::zeros(d, s),
                ppt_part: x.clone(),
            },
        };
    }
    let v = solve(x, cfg);
    if v.status != Status::Inconclusive {
        return v;
    }
    // The problem is symmetric under Γ but the iteration is not, so an
    // undecided run is retried on X^Γ and its certificate mapped back.
    let g = solve(&x.partial_transpose(), cfg);
    let certificate = match g.certificate {
        Certificate::Decomposition { psd_part, ppt_part } => Certificate::Decomposition {
            psd_part: ppt_part.partial_transpose(),
            ppt_part: psd_part.partial_transpose(),
        },
        Certificate::DualWitness { witness, pairing } => Certificate::DualWitness {
            witness: witness.partial_transpose(),
            pairing,
        },
        _ => return v,
    };
    Verdict { certificate, ..g }
}

fn solve(x: &BipartiteOperator, cfg: &ToleranceConfig) -> Verdict {
    match dykstra(x, cfg) {
        PrimalOutcome::Feasible {
            psd_part,
            ppt_part,
            residual,
        } => Verdict {
            cone: ConeId::Decomp,
            status: Status::In,
            residual,
            certificate: Certificate::Decomposition { psd_part, ppt_part },
        },
        PrimalOutcome::Separated { witness, pairing } => out_verdict(witness, pairing),
        PrimalOutcome::Undecided {
            residual,
            last,
            gap,
        } => {
            if let Some((psd_part, ppt_part)) = polish(x, &last, cfg.feas_tol) {
                let residual = x.sub(&psd_part).sub(&ppt_part).frobenius_norm();
                return Verdict {
                    cone: ConeId::Decomp,
                    status: Status::In,
                    residual,
                    certificate: Certificate::Decomposition { psd_part, ppt_part },
                };
            }
            if let Some((witness, pairing)) = product_witness(x, cfg) {
                return out_verdict(witness, pairing);
            }
            match dual_witness_search(x, Some(&gap), cfg) {
                Some((witness, pairing)) => out_verdict(witness, pairing),
                None => Verdict {
                    cone: ConeId::Decomp,
                    status: Status::Inconclusive,
                    residual,
                    certificate: Certificate::None,
                },
            }
        }
    }
}

/// A product vector with `(x ⊗ y)* X (x ⊗ y) < −feas_tol` gives the
/// separable, hence Dpsd, witness `xx* ⊗ yy*` of unit trace.
fn product_witness(
    x: &BipartiteOperator,
    cfg: &ToleranceConfig,
) -> Option<(BipartiteOperator, f64)> {
    let best = see_saw(x, cfg);
    if best.value >= -cfg.feas_tol {
        return None;
    }
    let w = BipartiteOperator::product(
        &HermitianMatrix::outer(&best.x),
        &HermitianMatrix::outer(&best.y),
    );
    let pairing = w.inner(x);
    (pairing < -cfg.feas_tol).then_some((w, pairing))
}

fn out_verdict(witness: BipartiteOperator, pairing: f64) -> Verdict {
    Verdict {
        cone: ConeId::Decomp,
        status: Status::Out,
        residual: pairing,
        certificate: Certificate::DualWitness { witness, pairing },
    }
}
