//! Independent rechecking of verdict certificates.
//!
//! Nothing here calls into the oracles: each certificate is checked with
//! fresh eigenvalue computations and pairings.

use super::bpsd::decomp_equals_bpsd;
use super::exact::SEP_MAX_PRODUCT_DIM;
use super::verdict::{Certificate, ConeId, Status, ToleranceConfig, Verdict};
use crate::hermitian::{kron_vec, BipartiteOperator, C64};

const WITNESS_TRACE_TOL: f64 = 1e-9;

pub fn verify_certificate(x: &BipartiteOperator, verdict: &Verdict) -> bool {
    verify_certificate_with(x, verdict, &ToleranceConfig::default())
}

pub fn verify_certificate_with(
    x: &BipartiteOperator,
    verdict: &Verdict,
    cfg: &ToleranceConfig,
) -> bool {
    use ConeId::*;
    let cone = verdict.cone;
    match (&verdict.status, &verdict.certificate) {
        (Status::In, Certificate::Spectral { .. }) => match cone {
            Psd => x.matrix().is_psd(cfg.psd_tol),
            PsdGamma => x.partial_transpose().matrix().is_psd(cfg.psd_tol),
            Dpsd => doubly_positive(x, cfg.psd_tol),
            Sep => x.d() * x.s() <= SEP_MAX_PRODUCT_DIM && doubly_positive(x, cfg.psd_tol),
            Decomp | Bpsd => false,
        },
        (
            Status::Out,
            Certificate::NegEigenvector {
                vector,
                partial_transpose,
                ..
            },
        ) => {
            let allowed = match cone {
                Psd => !partial_transpose,
                PsdGamma => *partial_transpose,
                Dpsd | Sep => true,
                Decomp | Bpsd => false,
            };
            allowed
                && vector.len() == x.d() * x.s()
                && negative_direction(x, vector, *partial_transpose, cfg)
        }
        (Status::Out, Certificate::ProductVectorWitness { x: u, y, .. }) => {
            let shape_ok = u.len() == x.d() && y.len() == x.s();
            matches!(cone, Bpsd | Decomp | Dpsd | Sep | Psd | PsdGamma)
                && shape_ok
                && negative_direction(x, &kron_vec(u, y), false, cfg)
        }
        (Status::In, Certificate::Decomposition { psd_part, ppt_part }) => {
            matches!(cone, Decomp | Bpsd) && valid_decomposition(x, psd_part, ppt_part, cfg)
        }
        (Status::Out, Certificate::DualWitness { witness, .. }) => {
            let allowed = cone == Decomp || (cone == Bpsd && decomp_equals_bpsd(x.d(), x.s()));
            allowed && valid_dual_witness(x, witness, cfg)
        }
        _ => false,
    }
}

fn doubly_positive(x: &BipartiteOperator, tol: f64) -> bool {
    x.matrix().is_psd(tol) && x.partial_transpose().matrix().is_psd(tol)
}

fn negative_direction(
    x: &BipartiteOperator,
    v: &[C64],
    transposed: bool,
    cfg: &ToleranceConfig,
) -> bool {
    let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
    if !(norm_sq.is_finite() && norm_sq > 0.0) {
        return false;
    }
    let y = if transposed {
        x.partial_transpose()
    } else {
        x.clone()
    };
    let value = y.matrix().quadratic_form(v) / norm_sq;
    value < -cfg.psd_tol * x.tol_scale()
}

fn valid_decomposition(
    x: &BipartiteOperator,
    psd_part: &BipartiteOperator,
    ppt_part: &BipartiteOperator,
    cfg: &ToleranceConfig,
) -> bool {
    let dims = |p: &BipartiteOperator| p.d() == x.d() && p.s() == x.s();
    if !dims(psd_part) || !dims(ppt_part) {
        return false;
    }
    let residual = x.sub(psd_part).sub(ppt_part).frobenius_norm();
    residual <= cfg.feas_tol * x.tol_scale()
        && psd_part.matrix().is_psd(cfg.psd_tol)
        && ppt_part.partial_transpose().matrix().is_psd(cfg.psd_tol)
}

fn valid_dual_witness(x: &BipartiteOperator, w: &BipartiteOperator, cfg: &ToleranceConfig) -> bool {
    w.d() == x.d()
        && w.s() == x.s()
        && (w.trace() - 1.0).abs() <= WITNESS_TRACE_TOL
        && doubly_positive(w, cfg.psd_tol)
        && w.inner(x) < -cfg.feas_tol
}
