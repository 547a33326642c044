//! Block positivity via see-saw minimization of `(x ⊗ y)* X (x ⊗ y)`.

use rayon::prelude::*;

use super::decomp::member_decomp;
use super::verdict::{Certificate, ConeId, Status, ToleranceConfig, Verdict};
use crate::hermitian::{BipartiteOperator, Sampler, C64};

const SEE_SAW_ROUNDS: usize = 200;
const SEE_SAW_STALL: f64 = 1e-14;

/// Dimensions in which Decomp and Bpsd coincide.
pub fn decomp_equals_bpsd(d: usize, s: usize) -> bool {
    matches!((d, s), (2, 2) | (2, 3) | (3, 2))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProductMinimum {
    pub x: Vec<C64>,
    pub y: Vec<C64>,
    pub value: f64,
}

fn start_seed(seed: u64, start: usize) -> u64 {
    seed ^ (start as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn see_saw_from(x: &BipartiteOperator, mut u: Vec<C64>) -> ProductMinimum {
    let mut best = f64::INFINITY;
    let mut v = Vec::new();
    for _ in 0..SEE_SAW_ROUNDS {
        v = x.contract_first(&u).spectrum().eigenvector(0);
        let spec = x.contract_second(&v).spectrum();
        u = spec.eigenvector(0);
        let value = spec.min();
        let stalled = best - value < SEE_SAW_STALL * x.tol_scale();
        best = best.min(value);
        if stalled {
            break;
        }
    }
    let value = x.product_value(&u, &v);
    ProductMinimum { x: u, y: v, value }
}

/// Best product-vector value over `cfg.multistarts` seeded starts. Starts
/// are independent and run in parallel; the result does not depend on the
/// thread count.
pub fn see_saw(x: &BipartiteOperator, cfg: &ToleranceConfig) -> ProductMinimum {
    (0..cfg.multistarts)
        .into_par_iter()
        .map(|k| {
            let mut sampler = Sampler::new(start_seed(cfg.seed, k));
            see_saw_from(x, sampler.unit_vector(x.d()))
        })
        .min_by(|a, b| a.value.total_cmp(&b.value))
        .expect("multistarts is positive")
}

pub fn member_bpsd(x: &BipartiteOperator, cfg: &ToleranceConfig) -> Verdict {
    let best = see_saw(x, cfg);
    if best.value < -cfg.psd_tol * x.tol_scale() {
        return Verdict {
            cone: ConeId::Bpsd,
            status: Status::Out,
            residual: best.value,
            certificate: Certificate::ProductVectorWitness {
                value: best.value,
                x: best.x,
                y: best.y,
            },
        };
    }
    let decomp = member_decomp(x, cfg);
    let status = match decomp.status {
        Status::In => Status::In,
        Status::Out if decomp_equals_bpsd(x.d(), x.s()) => Status::Out,
        _ => Status::Inconclusive,
    };
    let certificate = match status {
        Status::Inconclusive => Certificate::None,
        _ => decomp.certificate,
    };
    Verdict {
        cone: ConeId::Bpsd,
        status,
        residual: best.value,
        certificate,
    }
}
