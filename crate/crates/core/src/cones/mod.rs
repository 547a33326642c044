//! Membership oracles for the cones
//! `Sep ⊆ Dpsd ⊆ Psd, Psd^Γ ⊆ Decomp ⊆ Bpsd` at a fixed level `(d, s)`.
//!
//! Psd, Psd^Γ and Dpsd are decided spectrally. Decomp and Bpsd are
//! heuristic and may answer [`Status::Inconclusive`]; their `In`/`Out`
//! answers always carry a certificate that [`verify_certificate`] rechecks.

mod bpsd;
mod decomp;
mod exact;
mod polish;
mod verdict;
mod verify;

pub use bpsd::{decomp_equals_bpsd, member_bpsd, see_saw, ProductMinimum};
pub use decomp::{dual_witness_search, member_decomp, round_to_unit_dpsd};
pub use exact::{member_dpsd, member_ppt, member_psd, member_sep_small, SEP_MAX_PRODUCT_DIM};
pub use verdict::{Certificate, ConeId, Status, ToleranceConfig, Verdict};
pub use verify::{verify_certificate, verify_certificate_with};

use crate::error::Result;
use crate::hermitian::BipartiteOperator;

/// Dispatches to the oracle for `cone`. Only Sep can fail, outside the
/// dimensions it supports.
pub fn member(cone: ConeId, x: &BipartiteOperator, cfg: &ToleranceConfig) -> Result<Verdict> {
    Ok(match cone {
        ConeId::Sep => return member_sep_small(x, cfg),
        ConeId::Dpsd => member_dpsd(x, cfg),
        ConeId::Psd => member_psd(x, cfg),
        ConeId::PsdGamma => member_ppt(x, cfg),
        ConeId::Decomp => member_decomp(x, cfg),
        ConeId::Bpsd => member_bpsd(x, cfg),
    })
}
