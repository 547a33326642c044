//! Free duality and generator machinery: tensor pairings, free
//! spectrahedra, Kraus recovery from Choi matrices, minimal and maximal
//! systems over polyhedral cones, and the lift of `(2, 2)` operators.

mod kraus;
mod lift;
mod pairing;
mod polyhedral;
mod spectrahedron;

pub use kraus::kraus_from_psd;
pub use lift::{embedding_isometry, lift};
pub use pairing::{pairing_bipartite, pairing_tuple, FreeElement};
pub use polyhedral::{
    combine, member_cmax, member_cmin, random_cmax_element, random_square_cmax_element,
    search_minmax_gap, search_square_minmax_gap, verify_cmin, CminCertificate, CminVerdict,
    MinMaxWitness, PolyhedralCone,
};
pub use spectrahedron::{
    member_free_spectrahedron, FreeSpectrahedron, GRAM_CONDITION_THRESHOLD, ORDER_UNIT_TOL,
};

use crate::cones::{member_bpsd, ToleranceConfig, Verdict};
use crate::error::Result;
use crate::hermitian::tuple_to_bipartite;

/// `C^max` for the base cone `Psd_d`, which is the block positive cone;
/// `a` holds coordinates in the orthonormal basis of `Her_d`.
pub fn member_cmax_psd(d: usize, a: &FreeElement, cfg: &ToleranceConfig) -> Result<Verdict> {
    Ok(member_bpsd(&tuple_to_bipartite(d, a)?, cfg))
}
