//! The two-parameter family `M(a, b) ∈ Her_2 ⊗ Her_2`, its decomposable
//! region `S₁ ∪ S₂`, an independent brute-force positivity oracle, grid
//! scans, and the geometric checks on the region.

mod brute;
mod family;
mod region;
mod reports;
mod scan;

pub use brute::{
    brute_force_region, complex_reduction_check, exact_quartic, p_complex, q_min_nonneg, q_poly,
    MIN_GRID_POINTS,
};
pub use family::{
    discriminant, discriminant_coefficients, matrix_m, poly_eq, poly_mul, psd_slice, BoundaryCurve,
    SlicePoint,
};
pub use region::{
    boundary_margin, classify, exact_region, in_region, in_s1, in_s2, RegionLabel, BOUNDARY_BAND,
};
pub use reports::{
    basic_closed_hypothesis_check, convexity_probe, lift_equivalence_check, nonexposed_check,
    region_raster, Check, Report, NONEXPOSED_DIRECTIONS,
};
pub use scan::{scan, scan_point, write_csv, ScanGrid, ScanRow, BRUTE_GRID_N, CSV_HEADER};
