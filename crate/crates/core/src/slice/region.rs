use std::fmt;

use serde::{Deserialize, Serialize};

use super::family::{discriminant, BoundaryCurve, SlicePoint};

/// Default band on raw polynomial values for [`classify`].
pub const BOUNDARY_BAND: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionLabel {
    InS1,
    InS2Only,
    Outside,
    BoundaryBand,
}

impl RegionLabel {
    pub fn is_in(self) -> bool {
        matches!(self, RegionLabel::InS1 | RegionLabel::InS2Only)
    }

    /// CSV spelling: `s1`, `s2`, `out`, `band`.
    pub fn code(self) -> &'static str {
        match self {
            RegionLabel::InS1 => "s1",
            RegionLabel::InS2Only => "s2",
            RegionLabel::Outside => "out",
            RegionLabel::BoundaryBand => "band",
        }
    }
}

impl fmt::Display for RegionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// `D ≤ 0`.
pub fn in_s1(p: SlicePoint) -> bool {
    discriminant(p) <= 0.0
}

/// `b ≥ 0` and `a² − b − 1 ≤ 0`.
pub fn in_s2(p: SlicePoint) -> bool {
    p.b >= 0.0 && p.a * p.a - p.b - 1.0 <= 0.0
}

pub fn in_region(p: SlicePoint) -> bool {
    in_s1(p) || in_s2(p)
}

/// Exact label; S₁ takes precedence, so a point with `D = 0` is `InS1`.
pub fn exact_region(p: SlicePoint) -> RegionLabel {
    if in_s1(p) {
        RegionLabel::InS1
    } else if in_s2(p) {
        RegionLabel::InS2Only
    } else {
        RegionLabel::Outside
    }
}

/// [`exact_region`], except that points where `|D|`, `|b|` or
/// `|a² − b − 1|` is below `band` are labeled `BoundaryBand`.
pub fn classify(p: SlicePoint, band: f64) -> RegionLabel {
    let near =
        discriminant(p).abs() < band || p.b.abs() < band || (p.a * p.a - p.b - 1.0).abs() < band;
    if near {
        RegionLabel::BoundaryBand
    } else {
        exact_region(p)
    }
}

/// First-order distance to the nearest boundary curve,
/// `min_i |p_i| / ‖∇p_i‖` over `p₁, p₂, p₃`.
pub fn boundary_margin(p: SlicePoint) -> f64 {
    BoundaryCurve::ALL
        .iter()
        .map(|c| {
            let (ga, gb) = c.gradient(p);
            c.eval(p).abs() / ga.hypot(gb)
        })
        .fold(f64::INFINITY, f64::min)
}
