//! Checks of the geometric claims about the decomposable slice: its face
//! at `b = 0` is not exposed, and the slice is not basic closed.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::family::{
    discriminant, discriminant_coefficients, matrix_m, poly_eq, poly_mul, BoundaryCurve, SlicePoint,
};
use super::region::{exact_region, in_region, in_s2};
use super::scan::ScanGrid;
use crate::cones::{member_decomp, Status, ToleranceConfig};
use crate::error::Result;
use crate::free::lift;
use crate::hermitian::Sampler;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub name: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    fn new(name: &str, checks: Vec<Check>) -> Self {
        Self {
            name: name.to_string(),
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }
}

fn check(name: &str, passed: bool, detail: String) -> Check {
    Check {
        name: name.to_string(),
        passed,
        detail,
    }
}

/// Directions sampled by the supporting-functional test.
pub const NONEXPOSED_DIRECTIONS: usize = 360;
const CURVE_SPACING: f64 = 1e-4;
const ATTAIN_TOL: f64 = 1e-6;

/// In-region points of the default window: grid points plus dense samples
/// of the curves `p₁ = 0`, `p₂ = 0` and of the segment `b = 0, |a| ≤ 1`.
pub fn region_raster(grid: &ScanGrid) -> Vec<SlicePoint> {
    let mut pts: Vec<SlicePoint> = grid.points().filter(|&p| in_region(p)).collect();
    let n = ((grid.a_max - grid.a_min) / CURVE_SPACING).round() as usize;
    for k in 0..=n {
        let a = grid.a_min + (grid.a_max - grid.a_min) * k as f64 / n as f64;
        for b in [(1.0 + a) * (1.0 + a), (1.0 - a) * (1.0 - a)] {
            let p = SlicePoint::new(a, b);
            if b <= grid.b_max && in_region(p) {
                pts.push(p);
            }
        }
        if a.abs() <= 1.0 {
            pts.push(SlicePoint::new(a, 0.0));
        }
    }
    pts
}

pub fn nonexposed_check() -> Report {
    let mut checks = Vec::new();

    let g2 = BoundaryCurve::P2.gradient(SlicePoint::new(1.0, 0.0));
    let g1 = BoundaryCurve::P1.gradient(SlicePoint::new(-1.0, 0.0));
    checks.push(check(
        "tangent gradients",
        g2 == (0.0, -1.0) && g1 == (0.0, -1.0),
        format!("grad p2(1,0) = {g2:?}, grad p1(-1,0) = {g1:?}"),
    ));

    let bad: Vec<f64> = (0..=200)
        .map(|i| (-((200 - i) as f64) + i as f64) / 200.0)
        .filter(|&t| {
            let p = SlicePoint::new(t, 0.0);
            !(in_s2(p) && exact_region(p).is_in())
        })
        .collect();
    checks.push(check(
        "segment in S2",
        bad.is_empty(),
        if bad.is_empty() {
            "201 points of {(t,0): |t| <= 1} satisfy b >= 0 and a^2 - b - 1 <= 0".into()
        } else {
            format!("outside at t = {bad:?}")
        },
    ));

    let grid = ScanGrid::default();
    let raster = region_raster(&grid);
    let plus = SlicePoint::new(1.0, 0.0);
    let minus = SlicePoint::new(-1.0, 0.0);
    // Curve samples approach the window edges without landing on them, so
    // an edge is widened to one grid spacing.
    let edge_a = (grid.a_max - grid.a_min) / (grid.na - 1) as f64;
    let edge_b = (grid.b_max - grid.b_min) / (grid.nb - 1) as f64;
    let mut used = 0;
    let mut supporting = 0;
    let mut violations = Vec::new();
    for k in 0..NONEXPOSED_DIRECTIONS {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / NONEXPOSED_DIRECTIONS as f64;
        let (c, s) = (theta.cos(), theta.sin());
        let f = |p: SlicePoint| c * p.a + s * p.b;
        let argmin = raster
            .iter()
            .copied()
            .min_by(|x, y| f(*x).total_cmp(&f(*y)))
            .expect("raster is non-empty");
        let on_far_edge = argmin.a <= grid.a_min + edge_a
            || argmin.a >= grid.a_max - edge_a
            || argmin.b >= grid.b_max - edge_b;
        if on_far_edge {
            continue;
        }
        used += 1;
        let min = f(argmin);
        let at_plus = f(plus) - min <= ATTAIN_TOL;
        let at_minus = f(minus) - min <= ATTAIN_TOL;
        if at_plus || at_minus {
            supporting += 1;
        }
        if at_plus != at_minus {
            violations.push(format!("theta = {:.1} deg", theta.to_degrees()));
        }
    }
    checks.push(check(
        "no functional exposes one endpoint",
        violations.is_empty(),
        format!(
            "{used} of {NONEXPOSED_DIRECTIONS} directions bounded in the window, {supporting} support the segment, violations: {violations:?}"
        ),
    ));
    Report::new("nonexposed", checks)
}

pub fn basic_closed_hypothesis_check() -> Report {
    let mut checks = Vec::new();
    let p = SlicePoint::new(0.5, 2.25);
    let v = BoundaryCurve::P1.eval(p);
    checks.push(check("on p1 = 0", v == 0.0, format!("p1(0.5, 2.25) = {v}")));
    let g = BoundaryCurve::P1.gradient(p);
    checks.push(check(
        "regular point",
        g == (3.0, -1.0),
        format!("grad p1(0.5, 2.25) = {g:?}"),
    ));
    let h = 1e-3;
    let neighbors = [(h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)]
        .map(|(da, db)| SlicePoint::new(p.a + da, p.b + db));
    let outside: Vec<SlicePoint> = neighbors
        .iter()
        .copied()
        .filter(|&q| !exact_region(q).is_in())
        .collect();
    checks.push(check(
        "interior neighbors",
        outside.is_empty(),
        format!("axis neighbors at distance {h:e} outside S: {outside:?}"),
    ));

    let coeff_ok = poly_eq(
        &poly_mul(
            &BoundaryCurve::P1.coefficients(),
            &BoundaryCurve::P2.coefficients(),
        ),
        &discriminant_coefficients(),
    );
    // Dyadic sample points keep every intermediate value exactly representable.
    let mut sampler = Sampler::new(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = sampler.rng().gen_range(-320i32..=320) as f64 / 64.0;
        let b = sampler.rng().gen_range(-64i32..=704) as f64 / 64.0;
        let q = SlicePoint::new(a, b);
        let r = (BoundaryCurve::P1.eval(q) * BoundaryCurve::P2.eval(q) - discriminant(q)).abs();
        worst = worst.max(r);
    }
    checks.push(check(
        "factorization p1 p2 = D",
        coeff_ok && worst <= 1e-12,
        format!("coefficients equal: {coeff_ok}, max residual at 100 points: {worst:e}"),
    ));
    Report::new("basic_closed_hypothesis", checks)
}

/// Compares `member_decomp` on `M(a, b)` and on its lift to `(d, s)`.
pub fn lift_equivalence_check(
    points: &[SlicePoint],
    d: usize,
    s: usize,
    cfg: &ToleranceConfig,
) -> Result<Report> {
    let mut checks = Vec::with_capacity(points.len());
    for &p in points {
        let m = matrix_m(p);
        let small = member_decomp(&m, cfg).status;
        let big = member_decomp(&lift(&m, d, s)?, cfg).status;
        checks.push(check(
            &format!("({}, {})", p.a, p.b),
            small == big && small != Status::Inconclusive,
            format!("(2,2): {small}, ({d},{s}): {big}"),
        ));
    }
    Ok(Report::new("lift_equivalence", checks))
}

/// Midpoints of random pairs of region points stay in the region.
/// Returns the number of failures.
pub fn convexity_probe(pairs: usize, seed: u64) -> usize {
    let grid = ScanGrid::default();
    let mut sampler = Sampler::new(seed);
    let mut draw = || loop {
        let p = SlicePoint::new(
            sampler.uniform(grid.a_min, grid.a_max),
            sampler.uniform(grid.b_min, grid.b_max),
        );
        if in_region(p) {
            return p;
        }
    };
    (0..pairs)
        .filter(|_| {
            let (x, y) = (draw(), draw());
            !in_region(SlicePoint::new((x.a + y.a) / 2.0, (x.b + y.b) / 2.0))
        })
        .count()
}
