use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::brute::brute_force_region;
use super::family::{matrix_m, psd_slice, SlicePoint};
use super::region::{classify, RegionLabel, BOUNDARY_BAND};
use crate::cones::{member_decomp, member_ppt, member_psd, Status, ToleranceConfig};
use crate::error::{Error, Result};

/// Grid points used by the brute-force oracle during scans.
pub const BRUTE_GRID_N: usize = 1001;

pub const CSV_HEADER: [&str; 9] = [
    "a",
    "b",
    "region",
    "psd_slice",
    "psd",
    "ppt",
    "decomp",
    "decomp_residual",
    "brute_force",
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub a_min: f64,
    pub a_max: f64,
    pub b_min: f64,
    pub b_max: f64,
    pub na: usize,
    pub nb: usize,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self {
            a_min: -5.0,
            a_max: 5.0,
            b_min: -1.0,
            b_max: 11.0,
            na: 201,
            nb: 241,
        }
    }
}

fn lerp(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    // Weighted form so that grid points with exact decimal values come out exact.
    (lo * (n - 1 - i) as f64 + hi * i as f64) / (n - 1) as f64
}

impl ScanGrid {
    pub fn validate(&self) -> Result<()> {
        let finite = [self.a_min, self.a_max, self.b_min, self.b_max]
            .iter()
            .all(|x| x.is_finite());
        if !finite
            || self.na < 2
            || self.nb < 2
            || self.a_min >= self.a_max
            || self.b_min >= self.b_max
        {
            return Err(Error::InvalidInput(format!("invalid scan grid {self:?}")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.na * self.nb
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn a(&self, i: usize) -> f64 {
        lerp(self.a_min, self.a_max, i, self.na)
    }

    pub fn b(&self, j: usize) -> f64 {
        lerp(self.b_min, self.b_max, j, self.nb)
    }

    /// Point number `k` in `a`-major order.
    pub fn point(&self, k: usize) -> SlicePoint {
        SlicePoint::new(self.a(k / self.nb), self.b(k % self.nb))
    }

    pub fn points(&self) -> impl Iterator<Item = SlicePoint> + '_ {
        (0..self.len()).map(|k| self.point(k))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub a: f64,
    pub b: f64,
    pub region: RegionLabel,
    pub psd_slice: bool,
    pub psd: Status,
    pub ppt: Status,
    pub decomp: Status,
    pub decomp_residual: f64,
    pub brute_force: bool,
}

pub fn scan_point(p: SlicePoint, cfg: &ToleranceConfig) -> Result<ScanRow> {
    let m = matrix_m(p);
    let decomp = member_decomp(&m, cfg);
    Ok(ScanRow {
        a: p.a,
        b: p.b,
        region: classify(p, BOUNDARY_BAND),
        psd_slice: psd_slice(p),
        psd: member_psd(&m, cfg).status,
        ppt: member_ppt(&m, cfg).status,
        decomp: decomp.status,
        decomp_residual: decomp.residual,
        brute_force: brute_force_region(p, BRUTE_GRID_N)?,
    })
}

/// All grid points in `a`-major order. Points are processed in parallel on
/// the current rayon pool; the output order does not depend on it.
pub fn scan(grid: &ScanGrid, cfg: &ToleranceConfig) -> Result<Vec<ScanRow>> {
    grid.validate()?;
    (0..grid.len())
        .into_par_iter()
        .map(|k| scan_point(grid.point(k), cfg))
        .collect()
}

pub fn write_csv<W: Write>(rows: &[ScanRow], out: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidInput(format!("csv output failed: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in rows {
        w.write_record([
            r.a.to_string(),
            r.b.to_string(),
            r.region.code().to_string(),
            r.psd_slice.to_string(),
            r.psd.name().to_string(),
            r.ppt.name().to_string(),
            r.decomp.name().to_string(),
            format!("{:e}", r.decomp_residual),
            r.brute_force.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::InvalidInput(format!("csv output failed: {e}")))?;
    Ok(())
}
