//! The end-to-end verification suite. Each criterion runs at its fixed
//! sample size and tolerance and reports one [`Outcome`].

use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cones::{
    member, member_decomp, member_psd, see_saw, verify_certificate_with, Certificate, ConeId,
    Status, ToleranceConfig, Verdict,
};
use crate::error::Result;
use crate::free::{
    kraus_from_psd, member_cmax, member_cmin, pairing_bipartite, search_square_minmax_gap,
    PolyhedralCone,
};
use crate::hermitian::{
    choi_matrix, BipartiteOperator, HermitianMatrix, LinearMapSpec, MatrixTuple, Sampler,
};
use crate::slice::{
    basic_closed_hypothesis_check, boundary_margin, brute_force_region, classify, exact_region,
    in_region, lift_equivalence_check, matrix_m, nonexposed_check, psd_slice, Report, ScanGrid,
    SlicePoint, BOUNDARY_BAND, BRUTE_GRID_N,
};

pub const CRITERIA: usize = 13;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.2} s)",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

fn timed(id: usize, name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Outcome {
    let start = Instant::now();
    let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
    Outcome {
        id,
        name: name.to_string(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

fn report_summary(r: &Report) -> String {
    r.checks
        .iter()
        .map(|c| {
            format!(
                "{} [{}]",
                c.name,
                if c.passed { "ok" } else { c.detail.as_str() }
            )
        })
        .collect::<Vec<_>>()
        .join("; ")
}

/// Uniform points of the default window at margin at least `margin` from
/// every boundary curve.
fn margin_points(sampler: &mut Sampler, margin: f64) -> impl Iterator<Item = SlicePoint> + '_ {
    let g = ScanGrid::default();
    std::iter::repeat_with(move || {
        SlicePoint::new(
            sampler.uniform(g.a_min, g.a_max),
            sampler.uniform(g.b_min, g.b_max),
        )
    })
    .filter(move |&p| boundary_margin(p) >= margin)
}

pub fn region_equivalence() -> Outcome {
    timed(1, "region equivalence", || {
        let grid = ScanGrid::default();
        let mut compared = 0;
        let mut disagreements = Vec::new();
        for p in grid.points() {
            if classify(p, BOUNDARY_BAND) == crate::slice::RegionLabel::BoundaryBand {
                continue;
            }
            compared += 1;
            if exact_region(p).is_in() != brute_force_region(p, BRUTE_GRID_N)? {
                disagreements.push(p);
            }
        }
        Ok((
            disagreements.is_empty(),
            format!(
                "{compared} of {} grid points compared, {} disagreements",
                grid.len(),
                disagreements.len()
            ),
        ))
    })
    .with_limit(10.0)
}

pub fn decomp_vs_region(cfg: &ToleranceConfig) -> Outcome {
    const N: usize = 600;
    timed(2, "decomp oracle vs region", || {
        let mut sampler = Sampler::new(cfg.seed ^ 0x02);
        let points: Vec<SlicePoint> = margin_points(&mut sampler, 0.05).take(N).collect();
        let (mut inside, mut contradictions, mut inconclusive, mut unverified) = (0, 0, 0, 0);
        for &p in &points {
            let expected = exact_region(p).is_in();
            inside += expected as usize;
            let m = matrix_m(p);
            let v = member_decomp(&m, cfg);
            match v.status {
                Status::Inconclusive => inconclusive += 1,
                Status::In if !expected => contradictions += 1,
                Status::Out if expected => contradictions += 1,
                Status::Out => {
                    let witness = matches!(v.certificate, Certificate::DualWitness { .. });
                    if !witness || !verify_certificate_with(&m, &v, cfg) {
                        unverified += 1;
                    }
                }
                Status::In => {}
            }
        }
        let passed = contradictions == 0 && unverified == 0 && inconclusive * 100 <= N;
        Ok((
            passed,
            format!(
                "{N} points ({inside} inside), {contradictions} contradictions, {inconclusive} inconclusive, {unverified} unverified Out witnesses"
            ),
        ))
    })
    .with_limit(120.0)
}

pub fn psd_slice_closed_form(cfg: &ToleranceConfig) -> Outcome {
    timed(3, "psd slice closed form", || {
        let grid = ScanGrid::default();
        let bad = grid
            .points()
            .filter(|&p| psd_slice(p) != member_psd(&matrix_m(p), cfg).is_in())
            .count();
        Ok((
            bad == 0,
            format!("{} grid points, {bad} disagreements", grid.len()),
        ))
    })
}

pub fn gamma_invariance(cfg: &ToleranceConfig) -> Outcome {
    timed(4, "partial transpose invariance", || {
        let mut sampler = Sampler::new(cfg.seed ^ 0x04);
        let bad = (0..1000)
            .filter(|_| {
                let p = SlicePoint::new(sampler.uniform(-5.0, 5.0), sampler.uniform(-1.0, 11.0));
                let m = matrix_m(p);
                m.partial_transpose() != m
            })
            .count();
        Ok((bad == 0, format!("1000 points, {bad} not bit-identical")))
    })
}

pub fn kraus_round_trip(cfg: &ToleranceConfig) -> Outcome {
    timed(5, "Choi/Kraus round trip", || {
        let mut sampler = Sampler::new(cfg.seed ^ 0x05);
        let mut worst = 0.0f64;
        let mut bad = 0;
        for (d, s) in [(2, 2), (2, 3), (3, 3)] {
            for _ in 0..100 {
                let c = sampler.bipartite_psd(d, s);
                let kraus = kraus_from_psd(&c, cfg.psd_tol)?;
                let t = LinearMapSpec::from_kraus(d, s, &kraus)?;
                let rel = choi_matrix(&t).sub(&c).frobenius_norm() / c.tol_scale();
                worst = worst.max(rel);
                bad += (rel > 1e-8) as usize;
            }
        }
        Ok((
            bad == 0,
            format!("300 matrices, {bad} above 1e-8, worst relative error {worst:.2e}"),
        ))
    })
}

fn pairing_psd(b: &BipartiteOperator, a: &BipartiteOperator, tol: f64) -> Result<(bool, f64)> {
    let p = pairing_bipartite(b, a)?;
    let lo = p.min_eigenvalue();
    Ok((p.is_psd(tol), lo))
}

pub fn free_self_duality(cfg: &ToleranceConfig) -> Outcome {
    timed(6, "free self-duality pairing", || {
        let mut sampler = Sampler::new(cfg.seed ^ 0x06);
        let mut bad = 0;
        let mut worst = f64::INFINITY;
        for _ in 0..200 {
            let d = 1 + sampler.index(3);
            let s = 1 + sampler.index(3);
            let t = 1 + sampler.index(3);
            let a = sampler.bipartite_psd(d, s);
            let b = sampler.bipartite_psd(d, t);
            for (bb, aa) in [
                (b.clone(), a.clone()),
                (b.partial_transpose(), a.partial_transpose()),
            ] {
                let (ok, lo) = pairing_psd(&bb, &aa, 1e-9)?;
                bad += !ok as usize;
                worst = worst.min(lo);
            }
        }
        Ok((
            bad == 0,
            format!("200 pairs, plain and transposed; {bad} non-psd, min eigenvalue {worst:.2e}"),
        ))
    })
}

pub fn sep_bpsd_pairing(cfg: &ToleranceConfig) -> Outcome {
    timed(7, "Sep-Bpsd pairing", || {
        let mut sampler = Sampler::new(cfg.seed ^ 0x07);
        let g = ScanGrid::default();
        let mut bad = 0;
        let mut worst = f64::INFINITY;
        for _ in 0..200 {
            let p = loop {
                let q = SlicePoint::new(
                    sampler.uniform(g.a_min, g.a_max),
                    sampler.uniform(g.b_min, g.b_max),
                );
                if in_region(q) {
                    break q;
                }
            };
            let k = 1 + sampler.index(4);
            let a = sampler.separable(2, 2, k);
            let (ok, lo) = pairing_psd(&matrix_m(p), &a, 1e-9)?;
            bad += !ok as usize;
            worst = worst.min(lo);
        }
        Ok((
            bad == 0,
            format!("200 pairs, {bad} non-psd, min eigenvalue {worst:.2e}"),
        ))
    })
}

pub fn nonexposed_face() -> Outcome {
    timed(8, "non-exposed face", || {
        let r = nonexposed_check();
        Ok((r.passed, report_summary(&r)))
    })
}

pub fn not_basic_closed() -> Outcome {
    timed(9, "not basic closed hypothesis", || {
        let r = basic_closed_hypothesis_check();
        Ok((r.passed, report_summary(&r)))
    })
}

pub fn lift_equivalence(cfg: &ToleranceConfig) -> Outcome {
    timed(10, "lift equivalence", || {
        let mut sampler = Sampler::new(cfg.seed ^ 0x0a);
        let (mut inside, mut outside) = (Vec::new(), Vec::new());
        for p in margin_points(&mut sampler, 0.05) {
            let bucket = if exact_region(p).is_in() {
                &mut inside
            } else {
                &mut outside
            };
            if bucket.len() < 25 {
                bucket.push(p);
            }
            if inside.len() == 25 && outside.len() == 25 {
                break;
            }
        }
        inside.extend(outside);
        let r = lift_equivalence_check(&inside, 3, 3, cfg)?;
        let failed: Vec<String> = r
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} {}", c.name, c.detail))
            .collect();
        Ok((
            r.passed,
            format!(
                "50 points (25 in, 25 out) at (3,3), {} mismatches {failed:?}",
                failed.len()
            ),
        ))
    })
}

fn random_level2_tuple(sampler: &mut Sampler) -> MatrixTuple {
    let entries = (0..3)
        .map(|_| {
            let h = sampler.psd(2);
            let shift = sampler.uniform(-0.6, 0.4) * h.trace();
            h.add(&HermitianMatrix::identity(2).scale(shift))
        })
        .collect();
    MatrixTuple::new(entries).expect("equal sizes")
}

pub fn minmax_systems(cfg: &ToleranceConfig) -> Outcome {
    timed(11, "min/max polyhedral systems", || {
        let orthant = PolyhedralCone::orthant(3);
        let mut sampler = Sampler::new(cfg.seed ^ 0x0b);
        let (mut agree, mut cmax_in) = (0, 0);
        for _ in 0..100 {
            let a = random_level2_tuple(&mut sampler);
            let max = member_cmax(&orthant, &a, cfg.psd_tol)?;
            cmax_in += max as usize;
            let min = member_cmin(&orthant, &a, cfg)?.status;
            agree += (min == if max { Status::In } else { Status::Out }) as usize;
        }
        let square = PolyhedralCone::square();
        let gap = search_square_minmax_gap(2, cfg.seed ^ 0x0b, 1000, cfg)?;
        let gap_ok = gap.as_ref().is_some_and(|w| {
            member_cmax(&square, &w.element, cfg.psd_tol).unwrap_or(false)
                && w.verdict.status == Status::Out
                && crate::free::verify_cmin(&square, &w.element, &w.verdict, cfg)
        });
        let gap_detail = match &gap {
            Some(w) => format!(
                "square cone gap element after {} attempts, pairing {:.3e}",
                w.attempts, w.verdict.residual
            ),
            None => "no square cone gap element in 1000 attempts".into(),
        };
        Ok((
            agree == 100 && gap_ok,
            format!("orthant: {agree}/100 agree ({cmax_in} in C^max); {gap_detail}"),
        ))
    })
}

pub fn bpsd_witness(cfg: &ToleranceConfig) -> Outcome {
    timed(12, "Bpsd witness", || {
        let cfg = ToleranceConfig {
            multistarts: 32,
            ..cfg.clone()
        };
        let best = see_saw(&matrix_m(SlicePoint::new(3.0, 0.0)), &cfg);
        Ok((
            best.value < -1e-6,
            format!("M(3,0), 32 starts, best product value {:.6}", best.value),
        ))
    })
    .with_limit(1.0)
}

fn chain_sample(sampler: &mut Sampler, d: usize, s: usize, k: usize) -> BipartiteOperator {
    match k % 5 {
        0 => {
            let terms = 1 + sampler.index(4);
            sampler.separable(d, s, terms)
        }
        1 => sampler.bipartite_psd(d, s),
        2 => sampler.bipartite_psd(d, s).partial_transpose(),
        3 => {
            let x = sampler
                .bipartite_psd(d, s)
                .add(&sampler.bipartite_psd(d, s).partial_transpose());
            let shift = sampler.uniform(-0.5, 0.1) * x.trace() / (d * s) as f64;
            x.shift(shift)
        }
        _ => {
            let h = sampler.bipartite_hermitian(d, s);
            let shift = sampler.uniform(-0.5, 3.0) * h.frobenius_norm() / (d * s) as f64;
            h.shift(shift)
        }
    }
}

/// Pairs `(sub, sup)` with `sub ⊆ sup` where `sub` says In and `sup` Out.
pub fn chain_inversions(verdicts: &[Verdict]) -> Vec<(ConeId, ConeId)> {
    let mut out = Vec::new();
    for lo in verdicts {
        for hi in verdicts {
            if lo.cone != hi.cone && lo.cone.is_subcone_of(hi.cone) && lo.is_in() && hi.is_out() {
                out.push((lo.cone, hi.cone));
            }
        }
    }
    out
}

pub fn chain_consistency(cfg: &ToleranceConfig) -> Outcome {
    timed(13, "chain consistency", || {
        let mut sampler = Sampler::new(cfg.seed ^ 0x0d);
        let mut inversions = 0;
        let mut inconclusive = 0;
        for (d, s) in [(2, 2), (2, 3), (3, 2)] {
            for k in 0..500 {
                let x = chain_sample(&mut sampler, d, s, k);
                let verdicts = ConeId::ALL
                    .iter()
                    .map(|&c| member(c, &x, cfg))
                    .collect::<Result<Vec<_>>>()?;
                inconclusive += verdicts
                    .iter()
                    .filter(|v| v.status == Status::Inconclusive)
                    .count();
                inversions += chain_inversions(&verdicts).len();
            }
        }
        Ok((
            inversions == 0,
            format!(
                "1500 operators, {inversions} inversions, {inconclusive} inconclusive verdicts"
            ),
        ))
    })
}

impl Outcome {
    fn with_limit(mut self, seconds: f64) -> Self {
        if self.seconds >= seconds {
            self.passed = false;
            self.detail
                .push_str(&format!("; exceeded the {seconds} s limit"));
        }
        self
    }
}

pub fn run_criterion(id: usize, cfg: &ToleranceConfig) -> Option<Outcome> {
    Some(match id {
        1 => region_equivalence(),
        2 => decomp_vs_region(cfg),
        3 => psd_slice_closed_form(cfg),
        4 => gamma_invariance(cfg),
        5 => kraus_round_trip(cfg),
        6 => free_self_duality(cfg),
        7 => sep_bpsd_pairing(cfg),
        8 => nonexposed_face(),
        9 => not_basic_closed(),
        10 => lift_equivalence(cfg),
        11 => minmax_systems(cfg),
        12 => bpsd_witness(cfg),
        13 => chain_consistency(cfg),
        _ => return None,
    })
}

pub fn run_all(cfg: &ToleranceConfig) -> Vec<Outcome> {
    (1..=CRITERIA)
        .filter_map(|id| run_criterion(id, cfg))
        .collect()
}
