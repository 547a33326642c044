//! Minimal and maximal operator systems over a polyhedral cone `C ⊂ ℝ^d`.
//!
//! `C^max` at level `s` is `{A : Σ_i ℓ_i A_i ≽ 0 for every dual ray ℓ}` and
//! is decided exactly. `C^min` at level `s` is the cone generated by
//! `r ⊗ P` with `r` a ray and `P ≽ 0`; membership is a conic feasibility
//! problem solved by alternating projections, with a dual tuple `B`
//! (`Σ_i r_i B_i ≽ 0` for every ray, `Σ_i tr(A_i B_i) < 0`) as the Out
//! certificate.

use serde::{Deserialize, Serialize};

use crate::cones::{Status, ToleranceConfig};
use crate::error::{Error, Result};
use crate::hermitian::{HermitianMatrix, MatrixTuple, Sampler};

use super::pairing::FreeElement;

const PAIRING_SLACK: f64 = 1e-12;
const CHECK_EVERY: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
struct PolyhedralConeWire {
    dim: usize,
    rays: Vec<Vec<f64>>,
    dual_rays: Vec<Vec<f64>>,
    order_unit: Vec<f64>,
}

/// A closed salient polyhedral cone given by its extreme rays, the extreme
/// rays of its dual, and an interior point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PolyhedralConeWire", into = "PolyhedralConeWire")]
pub struct PolyhedralCone {
    dim: usize,
    rays: Vec<Vec<f64>>,
    dual_rays: Vec<Vec<f64>>,
    order_unit: Vec<f64>,
}

impl TryFrom<PolyhedralConeWire> for PolyhedralCone {
    type Error = Error;

    fn try_from(w: PolyhedralConeWire) -> Result<Self> {
        PolyhedralCone::new(w.dim, w.rays, w.dual_rays, w.order_unit)
    }
}

impl From<PolyhedralCone> for PolyhedralConeWire {
    fn from(c: PolyhedralCone) -> Self {
        PolyhedralConeWire {
            dim: c.dim,
            rays: c.rays,
            dual_rays: c.dual_rays,
            order_unit: c.order_unit,
        }
    }
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

impl PolyhedralCone {
    pub fn new(
        dim: usize,
        rays: Vec<Vec<f64>>,
        dual_rays: Vec<Vec<f64>>,
        order_unit: Vec<f64>,
    ) -> Result<Self> {
        if dim == 0 || rays.is_empty() || dual_rays.is_empty() {
            return Err(Error::InvalidInput(
                "cone needs a dimension, rays and dual rays".into(),
            ));
        }
        let bad_len =
            rays.iter().chain(&dual_rays).any(|v| v.len() != dim) || order_unit.len() != dim;
        if bad_len {
            return Err(Error::DimensionMismatch(format!(
                "all vectors must have length {dim}"
            )));
        }
        if rays
            .iter()
            .chain(&dual_rays)
            .chain([&order_unit])
            .flatten()
            .any(|x| !x.is_finite())
        {
            return Err(Error::InvalidInput("non-finite cone data".into()));
        }
        for (k, r) in rays.iter().enumerate() {
            for (j, l) in dual_rays.iter().enumerate() {
                if dot(r, l) < -PAIRING_SLACK {
                    return Err(Error::InvalidInput(format!(
                        "ray {k} pairs negatively with dual ray {j}"
                    )));
                }
            }
        }
        if let Some(j) = dual_rays.iter().position(|l| dot(&order_unit, l) <= 0.0) {
            return Err(Error::InvalidInput(format!(
                "order unit is not interior: pairing with dual ray {j} is not positive"
            )));
        }
        Ok(Self {
            dim,
            rays,
            dual_rays,
            order_unit,
        })
    }

    /// `ℝ^d_+`, a simplex cone.
    pub fn orthant(dim: usize) -> Self {
        let e: Vec<Vec<f64>> = (0..dim)
            .map(|k| (0..dim).map(|i| if i == k { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::new(dim, e.clone(), e, vec![1.0; dim]).expect("orthant is valid")
    }

    /// The cone over the square `[−1, 1]²` in `ℝ³`: rays `(±1, ±1, 1)`,
    /// dual rays `(±1, 0, 1)` and `(0, ±1, 1)`.
    pub fn square() -> Self {
        let rays = vec![
            vec![1.0, 1.0, 1.0],
            vec![1.0, -1.0, 1.0],
            vec![-1.0, 1.0, 1.0],
            vec![-1.0, -1.0, 1.0],
        ];
        let dual = vec![
            vec![1.0, 0.0, 1.0],
            vec![-1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![0.0, -1.0, 1.0],
        ];
        Self::new(3, rays, dual, vec![0.0, 0.0, 1.0]).expect("square cone is valid")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<f64>] {
        &self.rays
    }

    pub fn dual_rays(&self) -> &[Vec<f64>] {
        &self.dual_rays
    }

    pub fn order_unit(&self) -> &[f64] {
        &self.order_unit
    }

    fn check_len(&self, a: &FreeElement) -> Result<()> {
        if a.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "element of length {} for a cone in R^{}",
                a.len(),
                self.dim
            )));
        }
        Ok(())
    }
}

/// `Σ_i c_i A_i`.
pub fn combine(c: &[f64], a: &[HermitianMatrix]) -> HermitianMatrix {
    let s = a[0].dim();
    c.iter()
        .zip(a)
        .fold(HermitianMatrix::zeros(s), |acc, (&ci, ai)| {
            if ci == 0.0 {
                acc
            } else {
                acc.add(&ai.scale(ci))
            }
        })
}

pub fn member_cmax(cone: &PolyhedralCone, a: &FreeElement, psd_tol: f64) -> Result<bool> {
    cone.check_len(a)?;
    Ok(cone
        .dual_rays
        .iter()
        .all(|l| combine(l, a.entries()).is_psd(psd_tol)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CminCertificate {
    /// `A = Σ_k r_k ⊗ P_k` with one psd block per ray.
    Blocks {
        blocks: Vec<HermitianMatrix>,
    },
    /// `Σ_i r_i B_i ≽ 0` for every ray, `Σ_i u_i tr B_i = 1`, and
    /// `Σ_i tr(A_i B_i) = pairing < 0`.
    DualTuple {
        witness: MatrixTuple,
        pairing: f64,
    },
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CminVerdict {
    pub status: Status,
    pub residual: f64,
    pub certificate: CminCertificate,
}

/// The affine set `{(P_k) : Σ_k r_k ⊗ P_k = A}` and its projection.
struct RayConstraint<'a> {
    rays: &'a [Vec<f64>],
    gram_inv: Vec<Vec<f64>>,
    target: &'a [HermitianMatrix],
}

impl<'a> RayConstraint<'a> {
    fn new(cone: &'a PolyhedralCone, target: &'a [HermitianMatrix]) -> Result<Self> {
        let d = cone.dim;
        let rows: Vec<Vec<f64>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| cone.rays.iter().map(|r| r[i] * r[j]).sum())
                    .collect()
            })
            .collect();
        let spec = HermitianMatrix::from_real_rows(&rows)?.spectrum();
        if spec.min().is_nan() || spec.min() <= 1e-12 * spec.max() {
            return Err(Error::InvalidInput(
                "rays do not span the ambient space".into(),
            ));
        }
        let inv = spec.map_eigenvalues(|l| 1.0 / l);
        let gram_inv = (0..d)
            .map(|i| (0..d).map(|j| inv[(i, j)].re).collect())
            .collect();
        Ok(Self {
            rays: &cone.rays,
            gram_inv,
            target,
        })
    }

    /// `Σ_k r_k ⊗ P_k`, as the tuple of its coordinates.
    fn assemble(&self, blocks: &[HermitianMatrix]) -> Vec<HermitianMatrix> {
        let d = self.target.len();
        (0..d)
            .map(|i| {
                let c: Vec<f64> = self.rays.iter().map(|r| r[i]).collect();
                combine(&c, blocks)
            })
            .collect()
    }

    /// `G⁻¹ R` applied entrywise: the tuple `B` with `Rᵀ B` the component
    /// of `blocks` orthogonal to the kernel of `R`.
    fn dual_coordinates(&self, blocks: &[HermitianMatrix]) -> Vec<HermitianMatrix> {
        let rv = self.assemble(blocks);
        self.gram_inv.iter().map(|row| combine(row, &rv)).collect()
    }

    fn residual(&self, blocks: &[HermitianMatrix]) -> f64 {
        self.assemble(blocks)
            .iter()
            .zip(self.target)
            .map(|(x, a)| x.sub(a).frobenius_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn project(&self, blocks: &[HermitianMatrix]) -> Vec<HermitianMatrix> {
        let excess: Vec<HermitianMatrix> = self
            .assemble(blocks)
            .iter()
            .zip(self.target)
            .map(|(x, a)| x.sub(a))
            .collect();
        let y: Vec<HermitianMatrix> = self
            .gram_inv
            .iter()
            .map(|row| combine(row, &excess))
            .collect();
        blocks
            .iter()
            .zip(self.rays)
            .map(|(p, r)| p.sub(&combine(r, &y)))
            .collect()
    }
}

fn tuple_norm(t: &[HermitianMatrix]) -> f64 {
    t.iter()
        .map(|x| x.frobenius_norm().powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Shifts `b` along the sum of the dual rays until it lies in the dual of
/// `C^min`, then normalizes `Σ_i u_i tr B_i = 1`.
fn round_dual_tuple(cone: &PolyhedralCone, b: Vec<HermitianMatrix>) -> Option<MatrixTuple> {
    let s = b[0].dim();
    let lbar: Vec<f64> = (0..cone.dim)
        .map(|i| cone.dual_rays.iter().map(|l| l[i]).sum())
        .collect();
    let mut t = 0.0f64;
    for r in &cone.rays {
        let weight = dot(r, &lbar);
        if weight <= 0.0 {
            return None;
        }
        let lo = combine(r, &b).min_eigenvalue();
        t = t.max(-lo / weight);
    }
    let shifted: Vec<HermitianMatrix> = b
        .iter()
        .zip(&lbar)
        .map(|(bi, &li)| bi.add(&HermitianMatrix::identity(s).scale(t * li)))
        .collect();
    let norm: f64 = cone
        .order_unit
        .iter()
        .zip(&shifted)
        .map(|(&u, bi)| u * bi.trace())
        .sum();
    if !(norm.is_finite() && norm > 0.0) {
        return None;
    }
    MatrixTuple::new(shifted.iter().map(|bi| bi.scale(1.0 / norm)).collect()).ok()
}

pub fn member_cmin(
    cone: &PolyhedralCone,
    a: &FreeElement,
    cfg: &ToleranceConfig,
) -> Result<CminVerdict> {
    cone.check_len(a)?;
    let constraint = RayConstraint::new(cone, a.entries())?;
    let s = a.level();
    let m = cone.rays.len();
    let scale = tuple_norm(a.entries()).max(1.0);

    let mut y = constraint.project(&vec![HermitianMatrix::zeros(s); m]);
    let mut p = vec![HermitianMatrix::zeros(s); m];
    let mut best = f64::INFINITY;
    for it in 0..cfg.max_iters {
        let shifted: Vec<HermitianMatrix> = y.iter().zip(&p).map(|(yi, pi)| yi.add(pi)).collect();
        let x: Vec<HermitianMatrix> = shifted.iter().map(|z| z.project_psd()).collect();
        p = shifted.iter().zip(&x).map(|(z, xi)| z.sub(xi)).collect();
        y = constraint.project(&x);

        if it % CHECK_EVERY == 0 || it + 1 == cfg.max_iters {
            let residual = constraint.residual(&x);
            best = best.min(residual);
            if residual <= cfg.feas_tol * scale {
                return Ok(CminVerdict {
                    status: Status::In,
                    residual,
                    certificate: CminCertificate::Blocks { blocks: x },
                });
            }
            let gap: Vec<HermitianMatrix> = x.iter().zip(&y).map(|(xi, yi)| xi.sub(yi)).collect();
            if let Some(witness) = round_dual_tuple(cone, constraint.dual_coordinates(&gap)) {
                let pairing = witness.inner(a);
                if pairing < -cfg.feas_tol {
                    return Ok(CminVerdict {
                        status: Status::Out,
                        residual: pairing,
                        certificate: CminCertificate::DualTuple { witness, pairing },
                    });
                }
            }
        }
    }
    Ok(CminVerdict {
        status: Status::Inconclusive,
        residual: best,
        certificate: CminCertificate::None,
    })
}

/// Rechecks a [`CminVerdict`] against the cone data alone.
pub fn verify_cmin(
    cone: &PolyhedralCone,
    a: &FreeElement,
    verdict: &CminVerdict,
    cfg: &ToleranceConfig,
) -> bool {
    if a.len() != cone.dim {
        return false;
    }
    match (&verdict.status, &verdict.certificate) {
        (Status::In, CminCertificate::Blocks { blocks }) => {
            if blocks.len() != cone.rays.len() || blocks.iter().any(|b| b.dim() != a.level()) {
                return false;
            }
            let Ok(constraint) = RayConstraint::new(cone, a.entries()) else {
                return false;
            };
            let scale = tuple_norm(a.entries()).max(1.0);
            blocks.iter().all(|b| b.is_psd(cfg.psd_tol))
                && constraint.residual(blocks) <= cfg.feas_tol * scale
        }
        (Status::Out, CminCertificate::DualTuple { witness, .. }) => {
            if witness.len() != cone.dim || witness.level() != a.level() {
                return false;
            }
            let dual_ok = cone
                .rays
                .iter()
                .all(|r| combine(r, witness.entries()).is_psd(cfg.psd_tol));
            dual_ok && witness.inner(a) < -cfg.feas_tol
        }
        _ => false,
    }
}

/// Random element of `C^max` for the square cone: `A₃ = I` and `A₁`, `A₂`
/// Hermitian with operator norm `0.99`.
pub fn random_square_cmax_element(level: usize, sampler: &mut Sampler) -> FreeElement {
    let mut scaled = || {
        let h = sampler.hermitian(level);
        let spec = h.spectrum();
        let norm = spec.min().abs().max(spec.max().abs());
        h.scale(0.99 / norm)
    };
    let a1 = scaled();
    let a2 = scaled();
    MatrixTuple::new(vec![a1, a2, HermitianMatrix::identity(level)]).expect("equal sizes")
}

/// An element of `C^max \ C^min` for the square cone, found by sampling
/// with `seed` and certified by a verified dual tuple.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinMaxWitness {
    pub element: FreeElement,
    pub verdict: CminVerdict,
    pub attempts: usize,
}

pub fn search_square_minmax_gap(
    level: usize,
    seed: u64,
    max_attempts: usize,
    cfg: &ToleranceConfig,
) -> Result<Option<MinMaxWitness>> {
    let cone = PolyhedralCone::square();
    let mut sampler = Sampler::new(seed);
    for attempt in 1..=max_attempts {
        let a = random_square_cmax_element(level, &mut sampler);
        if !member_cmax(&cone, &a, cfg.psd_tol)? {
            continue;
        }
        let verdict = member_cmin(&cone, &a, cfg)?;
        if verdict.status == Status::Out && verify_cmin(&cone, &a, &verdict, cfg) {
            return Ok(Some(MinMaxWitness {
                element: a,
                verdict,
                attempts: attempt,
            }));
        }
    }
    Ok(None)
}

/// Random element of `C^max` near its boundary: `u ⊗ I + t H` for a random
/// Hermitian tuple `H`, with `t` at 0.99 of the largest admissible value.
pub fn random_cmax_element(
    cone: &PolyhedralCone,
    level: usize,
    sampler: &mut Sampler,
) -> FreeElement {
    let h: Vec<HermitianMatrix> = (0..cone.dim).map(|_| sampler.hermitian(level)).collect();
    let t = cone
        .dual_rays
        .iter()
        .map(|l| {
            let lo = combine(l, &h).min_eigenvalue();
            if lo < 0.0 {
                dot(l, &cone.order_unit) / -lo
            } else {
                f64::INFINITY
            }
        })
        .fold(f64::INFINITY, f64::min);
    let t = if t.is_finite() { 0.99 * t } else { 1.0 };
    let entries = h
        .iter()
        .zip(&cone.order_unit)
        .map(|(hi, &u)| hi.scale(t).add(&HermitianMatrix::identity(level).scale(u)))
        .collect();
    MatrixTuple::new(entries).expect("equal sizes")
}

/// Like [`search_square_minmax_gap`] for an arbitrary cone, sampling with
/// [`random_cmax_element`].
pub fn search_minmax_gap(
    cone: &PolyhedralCone,
    level: usize,
    seed: u64,
    max_attempts: usize,
    cfg: &ToleranceConfig,
) -> Result<Option<MinMaxWitness>> {
    let mut sampler = Sampler::new(seed);
    for attempt in 1..=max_attempts {
        let a = random_cmax_element(cone, level, &mut sampler);
        if !member_cmax(cone, &a, cfg.psd_tol)? {
            continue;
        }
        let verdict = member_cmin(cone, &a, cfg)?;
        if verdict.status == Status::Out && verify_cmin(cone, &a, &verdict, cfg) {
            return Ok(Some(MinMaxWitness {
                element: a,
                verdict,
                attempts: attempt,
            }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    #[test]
    fn general_search_finds_square_gap_and_no_orthant_gap() {
        let cfg = ToleranceConfig::default();
        let w = search_minmax_gap(&PolyhedralCone::square(), 2, 1, 200, &cfg)
            .unwrap()
            .expect("square cone has a gap at level 2");
        assert!(member_cmax(&PolyhedralCone::square(), &w.element, cfg.psd_tol).unwrap());
        let orthant = PolyhedralCone::orthant(3);
        assert!(search_minmax_gap(&orthant, 2, 1, 20, &cfg)
            .unwrap()
            .is_none());
        let mut sampler = Sampler::new(2);
        let a = random_cmax_element(&orthant, 3, &mut sampler);
        assert!(member_cmax(&orthant, &a, cfg.psd_tol).unwrap());
    }

    use super::*;
    use crate::hermitian::{CMatrix, C64};

    fn tuple(v: Vec<HermitianMatrix>) -> MatrixTuple {
        MatrixTuple::new(v).unwrap()
    }

    fn pauli_x() -> HermitianMatrix {
        HermitianMatrix::from_real_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn orthant_cmax_examples() {
        let c = PolyhedralCone::orthant(2);
        let a = tuple(vec![
            HermitianMatrix::diag(&[1.0, 0.0]),
            HermitianMatrix::diag(&[0.0, 1.0]),
        ]);
        assert!(member_cmax(&c, &a, 1e-9).unwrap());
        let b = tuple(vec![pauli_x(), HermitianMatrix::identity(2)]);
        assert!(!member_cmax(&c, &b, 1e-9).unwrap());
    }

    #[test]
    fn single_ray_element_is_in_cmin() {
        let cfg = ToleranceConfig::default();
        let c = PolyhedralCone::square();
        let p = Sampler::new(4).psd(2);
        let r = &c.rays()[1];
        let a = tuple(r.iter().map(|&ri| p.scale(ri)).collect());
        let v = member_cmin(&c, &a, &cfg).unwrap();
        assert_eq!(v.status, Status::In, "{v:?}");
        assert!(verify_cmin(&c, &a, &v, &cfg));
    }

    #[test]
    fn simplex_cone_min_equals_max() {
        let cfg = ToleranceConfig::default();
        let c = PolyhedralCone::orthant(3);
        let mut sampler = Sampler::new(9);
        for _ in 0..40 {
            let a = tuple(
                (0..3)
                    .map(|_| sampler.psd(2).shift(-sampler.uniform(0.0, 0.8)))
                    .collect(),
            );
            let v = member_cmin(&c, &a, &cfg).unwrap();
            assert_ne!(v.status, Status::Inconclusive);
            assert_eq!(
                v.status == Status::In,
                member_cmax(&c, &a, cfg.psd_tol).unwrap()
            );
            assert!(verify_cmin(&c, &a, &v, &cfg));
        }
    }

    #[test]
    fn square_cone_separates_min_from_max() {
        // A = (σ_x, σ_z, I) satisfies every dual-ray inequality.
        let c = PolyhedralCone::square();
        let sz = HermitianMatrix::diag(&[1.0, -1.0]);
        let a = tuple(vec![
            pauli_x().scale(0.99),
            sz.scale(0.99),
            HermitianMatrix::identity(2),
        ]);
        assert!(member_cmax(&c, &a, 1e-9).unwrap());
        let cfg = ToleranceConfig::default();
        let v = member_cmin(&c, &a, &cfg).unwrap();
        assert_eq!(v.status, Status::Out, "{v:?}");
        assert!(verify_cmin(&c, &a, &v, &cfg));
    }

    #[test]
    fn randomized_search_finds_certified_gap() {
        let w = search_square_minmax_gap(2, 0, 200, &ToleranceConfig::default())
            .unwrap()
            .expect("witness");
        assert!(matches!(
            w.verdict.certificate,
            CminCertificate::DualTuple { .. }
        ));
    }

    #[test]
    fn forged_blocks_are_rejected() {
        let cfg = ToleranceConfig::default();
        let c = PolyhedralCone::orthant(2);
        let a = tuple(vec![
            HermitianMatrix::identity(2),
            HermitianMatrix::identity(2),
        ]);
        let mut bad = CMatrix::zeros(2, 2);
        bad[(0, 0)] = C64::new(2.0, 0.0);
        bad[(1, 1)] = C64::new(-1.0, 0.0);
        let forged = CminVerdict {
            status: Status::In,
            residual: 0.0,
            certificate: CminCertificate::Blocks {
                blocks: vec![
                    HermitianMatrix::new(bad).unwrap(),
                    HermitianMatrix::identity(2),
                ],
            },
        };
        assert!(!verify_cmin(&c, &a, &forged, &cfg));
    }

    #[test]
    fn json_shape_and_validation() {
        let c = PolyhedralCone::square();
        let json = serde_json::to_value(&c).unwrap();
        assert_eq!(json["dim"], 3);
        assert_eq!(json["rays"].as_array().unwrap().len(), 4);
        let back: PolyhedralCone = serde_json::from_value(json).unwrap();
        assert_eq!(back, c);
        let bad = r#"{"dim":2,"rays":[[1,0],[0,1]],"dual_rays":[[1,0],[0,1]],"order_unit":[1,0]}"#;
        assert!(serde_json::from_str::<PolyhedralCone>(bad).is_err());
        let neg = r#"{"dim":2,"rays":[[1,0],[-1,1]],"dual_rays":[[1,0],[0,1]],"order_unit":[1,1]}"#;
        assert!(serde_json::from_str::<PolyhedralCone>(neg).is_err());
    }
}
