//! Spectral oracles: Psd, Psd^Γ, Dpsd, and Sep in dimensions where it
//! coincides with Dpsd.

use super::verdict::{Certificate, ConeId, Status, ToleranceConfig, Verdict};
use crate::error::{Error, Result};
use crate::hermitian::BipartiteOperator;

/// Largest `d·s` for which Sep is decided by the PPT criterion.
pub const SEP_MAX_PRODUCT_DIM: usize = 6;

struct SpectralTest {
    min: f64,
    passes: bool,
    vector: Vec<crate::hermitian::C64>,
    value: f64,
}

fn spectral_test(x: &BipartiteOperator, cfg: &ToleranceConfig) -> SpectralTest {
    let spec = x.matrix().spectrum();
    let min = spec.min();
    let vector = spec.eigenvector(0);
    SpectralTest {
        min,
        passes: min >= -cfg.psd_tol * x.tol_scale(),
        value: x.matrix().quadratic_form(&vector),
        vector,
    }
}

pub fn member_psd(x: &BipartiteOperator, cfg: &ToleranceConfig) -> Verdict {
    single(ConeId::Psd, x, false, cfg)
}

pub fn member_ppt(x: &BipartiteOperator, cfg: &ToleranceConfig) -> Verdict {
    single(ConeId::PsdGamma, &x.partial_transpose(), true, cfg)
}

fn single(cone: ConeId, y: &BipartiteOperator, transposed: bool, cfg: &ToleranceConfig) -> Verdict {
    let t = spectral_test(y, cfg);
    if t.passes {
        Verdict {
            cone,
            status: Status::In,
            residual: t.min,
            certificate: Certificate::Spectral {
                min_eigenvalue: (!transposed).then_some(t.min),
                min_eigenvalue_gamma: transposed.then_some(t.min),
            },
        }
    } else {
        Verdict {
            cone,
            status: Status::Out,
            residual: t.min,
            certificate: Certificate::NegEigenvector {
                vector: t.vector,
                value: t.value,
                partial_transpose: transposed,
            },
        }
    }
}

pub fn member_dpsd(x: &BipartiteOperator, cfg: &ToleranceConfig) -> Verdict {
    dpsd_as(ConeId::Dpsd, x, cfg)
}

fn dpsd_as(cone: ConeId, x: &BipartiteOperator, cfg: &ToleranceConfig) -> Verdict {
    let plain = spectral_test(x, cfg);
    let gamma = spectral_test(&x.partial_transpose(), cfg);
    let failing = match (plain.passes, gamma.passes) {
        (true, true) => {
            return Verdict {
                cone,
                status: Status::In,
                residual: plain.min.min(gamma.min),
                certificate: Certificate::Spectral {
                    min_eigenvalue: Some(plain.min),
                    min_eigenvalue_gamma: Some(gamma.min),
                },
            }
        }
        (false, _) if plain.min <= gamma.min || gamma.passes => (plain, false),
        _ => (gamma, true),
    };
    let (t, transposed) = failing;
    Verdict {
        cone,
        status: Status::Out,
        residual: t.min,
        certificate: Certificate::NegEigenvector {
            vector: t.vector,
            value: t.value,
            partial_transpose: transposed,
        },
    }
}

/// Separability for `d·s ≤ 6`, where Sep coincides with Dpsd.
pub fn member_sep_small(x: &BipartiteOperator, cfg: &ToleranceConfig) -> Result<Verdict> {
    if x.d() * x.s() > SEP_MAX_PRODUCT_DIM {
        return Err(Error::UnsupportedDimension(format!(
            "separability is only decided for d*s <= {SEP_MAX_PRODUCT_DIM}, got d={} s={}",
            x.d(),
            x.s()
        )));
    }
    Ok(dpsd_as(ConeId::Sep, x, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{choi_matrix, random_separable, LinearMapSpec};

    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn identity_is_in_everything_exact() {
        let i4 = BipartiteOperator::identity(2, 2);
        assert!(member_psd(&i4, &cfg()).is_in());
        assert!(member_ppt(&i4, &cfg()).is_in());
        assert!(member_dpsd(&i4, &cfg()).is_in());
        assert!(member_sep_small(&i4, &cfg()).unwrap().is_in());
    }

    #[test]
    fn swap_is_ppt_but_not_psd() {
        let swap = choi_matrix(&LinearMapSpec::transposition(2));
        assert!(member_ppt(&swap, &cfg()).is_in());
        let v = member_psd(&swap, &cfg());
        assert!(v.is_out());
        assert!((v.residual + 1.0).abs() < 1e-12);
    }

    #[test]
    fn choi_of_identity_not_dpsd() {
        let c = choi_matrix(&LinearMapSpec::identity(2));
        let v = member_dpsd(&c, &cfg());
        assert!(v.is_out());
        match v.certificate {
            Certificate::NegEigenvector {
                partial_transpose,
                value,
                ..
            } => {
                assert!(partial_transpose);
                assert!((value + 1.0).abs() < 1e-12);
            }
            other => panic!("unexpected certificate {other:?}"),
        }
        assert!(member_sep_small(&c, &cfg()).unwrap().is_out());
    }

    #[test]
    fn sep_dimension_limit() {
        let x = BipartiteOperator::identity(3, 3);
        assert!(matches!(
            member_sep_small(&x, &cfg()),
            Err(Error::UnsupportedDimension(_))
        ));
        assert!(member_sep_small(&BipartiteOperator::identity(2, 3), &cfg()).is_ok());
    }

    #[test]
    fn separable_samples_are_ppt() {
        for seed in 0..20 {
            let x = random_separable(2, 2, 3, seed);
            assert!(member_ppt(&x, &cfg()).is_in());
            assert!(member_sep_small(&x, &cfg()).unwrap().is_in());
        }
    }
}
