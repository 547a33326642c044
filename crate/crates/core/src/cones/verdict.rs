use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::hermitian::wire::complex_vec;
use crate::hermitian::{BipartiteOperator, C64};

/// The six cone families, listed so that the inclusion chain reads left to
/// right: `Sep ⊆ Dpsd ⊆ Psd, PsdGamma ⊆ Decomp ⊆ Bpsd`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConeId {
    Sep,
    Dpsd,
    Psd,
    #[serde(rename = "ppt")]
    PsdGamma,
    Decomp,
    Bpsd,
}

impl ConeId {
    pub const ALL: [ConeId; 6] = [
        ConeId::Sep,
        ConeId::Dpsd,
        ConeId::Psd,
        ConeId::PsdGamma,
        ConeId::Decomp,
        ConeId::Bpsd,
    ];

    /// `self ⊆ other` according to the inclusion chain (reflexive).
    pub fn is_subcone_of(self, other: ConeId) -> bool {
        use ConeId::*;
        if self == other {
            return true;
        }
        match self {
            Sep => true,
            Dpsd => other != Sep,
            Psd | PsdGamma => matches!(other, Decomp | Bpsd),
            Decomp => other == Bpsd,
            Bpsd => false,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ConeId::Sep => "sep",
            ConeId::Dpsd => "dpsd",
            ConeId::Psd => "psd",
            ConeId::PsdGamma => "ppt",
            ConeId::Decomp => "decomp",
            ConeId::Bpsd => "bpsd",
        }
    }
}

impl fmt::Display for ConeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ConeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s.to_ascii_lowercase().as_str() {
            "sep" => Ok(ConeId::Sep),
            "dpsd" => Ok(ConeId::Dpsd),
            "psd" => Ok(ConeId::Psd),
            "ppt" | "psdgamma" | "psd_gamma" => Ok(ConeId::PsdGamma),
            "decomp" => Ok(ConeId::Decomp),
            "bpsd" => Ok(ConeId::Bpsd),
            other => Err(Error::InvalidInput(format!("unknown cone '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    In,
    Out,
    Inconclusive,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::In => "in",
            Status::Out => "out",
            Status::Inconclusive => "inconclusive",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// Minimum eigenvalues of `X` and, where relevant, of `X^Γ`.
    Spectral {
        min_eigenvalue: Option<f64>,
        min_eigenvalue_gamma: Option<f64>,
    },
    /// `v* Y v < 0` with `Y = X^Γ` when `partial_transpose` is set, else `Y = X`.
    NegEigenvector {
        #[serde(with = "complex_vec")]
        vector: Vec<C64>,
        value: f64,
        partial_transpose: bool,
    },
    ProductVectorWitness {
        #[serde(with = "complex_vec")]
        x: Vec<C64>,
        #[serde(with = "complex_vec")]
        y: Vec<C64>,
        value: f64,
    },
    /// `X ≈ psd_part + ppt_part` with `psd_part ≽ 0` and `ppt_part^Γ ≽ 0`.
    Decomposition {
        psd_part: BipartiteOperator,
        ppt_part: BipartiteOperator,
    },
    /// `W ∈ Dpsd`, `tr W = 1`, `⟨W, X⟩ = pairing < 0`.
    DualWitness {
        witness: BipartiteOperator,
        pairing: f64,
    },
    None,
}

/// Membership answer.
///
/// `residual` depends on the oracle: the minimum eigenvalue (of `X` or
/// `X^Γ`, whichever decides) for the exact cones, `‖X − X₁ − X₂‖_F` for
/// Decomp, and the best product-vector value for Bpsd.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub cone: ConeId,
    pub status: Status,
    pub residual: f64,
    pub certificate: Certificate,
}

impl Verdict {
    pub fn is_in(&self) -> bool {
        self.status == Status::In
    }

    pub fn is_out(&self) -> bool {
        self.status == Status::Out
    }
}

/// Tolerances and iteration budgets shared by all oracles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub psd_tol: f64,
    pub feas_tol: f64,
    pub max_iters: usize,
    pub multistarts: usize,
    pub witness_iters: usize,
    /// Seed for the randomized parts (see-saw starts).
    pub seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            psd_tol: 1e-9,
            feas_tol: 1e-7,
            max_iters: 5000,
            multistarts: 32,
            witness_iters: 2000,
            seed: 0,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<(), Error> {
        let ok = self.psd_tol > 0.0
            && self.feas_tol > 0.0
            && self.max_iters > 0
            && self.multistarts > 0
            && self.witness_iters > 0;
        if ok && self.psd_tol.is_finite() && self.feas_tol.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "tolerances and budgets must be positive: {self:?}"
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_order() {
        use ConeId::*;
        assert!(Sep.is_subcone_of(Bpsd));
        assert!(Dpsd.is_subcone_of(PsdGamma));
        assert!(Psd.is_subcone_of(Decomp));
        assert!(!Psd.is_subcone_of(PsdGamma));
        assert!(!PsdGamma.is_subcone_of(Psd));
        assert!(!Bpsd.is_subcone_of(Decomp));
        for c in ConeId::ALL {
            assert_eq!(c.name().parse::<ConeId>().unwrap(), c);
        }
    }

    #[test]
    fn verdict_json_shape() {
        let v = Verdict {
            cone: ConeId::Psd,
            status: Status::Out,
            residual: -1.0,
            certificate: Certificate::NegEigenvector {
                vector: vec![C64::new(1.0, 0.0)],
                value: -1.0,
                partial_transpose: false,
            },
        };
        let json: serde_json::Value = serde_json::to_value(&v).unwrap();
        assert_eq!(json["status"], "out");
        assert_eq!(json["certificate"]["kind"], "neg_eigenvector");
        assert_eq!(json["certificate"]["vector"][0][0], 1.0);
        let none = serde_json::to_value(Certificate::None).unwrap();
        assert_eq!(none["kind"], "none");
    }

    #[test]
    fn config_defaults_are_valid() {
        ToleranceConfig::default().validate().unwrap();
        let bad = ToleranceConfig {
            feas_tol: 0.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
