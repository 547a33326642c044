//! JSON wire shapes. Complex numbers travel as `[re, im]` pairs.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::bipartite::BipartiteOperator;
use super::hermitian::HermitianMatrix;
use super::matrix::{CMatrix, C64};
use crate::error::Error;

/// `{"n": int, "entries": [[[re, im], ...], ...]}`
#[derive(Serialize, Deserialize)]
pub struct MatrixWire {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

/// `{"d": int, "s": int, "mat": <matrix>}`
#[derive(Serialize, Deserialize)]
pub struct BipartiteWire {
    pub d: usize,
    pub s: usize,
    pub mat: HermitianMatrix,
}

/// Rectangular complex matrix: `{"rows": int, "cols": int, "entries": [...]}`.
#[derive(Serialize, Deserialize)]
pub struct RectWire {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

fn rows_to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn pairs_to_rows(entries: &[Vec<[f64; 2]>]) -> Vec<Vec<C64>> {
    entries
        .iter()
        .map(|r| r.iter().map(|&[re, im]| C64::new(re, im)).collect())
        .collect()
}

impl From<HermitianMatrix> for MatrixWire {
    fn from(h: HermitianMatrix) -> Self {
        MatrixWire {
            n: h.dim(),
            entries: rows_to_pairs(h.as_cmatrix()),
        }
    }
}

impl TryFrom<MatrixWire> for HermitianMatrix {
    type Error = Error;

    fn try_from(w: MatrixWire) -> Result<Self, Error> {
        if w.entries.len() != w.n || w.entries.iter().any(|r| r.len() != w.n) {
            return Err(Error::DimensionMismatch(format!(
                "field \"entries\" must be {n}x{n} for \"n\": {n}",
                n = w.n
            )));
        }
        HermitianMatrix::new(CMatrix::from_rows(&pairs_to_rows(&w.entries))?)
    }
}

impl From<BipartiteOperator> for BipartiteWire {
    fn from(x: BipartiteOperator) -> Self {
        BipartiteWire {
            d: x.d(),
            s: x.s(),
            mat: x.into_matrix(),
        }
    }
}

impl TryFrom<BipartiteWire> for BipartiteOperator {
    type Error = Error;

    fn try_from(w: BipartiteWire) -> Result<Self, Error> {
        BipartiteOperator::new(w.d, w.s, w.mat)
    }
}

impl From<&CMatrix> for RectWire {
    fn from(m: &CMatrix) -> Self {
        RectWire {
            rows: m.rows(),
            cols: m.cols(),
            entries: rows_to_pairs(m),
        }
    }
}

impl TryFrom<RectWire> for CMatrix {
    type Error = Error;

    fn try_from(w: RectWire) -> Result<Self, Error> {
        let m = CMatrix::from_rows(&pairs_to_rows(&w.entries))?;
        if m.rows() != w.rows || (w.rows > 0 && m.cols() != w.cols) {
            return Err(Error::DimensionMismatch(format!(
                "field \"entries\" is {}x{}, header says {}x{}",
                m.rows(),
                m.cols(),
                w.rows,
                w.cols
            )));
        }
        if let Some((row, col)) = m.first_non_finite() {
            return Err(Error::NonFinite { row, col });
        }
        Ok(m)
    }
}

/// `serde(with = ...)` adaptor for complex vectors.
pub mod complex_vec {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[C64], ser: S) -> Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = v.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<C64>, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(de)?;
        Ok(pairs.into_iter().map(|[re, im]| C64::new(re, im)).collect())
    }
}

/// `serde(with = ...)` adaptor for a list of rectangular complex matrices.
pub mod rect_list {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[CMatrix], ser: S) -> Result<S::Ok, S::Error> {
        let wires: Vec<RectWire> = v.iter().map(RectWire::from).collect();
        wires.serialize(ser)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(de: D) -> Result<Vec<CMatrix>, D::Error> {
        let wires = Vec::<RectWire>::deserialize(de)?;
        wires
            .into_iter()
            .map(|w| CMatrix::try_from(w).map_err(serde::de::Error::custom))
            .collect()
    }
}
