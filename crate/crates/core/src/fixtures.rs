//! JSON interchange for operators and states, and seeded random fixtures.
//!
//! Matrices are `{"dim": n, "rows": [[[re, im], …], …]}`, vectors
//! `{"dim": n, "rows": [[re, im], …]}`.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{CMatrix, CVector, HermitianOperator, StateVector};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub rows: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VectorJson {
    pub dim: usize,
    pub rows: Vec<[f64; 2]>,
}

impl From<&CMatrix> for MatrixJson {
    fn from(m: &CMatrix) -> Self {
        Self {
            dim: m.nrows(),
            rows: (0..m.nrows())
                .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
                .collect(),
        }
    }
}

impl From<&HermitianOperator> for MatrixJson {
    fn from(h: &HermitianOperator) -> Self {
        h.matrix().into()
    }
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix> {
        if self.rows.len() != self.dim || self.rows.iter().any(|r| r.len() != self.dim) {
            return Err(Error::Fixture(format!("matrix rows do not form a {0}x{0} array", self.dim)));
        }
        Ok(CMatrix::from_fn(self.dim, self.dim, |i, j| {
            let [re, im] = self.rows[i][j];
            Complex64::new(re, im)
        }))
    }

    pub fn to_operator(&self) -> Result<HermitianOperator> {
        HermitianOperator::new(self.to_matrix()?)
    }
}

impl From<&CVector> for VectorJson {
    fn from(v: &CVector) -> Self {
        Self {
            dim: v.len(),
            rows: v.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl From<&StateVector> for VectorJson {
    fn from(v: &StateVector) -> Self {
        v.entries().into()
    }
}

impl VectorJson {
    pub fn to_state(&self) -> Result<StateVector> {
        if self.rows.len() != self.dim {
            return Err(Error::Fixture(format!("vector has {} entries, dim {}", self.rows.len(), self.dim)));
        }
        Ok(StateVector::new(CVector::from_iterator(
            self.dim,
            self.rows.iter().map(|&[re, im]| Complex64::new(re, im)),
        )))
    }
}

/// Operator family plus an optional state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub ops: Vec<MatrixJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<VectorJson>,
}

impl Fixture {
    pub fn new(label: impl Into<String>, ops: &[HermitianOperator], state: Option<&StateVector>) -> Self {
        Self {
            label: Some(label.into()),
            ops: ops.iter().map(MatrixJson::from).collect(),
            state: state.map(VectorJson::from),
        }
    }

    pub fn operators(&self) -> Result<Vec<HermitianOperator>> {
        let ops: Vec<_> = self.ops.iter().map(MatrixJson::to_operator).collect::<Result<_>>()?;
        if let Some(first) = ops.first() {
            if let Some(bad) = ops.iter().find(|o| o.dim() != first.dim()) {
                return Err(Error::DimensionMismatch {
                    expected: first.dim(),
                    found: bad.dim(),
                });
            }
        }
        Ok(ops)
    }

    pub fn state(&self) -> Result<Option<StateVector>> {
        self.state.as_ref().map(VectorJson::to_state).transpose()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Fixture(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("fixture serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Fixture(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Hermitian part of a complex Gaussian matrix.
pub fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> Result<HermitianOperator> {
    let m = CMatrix::from_fn(dim, dim, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    HermitianOperator::new((&m + m.adjoint()) * Complex64::new(0.5, 0.0))
}

/// Random Hermitian matrix scaled to `‖A‖₂ = norm`.
pub fn random_hermitian_with_norm(dim: usize, norm: f64, rng: &mut ChaCha8Rng) -> Result<HermitianOperator> {
    let a = random_hermitian(dim, rng)?;
    let n2 = a.norm2()?;
    Ok(a.scaled(norm / n2))
}

/// Diagonal matrix with entries uniform in `[lo, hi]`.
pub fn random_diagonal(dim: usize, lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> Result<HermitianOperator> {
    let u = Uniform::new_inclusive(lo, hi).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let d: Vec<f64> = (0..dim).map(|_| u.sample(rng)).collect();
    HermitianOperator::from_diagonal(&d)
}

/// Real symmetric Gaussian matrix.
pub fn random_real_symmetric(dim: usize, rng: &mut ChaCha8Rng) -> Result<HermitianOperator> {
    let m = DMatrix::<f64>::from_fn(dim, dim, |_, _| StandardNormal.sample(rng));
    HermitianOperator::from_real((&m + m.transpose()) * 0.5)
}

pub fn random_unit_state(dim: usize, rng: &mut ChaCha8Rng) -> StateVector {
    let v = CVector::from_fn(dim, |_, _| {
        Complex64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
    });
    let n = v.norm();
    StateVector::new(v / Complex64::new(n, 0.0))
}
