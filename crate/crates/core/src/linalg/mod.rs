//! Dense antisymmetric linear algebra: the matrix newtype, Pfaffians and the
//! real canonical (block-diagonal) form.

mod canonical;
mod pfaffian;

pub use canonical::{canonical_form, CanonicalForm};
pub use pfaffian::{pfaffian, pfaffian_log, pfaffian_rows, LogPfaffian};

use faer::Mat;

use crate::error::{Error, Result};

/// Absolute tolerance on `|A + A^T|` accepted on input.
pub const ANTISYMMETRY_TOL: f64 = 1e-12;

/// Real antisymmetric matrix. Construction validates antisymmetry, then
/// replaces the entries by `(A - A^T) / 2` so the diagonal is exactly zero.
#[derive(Debug, Clone)]
pub struct AntisymmetricMatrix {
    entries: Mat<f64>,
}

impl AntisymmetricMatrix {
    pub fn new(m: Mat<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: m.ncols(),
            });
        }
        let violation = antisymmetry_violation(&m);
        if violation > ANTISYMMETRY_TOL {
            return Err(Error::NotAntisymmetric { violation });
        }
        Ok(Self::symmetrized(&m))
    }

    pub fn from_fn(n: usize, f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        Self::new(Mat::from_fn(n, n, f))
    }

    /// Builds from the strict upper triangle listed row by row:
    /// `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
    pub fn from_upper(n: usize, upper: &[f64]) -> Result<Self> {
        let expected = n * n.saturating_sub(1) / 2;
        if upper.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: upper.len(),
            });
        }
        let mut m = Mat::<f64>::zeros(n, n);
        let mut it = upper.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = *it.next().unwrap();
                m[(i, j)] = v;
                m[(j, i)] = -v;
            }
        }
        Ok(Self { entries: m })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            entries: Mat::zeros(n, n),
        }
    }

    /// Caller guarantees exact antisymmetry up to roundoff; entries are still
    /// symmetrized.
    pub(crate) fn symmetrized(m: &Mat<f64>) -> Self {
        let n = m.nrows();
        let entries = Mat::from_fn(n, n, |i, j| {
            if i == j {
                0.0
            } else {
                0.5 * (m[(i, j)] - m[(j, i)])
            }
        });
        Self { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[(i, j)]
    }

    pub fn as_mat(&self) -> &Mat<f64> {
        &self.entries
    }

    pub fn into_mat(self) -> Mat<f64> {
        self.entries
    }

    /// `O^T A O`.
    pub fn congruence(&self, o: &Mat<f64>) -> Result<Self> {
        if o.nrows() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: o.nrows(),
            });
        }
        let m = o.transpose() * &self.entries * o;
        Ok(Self::symmetrized(&m))
    }

    /// Principal submatrix on the given (not necessarily sorted) indices.
    pub fn principal(&self, idx: &[usize]) -> Self {
        let entries = Mat::from_fn(idx.len(), idx.len(), |i, j| self.entries[(idx[i], idx[j])]);
        Self { entries }
    }

    pub fn max_abs(&self) -> f64 {
        let n = self.dim();
        let mut m = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                m = m.max(self.entries[(i, j)].abs());
            }
        }
        m
    }
}

pub(crate) fn antisymmetry_violation(m: &Mat<f64>) -> f64 {
    let n = m.nrows();
    let mut v = 0.0f64;
    for i in 0..n {
        for j in i..n {
            v = v.max((m[(i, j)] + m[(j, i)]).abs());
        }
    }
    v
}

/// `max |O^T O - 1|`.
pub fn orthogonality_residual(o: &Mat<f64>) -> f64 {
    let n = o.ncols();
    let g = o.transpose() * o;
    let mut r = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            r = r.max((g[(i, j)] - target).abs());
        }
    }
    r
}
