use faer::{Mat, Side};
use num_complex::Complex64;

use super::AntisymmetricMatrix;
use crate::error::{Error, Result};

/// `O^T A O = D` with `D = diag([[0, l_k], [-l_k, 0]])`, `l_k >= 0` descending.
/// For odd dimension `D` carries a trailing 1x1 zero block.
#[derive(Debug, Clone)]
pub struct CanonicalForm {
    pub orthogonal: Mat<f64>,
    pub values: Vec<f64>,
}

impl CanonicalForm {
    pub fn block_diagonal(&self) -> AntisymmetricMatrix {
        let n = self.orthogonal.nrows();
        let mut d = Mat::<f64>::zeros(n, n);
        for (k, &l) in self.values.iter().enumerate() {
            d[(2 * k, 2 * k + 1)] = l;
            d[(2 * k + 1, 2 * k)] = -l;
        }
        AntisymmetricMatrix::symmetrized(&d)
    }

    /// `O D O^T`.
    pub fn reconstruct(&self) -> AntisymmetricMatrix {
        let d = self.block_diagonal();
        let m = &self.orthogonal * d.as_mat() * self.orthogonal.transpose();
        AntisymmetricMatrix::symmetrized(&m)
    }
}

/// Real canonical form through the Hermitian eigenproblem of `iA`.
///
/// An eigenvector `v` of `iA` with eigenvalue `l > 0` gives the pair of
/// real orthonormal columns `sqrt(2) (Re v, -Im v)`. Each `v` is fixed up to
/// phase by making its first largest-modulus component real positive, so an
/// input that is already canonical maps to the identity.
pub fn canonical_form(a: &AntisymmetricMatrix) -> Result<CanonicalForm> {
    let n = a.dim();
    if n == 0 {
        return Ok(CanonicalForm {
            orthogonal: Mat::zeros(0, 0),
            values: Vec::new(),
        });
    }
    let m = a.as_mat();
    let ia = Mat::<Complex64>::from_fn(n, n, |i, j| Complex64::new(0.0, m[(i, j)]));
    let eig = ia
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    let evals: Vec<f64> = (0..n).map(|i| eig.S()[i].re).collect();
    let vecs = eig.U();

    let radius = evals.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let tol = 64.0 * n as f64 * f64::EPSILON * radius.max(f64::MIN_POSITIVE);
    let positive = evals.iter().filter(|&&v| v > tol).count().min(n / 2);
    let kernel = n - 2 * positive;

    let mut o = Mat::<f64>::zeros(n, n);
    let mut values = Vec::with_capacity(n / 2);
    let sqrt2 = std::f64::consts::SQRT_2;
    for k in 0..positive {
        let idx = n - 1 - k;
        values.push(evals[idx]);
        let v: Vec<Complex64> = (0..n).map(|r| vecs[(r, idx)]).collect();
        let v = fix_phase(v);
        for r in 0..n {
            o[(r, 2 * k)] = sqrt2 * v[r].re;
            o[(r, 2 * k + 1)] = -sqrt2 * v[r].im;
        }
    }

    if kernel > 0 {
        // eigenvalues are ascending: negatives, kernel, positives
        let first = n - positive - kernel;
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(kernel);
        let existing: Vec<Vec<f64>> = (0..2 * positive).map(|c| (0..n).map(|r| o[(r, c)]).collect()).collect();
        'outer: for idx in first..first + kernel {
            for part in 0..2 {
                let cand: Vec<f64> = (0..n)
                    .map(|r| if part == 0 { vecs[(r, idx)].re } else { vecs[(r, idx)].im })
                    .collect();
                if let Some(q) = orthonormalize(cand, existing.iter().chain(basis.iter())) {
                    basis.push(q);
                    if basis.len() == kernel {
                        break 'outer;
                    }
                }
            }
        }
        if basis.len() < kernel {
            return Err(Error::Solver("failed to build a real kernel basis".into()));
        }
        for (c, q) in basis.iter().enumerate() {
            for r in 0..n {
                o[(r, 2 * positive + c)] = q[r];
            }
        }
        values.extend(std::iter::repeat_n(0.0, n / 2 - positive));
    }

    Ok(CanonicalForm {
        orthogonal: o,
        values,
    })
}

fn fix_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let max = v.iter().fold(0.0f64, |acc, z| acc.max(z.norm()));
    let pivot = v.iter().position(|z| z.norm() >= max * (1.0 - 1e-8)).unwrap_or(0);
    let phase = v[pivot].conj() / v[pivot].norm();
    for z in &mut v {
        *z *= phase;
    }
    v
}

/// Twice-iterated Gram-Schmidt against `against`; `None` when the remainder
/// is numerically zero.
fn orthonormalize<'a>(mut v: Vec<f64>, against: impl Iterator<Item = &'a Vec<f64>> + Clone) -> Option<Vec<f64>> {
    let start = norm(&v);
    if start < 1e-8 {
        return None;
    }
    for _ in 0..2 {
        for q in against.clone() {
            let d: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            for (x, y) in v.iter_mut().zip(q) {
                *x -= d * y;
            }
        }
    }
    let nv = norm(&v);
    if nv < 1e-6 * start.max(1e-2) {
        return None;
    }
    for x in &mut v {
        *x /= nv;
    }
    Some(v)
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
