use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::AntisymmetricMatrix;

pub const HERMITICITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    #[default]
    Open,
    /// Periodic fermion boundary: the wrap bond carries the bulk coefficients.
    Ring,
}

impl Boundary {
    pub fn as_str(self) -> &'static str {
        match self {
            Boundary::Open => "open",
            Boundary::Ring => "ring",
        }
    }
}

/// `H = sum_ij A_ij (2 c^dag_i c_j - delta_ij) + sum_ij (B_ij c^dag_i c^dag_j + h.c.)`
///
/// With this normalization `H` is traceless and `A = mu * 1` gives
/// `mu * sum_j (2 n_j - 1)`.
#[derive(Debug, Clone)]
pub struct QuadraticHamiltonian {
    sites: usize,
    a: Mat<Complex64>,
    b: Mat<Complex64>,
    boundary: Boundary,
}

impl QuadraticHamiltonian {
    pub fn new(a: Mat<Complex64>, b: Mat<Complex64>, boundary: Boundary) -> Result<Self> {
        let n = a.nrows();
        for m in [&a, &b] {
            if m.nrows() != n || m.ncols() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: if m.nrows() != n { m.nrows() } else { m.ncols() },
                });
            }
        }
        let mut herm = 0.0f64;
        let mut anti = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                herm = herm.max((a[(i, j)] - a[(j, i)].conj()).norm());
                anti = anti.max((b[(i, j)] + b[(j, i)]).norm());
            }
        }
        if herm > HERMITICITY_TOL {
            return Err(Error::NotHermitian { violation: herm });
        }
        if anti > HERMITICITY_TOL {
            return Err(Error::NotAntisymmetric { violation: anti });
        }
        let a = Mat::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)].conj()));
        let b = Mat::from_fn(n, n, |i, j| 0.5 * (b[(i, j)] - b[(j, i)]));
        Ok(Self {
            sites: n,
            a,
            b,
            boundary,
        })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn hopping(&self) -> &Mat<Complex64> {
        &self.a
    }

    pub fn pairing(&self) -> &Mat<Complex64> {
        &self.b
    }

    /// True when `A` and `B` are real, so the Majorana matrix only couples
    /// even to odd generators.
    pub fn is_real(&self) -> bool {
        let n = self.sites;
        (0..n).all(|i| (0..n).all(|j| self.a[(i, j)].im == 0.0 && self.b[(i, j)].im == 0.0))
    }

    /// Real antisymmetric `h` with `H = (i/4) sum_kl h_kl a_k a_l`.
    pub fn majorana_matrix(&self) -> AntisymmetricMatrix {
        let n = self.sites;
        let m = 2 * n;
        // H = sum_kl M_kl a_k a_l + const, collected from the expansions
        // c^dag = (a_e + i a_o)/2 and c = (a_e - i a_o)/2
        let mut mm = Mat::<Complex64>::zeros(m, m);
        let i = Complex64::new(0.0, 1.0);
        for p in 0..n {
            for q in 0..n {
                let (ep, op, eq, oq) = (2 * p, 2 * p + 1, 2 * q, 2 * q + 1);
                let a = self.a[(p, q)];
                if a != Complex64::new(0.0, 0.0) {
                    // 2 A c^dag_p c_q
                    mm[(ep, eq)] += 0.5 * a;
                    mm[(ep, oq)] += -0.5 * i * a;
                    mm[(op, eq)] += 0.5 * i * a;
                    mm[(op, oq)] += 0.5 * a;
                }
                let b = self.b[(p, q)];
                if b != Complex64::new(0.0, 0.0) {
                    // B c^dag_p c^dag_q
                    mm[(ep, eq)] += 0.25 * b;
                    mm[(ep, oq)] += 0.25 * i * b;
                    mm[(op, eq)] += 0.25 * i * b;
                    mm[(op, oq)] += -0.25 * b;
                    // conj(B) c_q c_p
                    let bc = b.conj();
                    mm[(eq, ep)] += 0.25 * bc;
                    mm[(eq, op)] += -0.25 * i * bc;
                    mm[(oq, ep)] += -0.25 * i * bc;
                    mm[(oq, op)] += -0.25 * bc;
                }
            }
        }
        // sum M_kl a_k a_l = sum_{k != l} (M_kl - M_lk)/2 a_k a_l + const
        let h = Mat::from_fn(m, m, |k, l| {
            if k == l {
                0.0
            } else {
                let v = -2.0 * i * (mm[(k, l)] - mm[(l, k)]);
                debug_assert!(v.im.abs() < 1e-9, "Majorana matrix is not real");
                v.re
            }
        });
        AntisymmetricMatrix::symmetrized(&h)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn rejects_non_hermitian_hopping() {
        let a = Mat::from_fn(2, 2, |i, j| if (i, j) == (0, 1) { c(1.0) } else { c(0.0) });
        let b = Mat::zeros(2, 2);
        assert!(matches!(
            QuadraticHamiltonian::new(a, b, Boundary::Open),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn chemical_potential_majorana_form() {
        let a = Mat::from_fn(2, 2, |i, j| if i == j { c(1.5) } else { c(0.0) });
        let h = QuadraticHamiltonian::new(a, Mat::zeros(2, 2), Boundary::Open)
            .unwrap()
            .majorana_matrix();
        // mu (2n - 1) = -i mu a_e a_o = (i/4)(h_eo a_e a_o + h_oe a_o a_e)
        assert_eq!(h.get(0, 1), -3.0);
        assert_eq!(h.get(2, 3), -3.0);
        assert_eq!(h.get(0, 2), 0.0);
    }
}
