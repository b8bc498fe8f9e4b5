use faer::Mat;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::hamiltonian::{Boundary, QuadraticHamiltonian};
use crate::error::{Error, Result};
use crate::linalg::{canonical_form, orthogonality_residual, AntisymmetricMatrix};
use crate::parallel::{self, Execution};

/// Relative zero-mode threshold on the one-particle spectrum.
pub const ZERO_MODE_REL_TOL: f64 = 1e-8;
/// Tolerance on singular values above 1 accepted by [`MajoranaCovariance::new`].
pub const CONTRACTION_TOL: f64 = 1e-10;
/// `max |G G^T - 1|` accepted where a pure state is required.
pub const PURITY_TOL: f64 = 1e-8;

/// `gamma_kl = (i/2) <[a_k, a_l]>` over the sites
/// `site_offset .. site_offset + sites`. Matrix index `2 * (x - site_offset)`
/// is the even generator of site `x`.
#[derive(Debug, Clone)]
pub struct MajoranaCovariance {
    gamma: AntisymmetricMatrix,
    site_offset: i64,
}

impl MajoranaCovariance {
    /// Validates antisymmetry and the contraction bound `||gamma|| <= 1`.
    pub fn new(gamma: AntisymmetricMatrix, site_offset: i64) -> Result<Self> {
        if gamma.dim() % 2 == 1 {
            return Err(Error::DimensionMismatch {
                expected: gamma.dim() + 1,
                found: gamma.dim(),
            });
        }
        if gamma.dim() > 0 {
            let s = gamma
                .as_mat()
                .singular_values()
                .map_err(|e| Error::Solver(format!("{e:?}")))?;
            let top = s.iter().cloned().fold(0.0, f64::max);
            if top > 1.0 + CONTRACTION_TOL {
                return Err(Error::InvalidCovariance { value: top });
            }
        }
        Ok(Self { gamma, site_offset })
    }

    pub(crate) fn from_trusted(gamma: AntisymmetricMatrix, site_offset: i64) -> Self {
        Self { gamma, site_offset }
    }

    /// Fock vacuum: every `<2 n_j - 1> = -1`.
    pub fn vacuum(sites: usize, site_offset: i64) -> Self {
        let mut m = Mat::<f64>::zeros(2 * sites, 2 * sites);
        for j in 0..sites {
            m[(2 * j, 2 * j + 1)] = 1.0;
            m[(2 * j + 1, 2 * j)] = -1.0;
        }
        Self::from_trusted(AntisymmetricMatrix::symmetrized(&m), site_offset)
    }

    pub fn sites(&self) -> usize {
        self.gamma.dim() / 2
    }

    pub fn majoranas(&self) -> usize {
        self.gamma.dim()
    }

    pub fn site_offset(&self) -> i64 {
        self.site_offset
    }

    pub fn first_site(&self) -> i64 {
        self.site_offset
    }

    pub fn last_site(&self) -> i64 {
        self.site_offset + self.sites() as i64 - 1
    }

    /// Same state with relabelled physical sites.
    pub fn with_site_offset(mut self, site_offset: i64) -> Self {
        self.site_offset = site_offset;
        self
    }

    pub fn gamma(&self) -> &AntisymmetricMatrix {
        &self.gamma
    }

    pub fn get(&self, k: usize, l: usize) -> f64 {
        self.gamma.get(k, l)
    }

    /// Matrix index of a Majorana generator given in physical coordinates
    /// (`2 * site + bit`).
    pub fn index_of_mode(&self, mode: i64) -> Result<usize> {
        let local = mode - 2 * self.site_offset;
        if local < 0 || local >= self.majoranas() as i64 {
            return Err(Error::SiteOutsideWindow {
                site: mode.div_euclid(2),
                first: self.first_site(),
                last: self.last_site(),
            });
        }
        Ok(local as usize)
    }

    /// `<2 n_x - 1> = -gamma_{2x, 2x+1}`.
    pub fn occupation_sign(&self, site: i64) -> Result<f64> {
        let k = self.index_of_mode(2 * site)?;
        Ok(-self.gamma.get(k, k + 1))
    }

    /// `max |gamma gamma^T - 1|`.
    pub fn purity_residual(&self) -> f64 {
        let g = self.gamma.as_mat();
        let p = g * g.transpose();
        let n = self.majoranas();
        let mut r = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                let target = if i == j { 1.0 } else { 0.0 };
                r = r.max((p[(i, j)] - target).abs());
            }
        }
        r
    }

    /// `<H> = (1/4) sum_kl h_kl gamma_kl` for `H = (i/4) sum h_kl a_k a_l`.
    pub fn energy(&self, h: &AntisymmetricMatrix) -> Result<f64> {
        if h.dim() != self.majoranas() {
            return Err(Error::DimensionMismatch {
                expected: self.majoranas(),
                found: h.dim(),
            });
        }
        let n = h.dim();
        let (hm, gm) = (h.as_mat(), self.gamma.as_mat());
        let mut e = 0.0;
        for l in 0..n {
            for k in 0..n {
                e += hm[(k, l)] * gm[(k, l)];
            }
        }
        Ok(0.25 * e)
    }
}

/// Splits the chain at `cut`: sites `< cut` are left, `>= cut` right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfDualCut {
    pub cut: i64,
}

impl SelfDualCut {
    pub fn new(cut: i64) -> Self {
        Self { cut }
    }

    /// Diagonal of `theta_minus` on the generators of `g`.
    pub fn theta_minus(&self, g: &MajoranaCovariance) -> Vec<f64> {
        (0..g.majoranas())
            .map(|k| if self.is_left(g, k) { -1.0 } else { 1.0 })
            .collect()
    }

    pub fn is_left(&self, g: &MajoranaCovariance, k: usize) -> bool {
        (g.site_offset + (k / 2) as i64) < self.cut
    }
}

/// `E = (1 + i gamma) / 2`, evaluated lazily entry by entry.
#[derive(Debug, Clone, Copy)]
pub struct BasisProjection<'a> {
    cov: &'a MajoranaCovariance,
}

impl<'a> BasisProjection<'a> {
    pub fn new(cov: &'a MajoranaCovariance) -> Self {
        Self { cov }
    }

    pub fn dim(&self) -> usize {
        self.cov.majoranas()
    }

    pub fn covariance(&self) -> &'a MajoranaCovariance {
        self.cov
    }

    /// First and last physical site.
    pub fn site_range(&self) -> (i64, i64) {
        (self.cov.first_site(), self.cov.last_site())
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        let d = if i == j { 1.0 } else { 0.0 };
        Complex64::new(0.5 * d, 0.5 * self.cov.get(i, j))
    }

    pub fn to_matrix(&self) -> Mat<Complex64> {
        let n = self.dim();
        Mat::from_fn(n, n, |i, j| self.entry(i, j))
    }
}

/// Dense basis projection; refuses covariances that are not pure.
pub fn covariance_to_projection(g: &MajoranaCovariance) -> Result<Mat<Complex64>> {
    let residual = g.purity_residual();
    if residual > PURITY_TOL {
        return Err(Error::ImpureCovariance { residual });
    }
    Ok(BasisProjection::new(g).to_matrix())
}

/// `O gamma O^T`.
pub fn bogoliubov_transform(g: &MajoranaCovariance, o: &Mat<f64>) -> Result<MajoranaCovariance> {
    if o.nrows() != g.majoranas() || o.ncols() != g.majoranas() {
        return Err(Error::DimensionMismatch {
            expected: g.majoranas(),
            found: o.nrows(),
        });
    }
    let residual = orthogonality_residual(o);
    if residual > 1e-10 {
        return Err(Error::NotOrthogonal { residual });
    }
    let m = o * g.gamma.as_mat() * o.transpose();
    Ok(MajoranaCovariance::from_trusted(
        AntisymmetricMatrix::symmetrized(&m),
        g.site_offset,
    ))
}

/// Graded product of the restrictions to both sides of `cut`: the left-right
/// blocks of gamma are set to zero.
pub fn graded_product(g: &MajoranaCovariance, cut: SelfDualCut) -> MajoranaCovariance {
    let n = g.majoranas();
    let src = g.gamma.as_mat();
    let m = Mat::from_fn(n, n, |i, j| {
        if cut.is_left(g, i) == cut.is_left(g, j) {
            src[(i, j)]
        } else {
            0.0
        }
    });
    MajoranaCovariance::from_trusted(AntisymmetricMatrix::symmetrized(&m), g.site_offset)
}

/// How the ground covariance is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroundRoute {
    /// Bloch for translation-invariant rings, real SVD for real couplings,
    /// canonical form otherwise.
    #[default]
    Auto,
    /// Two-band momentum-space sign function; translation-invariant rings only.
    Bloch,
    /// SVD of the even-odd block; real couplings only.
    RealSvd,
    /// Canonical form of the full Majorana matrix.
    Canonical,
}

#[derive(Debug, Clone, Copy)]
pub struct GroundSolver {
    pub route: GroundRoute,
    pub exec: Execution,
    /// Mode energies below this fraction of the largest one count as zero
    /// modes.
    pub zero_mode_tol: f64,
}

impl Default for GroundSolver {
    fn default() -> Self {
        Self::new(GroundRoute::Auto, Execution::Sequential)
    }
}

impl GroundSolver {
    pub fn new(route: GroundRoute, exec: Execution) -> Self {
        Self {
            route,
            exec,
            zero_mode_tol: ZERO_MODE_REL_TOL,
        }
    }

    pub fn with_zero_mode_tol(mut self, tol: f64) -> Self {
        self.zero_mode_tol = tol;
        self
    }

    pub fn solve(&self, h: &QuadraticHamiltonian) -> Result<MajoranaCovariance> {
        let hm = h.majorana_matrix();
        let route = match self.route {
            GroundRoute::Auto => {
                if h.boundary() == Boundary::Ring && circulant_symbol(&hm).is_some() {
                    GroundRoute::Bloch
                } else if is_even_odd(&hm) {
                    GroundRoute::RealSvd
                } else {
                    GroundRoute::Canonical
                }
            }
            r => r,
        };
        let gamma = match route {
            GroundRoute::Bloch => {
                let symbol = circulant_symbol(&hm).ok_or_else(|| {
                    Error::Solver("Bloch route needs a translation-invariant ring".into())
                })?;
                bloch_ground(&symbol, self.exec, self.zero_mode_tol)?
            }
            GroundRoute::RealSvd => {
                if !is_even_odd(&hm) {
                    return Err(Error::Solver("real route needs real couplings".into()));
                }
                real_ground(&hm, self.zero_mode_tol)?
            }
            GroundRoute::Canonical | GroundRoute::Auto => canonical_ground(&hm, self.zero_mode_tol)?,
        };
        Ok(MajoranaCovariance::from_trusted(gamma, 0))
    }
}

/// Pure covariance of the ground state, sites labelled `0..L`.
pub fn ground_covariance(h: &QuadraticHamiltonian) -> Result<MajoranaCovariance> {
    GroundSolver::default().solve(h)
}

/// Nonnegative mode energies `lambda_k` (canonical values of `h`), ascending.
/// The one-particle matrix `(i/2) h` has eigenvalues `+- lambda_k / 2`.
pub fn excitation_energies(h: &QuadraticHamiltonian) -> Result<Vec<f64>> {
    let hm = h.majorana_matrix();
    let mut v = if is_even_odd(&hm) {
        let x = even_odd_block(&hm);
        x.singular_values().map_err(|e| Error::Solver(format!("{e:?}")))?
    } else {
        canonical_form(&hm)?.values
    };
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(v)
}

/// `-(1/2) sum_k lambda_k`, the sum of the negative one-particle eigenvalues.
pub fn ground_energy(h: &QuadraticHamiltonian) -> Result<f64> {
    Ok(-0.5 * excitation_energies(h)?.iter().sum::<f64>())
}

fn zero_mode_check(half_values: &[f64], rel_tol: f64) -> Result<()> {
    let norm = half_values.iter().cloned().fold(0.0, f64::max);
    let tol = rel_tol * norm;
    let bad: Vec<f64> = half_values.iter().cloned().filter(|&v| v.abs() < tol).collect();
    if norm == 0.0 || !bad.is_empty() {
        return Err(Error::DegenerateGroundState {
            eigenvalues: if bad.is_empty() { half_values.to_vec() } else { bad },
            tolerance: tol,
        });
    }
    Ok(())
}

fn is_even_odd(h: &AntisymmetricMatrix) -> bool {
    let n = h.dim() / 2;
    let m = h.as_mat();
    (0..n).all(|i| (0..n).all(|j| m[(2 * i, 2 * j)] == 0.0 && m[(2 * i + 1, 2 * j + 1)] == 0.0))
}

fn even_odd_block(h: &AntisymmetricMatrix) -> Mat<f64> {
    let n = h.dim() / 2;
    let m = h.as_mat();
    Mat::from_fn(n, n, |i, j| m[(2 * i, 2 * j + 1)])
}

/// `h = [[0, X], [-X^T, 0]]` in (even, odd) order; with `X = U S V^T` the
/// ground covariance has `gamma_{2i, 2j+1} = -(U V^T)_ij`.
fn real_ground(h: &AntisymmetricMatrix, rel_tol: f64) -> Result<AntisymmetricMatrix> {
    let n = h.dim() / 2;
    let x = even_odd_block(h);
    let svd = x.svd().map_err(|e| Error::Solver(format!("{e:?}")))?;
    let s: Vec<f64> = (0..n).map(|i| 0.5 * svd.S()[i]).collect();
    zero_mode_check(&s, rel_tol)?;
    let w = svd.U() * svd.V().transpose();
    let mut g = Mat::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            g[(2 * i, 2 * j + 1)] = -w[(i, j)];
            g[(2 * j + 1, 2 * i)] = w[(i, j)];
        }
    }
    Ok(AntisymmetricMatrix::symmetrized(&g))
}

/// `O^T h O = D` gives `gamma = -O (+) J2 O^T`.
fn canonical_ground(h: &AntisymmetricMatrix, rel_tol: f64) -> Result<AntisymmetricMatrix> {
    let cf = canonical_form(h)?;
    let half: Vec<f64> = cf.values.iter().map(|v| 0.5 * v).collect();
    zero_mode_check(&half, rel_tol)?;
    let n = h.dim();
    let k = n / 2;
    let o = &cf.orthogonal;
    let x = Mat::from_fn(n, k, |r, c| o[(r, 2 * c)]);
    let y = Mat::from_fn(n, k, |r, c| o[(r, 2 * c + 1)]);
    let xy = &x * y.transpose();
    let g = Mat::from_fn(n, n, |r, c| -(xy[(r, c)] - xy[(c, r)]));
    Ok(AntisymmetricMatrix::symmetrized(&g))
}

/// `t[r][a][b] = h_{(0,a),(r,b)}` for a circulant two-band Majorana matrix,
/// `None` when `h` is not translation invariant.
pub(crate) fn circulant_symbol(h: &AntisymmetricMatrix) -> Option<Vec<[[f64; 2]; 2]>> {
    let l = h.dim() / 2;
    if l == 0 {
        return None;
    }
    let m = h.as_mat();
    let t: Vec<[[f64; 2]; 2]> = (0..l)
        .map(|r| {
            [
                [m[(0, 2 * r)], m[(0, 2 * r + 1)]],
                [m[(1, 2 * r)], m[(1, 2 * r + 1)]],
            ]
        })
        .collect();
    let tol = 1e-14 * h.max_abs().max(1.0);
    for x in 0..l {
        for y in 0..l {
            let r = (y + l - x) % l;
            for a in 0..2 {
                for b in 0..2 {
                    if (m[(2 * x + a, 2 * y + b)] - t[r][a][b]).abs() > tol {
                        return None;
                    }
                }
            }
        }
    }
    Some(t)
}

/// Hermitian 2x2 `[[p, q], [conj q, s]]`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Herm2 {
    pub p: f64,
    pub s: f64,
    pub q: Complex64,
}

impl Herm2 {
    pub fn eigenvalues(&self) -> (f64, f64) {
        let d0 = 0.5 * (self.p + self.s);
        let dz = 0.5 * (self.p - self.s);
        let r = (dz * dz + self.q.norm_sqr()).sqrt();
        (d0 - r, d0 + r)
    }

    /// `sign(M)`; the caller has excluded zero eigenvalues.
    pub fn sign(&self) -> [[Complex64; 2]; 2] {
        let d0 = 0.5 * (self.p + self.s);
        let dz = 0.5 * (self.p - self.s);
        let r = (dz * dz + self.q.norm_sqr()).sqrt();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        if d0 >= r {
            [[one, zero], [zero, one]]
        } else if d0 <= -r {
            [[-one, zero], [zero, -one]]
        } else {
            [
                [Complex64::new(dz / r, 0.0), self.q / r],
                [self.q.conj() / r, Complex64::new(-dz / r, 0.0)],
            ]
        }
    }
}

/// `i h(k)` with `h(k)_ab = sum_r t_ab(r) e^{ikr}`.
pub(crate) fn bloch_block(t: &[[[f64; 2]; 2]], k: f64) -> Herm2 {
    let mut hk = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (r, tr) in t.iter().enumerate() {
        if tr.iter().all(|row| row.iter().all(|&v| v == 0.0)) {
            continue;
        }
        let ph = Complex64::from_polar(1.0, k * r as f64);
        for a in 0..2 {
            for b in 0..2 {
                hk[a][b] += tr[a][b] * ph;
            }
        }
    }
    let i = Complex64::new(0.0, 1.0);
    Herm2 {
        p: (i * hk[0][0]).re,
        s: (i * hk[1][1]).re,
        q: i * hk[0][1],
    }
}

/// Momentum-space ground covariance of a translation-invariant ring:
/// `gamma(k) = i sign(i h(k))`, transformed back in `O(L^2)`.
fn bloch_ground(t: &[[[f64; 2]; 2]], exec: Execution, rel_tol: f64) -> Result<AntisymmetricMatrix> {
    let l = t.len();
    let two_pi = 2.0 * std::f64::consts::PI;
    let blocks: Vec<Herm2> = parallel::map_range(exec, l, |m| bloch_block(t, two_pi * m as f64 / l as f64));
    let mut half = Vec::with_capacity(2 * l);
    for b in &blocks {
        let (lo, hi) = b.eigenvalues();
        half.push(0.5 * lo);
        half.push(0.5 * hi);
    }
    zero_mode_check(&half, rel_tol)?;
    let i = Complex64::new(0.0, 1.0);
    let gk: Vec<[[Complex64; 2]; 2]> = blocks
        .iter()
        .map(|b| {
            let s = b.sign();
            [[i * s[0][0], i * s[0][1]], [i * s[1][0], i * s[1][1]]]
        })
        .collect();
    let roots: Vec<Complex64> = (0..l)
        .map(|m| Complex64::from_polar(1.0, -two_pi * m as f64 / l as f64))
        .collect();
    // g(r) = (1/L) sum_m gamma(k_m) e^{-i k_m r}
    let g: Vec<[[f64; 2]; 2]> = parallel::map_range(exec, l, |r| {
        let mut acc = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (m, gm) in gk.iter().enumerate() {
            let w = roots[(m * r) % l];
            for a in 0..2 {
                for b in 0..2 {
                    acc[a][b] += gm[a][b] * w;
                }
            }
        }
        let inv = 1.0 / l as f64;
        [
            [acc[0][0].re * inv, acc[0][1].re * inv],
            [acc[1][0].re * inv, acc[1][1].re * inv],
        ]
    });
    let n = 2 * l;
    let m = Mat::from_fn(n, n, |p, q| {
        let (x, a) = (p / 2, p % 2);
        let (y, b) = (q / 2, q % 2);
        g[(y + l - x) % l][a][b]
    });
    Ok(AntisymmetricMatrix::symmetrized(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quasifree::catalog::{build_model, params};

    fn max_diff(a: &MajoranaCovariance, b: &MajoranaCovariance) -> f64 {
        let n = a.majoranas();
        let mut d = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                d = d.max((a.get(i, j) - b.get(i, j)).abs());
            }
        }
        d
    }

    #[test]
    fn trivial_chain_ground_is_the_vacuum() {
        let h = build_model("trivial", 5, &params([("mu", 1.0)]), Boundary::Open).unwrap();
        let g = ground_covariance(&h).unwrap();
        assert!(max_diff(&g, &MajoranaCovariance::vacuum(5, 0)) < 1e-14);
        for x in 0..5 {
            assert!((g.occupation_sign(x).unwrap() + 1.0).abs() < 1e-14);
        }
        assert!((ground_energy(&h).unwrap() + 5.0).abs() < 1e-12);
    }

    #[test]
    fn critical_ring_is_rejected() {
        let h = build_model("kitaev", 12, &params([("J", 1.0), ("lambda", 1.0)]), Boundary::Ring).unwrap();
        // the periodic ring at lambda = J has a k = 0 zero mode
        for route in [GroundRoute::Auto, GroundRoute::RealSvd, GroundRoute::Canonical] {
            let r = GroundSolver::new(route, Execution::Sequential).solve(&h);
            assert!(matches!(r, Err(Error::DegenerateGroundState { .. })), "{route:?}");
        }
    }

    #[test]
    fn three_routes_agree_on_a_ring() {
        let h = build_model("xy", 16, &params([("gamma", 0.6), ("lambda", 0.4)]), Boundary::Ring).unwrap();
        let solve = |r| GroundSolver::new(r, Execution::Sequential).solve(&h).unwrap();
        let a = solve(GroundRoute::Bloch);
        let b = solve(GroundRoute::RealSvd);
        let c = solve(GroundRoute::Canonical);
        assert!(max_diff(&a, &b) < 1e-10);
        assert!(max_diff(&a, &c) < 1e-10);
        assert!(a.purity_residual() < 1e-10);
        let e = a.energy(&h.majorana_matrix()).unwrap();
        assert!((e - ground_energy(&h).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn kitaev_ring_bond_pairings() {
        let h = build_model("kitaev", 8, &params([("J", 1.0), ("lambda", 0.0)]), Boundary::Ring).unwrap();
        let g = ground_covariance(&h).unwrap();
        // <-i a_{2j+1} a_{2j+2}> = -gamma_{2j+1, 2j+2}
        for j in 0..7 {
            assert!((-g.get(2 * j + 1, 2 * j + 2) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn projection_identities() {
        let v = MajoranaCovariance::vacuum(3, 0);
        let e = covariance_to_projection(&v).unwrap();
        let e2 = &e * &e;
        let mut trace = Complex64::new(0.0, 0.0);
        for i in 0..6 {
            trace += e[(i, i)];
            for j in 0..6 {
                assert!((e2[(i, j)] - e[(i, j)]).norm() < 1e-14);
                // J E J = 1 - E with J complex conjugation
                let d = if i == j { 1.0 } else { 0.0 };
                assert_eq!(e[(i, j)].conj(), Complex64::new(d, 0.0) - e[(i, j)]);
            }
        }
        assert!((trace.re - 3.0).abs() < 1e-14);
        let zero = MajoranaCovariance::new(AntisymmetricMatrix::zeros(6), 0).unwrap();
        assert!(matches!(
            covariance_to_projection(&zero),
            Err(Error::ImpureCovariance { .. })
        ));
    }

    #[test]
    fn particle_hole_flip_fills_a_site() {
        let v = MajoranaCovariance::vacuum(3, 0);
        let mut o = Mat::<f64>::identity(6, 6);
        // a_2 <-> a_3 with a sign keeps O orthogonal and flips gamma_23
        o[(2, 2)] = 0.0;
        o[(3, 3)] = 0.0;
        o[(2, 3)] = 1.0;
        o[(3, 2)] = 1.0;
        let g = bogoliubov_transform(&v, &o).unwrap();
        assert!((g.occupation_sign(1).unwrap() - 1.0).abs() < 1e-15);
        assert!((g.occupation_sign(0).unwrap() + 1.0).abs() < 1e-15);
        let mut bad = Mat::<f64>::identity(6, 6);
        bad[(0, 0)] = 2.0;
        assert!(matches!(bogoliubov_transform(&v, &bad), Err(Error::NotOrthogonal { .. })));
    }

    #[test]
    fn graded_product_zeroes_cross_blocks_and_is_idempotent() {
        let h = build_model("kitaev", 10, &params([("J", 1.0), ("lambda", 0.5)]), Boundary::Ring).unwrap();
        let g = ground_covariance(&h).unwrap();
        let cut = SelfDualCut::new(5);
        let p = graded_product(&g, cut);
        for i in 0..10 {
            for j in 10..20 {
                assert_eq!(p.get(i, j), 0.0);
            }
        }
        assert!(max_diff(&graded_product(&p, cut), &p) == 0.0);
        assert!(max_diff(&graded_product(&MajoranaCovariance::vacuum(4, 0), SelfDualCut::new(2)), &MajoranaCovariance::vacuum(4, 0)) == 0.0);
        let theta = cut.theta_minus(&g);
        assert_eq!(theta[9], -1.0);
        assert_eq!(theta[10], 1.0);
    }

    #[test]
    fn contraction_bound_is_enforced() {
        let big = AntisymmetricMatrix::from_upper(2, &[1.5]).unwrap();
        assert!(matches!(
            MajoranaCovariance::new(big, 0),
            Err(Error::InvalidCovariance { .. })
        ));
    }
}
