//! Seeded random instances for property tests, acceptance checks and probes.

use faer::Mat;
use num_complex::Complex64;
use faer::linalg::solvers::DenseSolveCore;
use rand::Rng;

use crate::jw::{FermionMonomial, FermionOp};
use crate::quasifree::{Boundary, MajoranaCovariance, QuadraticHamiltonian};

fn uniform_c<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

/// Dense complex `A` (Hermitian) and `B` (antisymmetric), entries uniform in
/// the unit square.
pub fn quadratic_hamiltonian<R: Rng>(sites: usize, rng: &mut R) -> QuadraticHamiltonian {
    let mut a = Mat::<Complex64>::zeros(sites, sites);
    let mut b = Mat::<Complex64>::zeros(sites, sites);
    for i in 0..sites {
        a[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in i + 1..sites {
            let x = uniform_c(rng);
            a[(i, j)] = x;
            a[(j, i)] = x.conj();
            let y = uniform_c(rng);
            b[(i, j)] = y;
            b[(j, i)] = -y;
        }
    }
    QuadraticHamiltonian::new(a, b, Boundary::Open).expect("constructed Hermitian")
}

/// Random special orthogonal matrix from the QR factorization of a uniform
/// matrix, with the signs of `R`'s diagonal absorbed into `Q`.
pub fn special_orthogonal<R: Rng>(n: usize, rng: &mut R) -> Mat<f64> {
    if n == 0 {
        return Mat::zeros(0, 0);
    }
    let m = Mat::<f64>::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let qr = m.qr();
    let mut q = qr.compute_Q();
    let r = qr.R();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    if q.determinant() < 0.0 {
        for i in 0..n {
            q[(i, 0)] = -q[(i, 0)];
        }
    }
    q
}

/// Orthogonal matrix on the generators of `g` that rotates only the
/// Majoranas of the sites `first..=last` and is the identity elsewhere.
pub fn local_rotation<R: Rng>(g: &MajoranaCovariance, first: i64, last: i64, rng: &mut R) -> Mat<f64> {
    let n = g.majoranas();
    let lo = g.index_of_mode(2 * first).expect("rotation inside the chain");
    let hi = g.index_of_mode(2 * last + 1).expect("rotation inside the chain");
    let block = special_orthogonal(hi - lo + 1, rng);
    Mat::from_fn(n, n, |i, j| {
        if (lo..=hi).contains(&i) && (lo..=hi).contains(&j) {
            block[(i - lo, j - lo)]
        } else if i == j {
            1.0
        } else {
            0.0
        }
    })
}

/// Orthogonal matrix close to the identity: Cayley transform
/// `(1 - K)(1 + K)^{-1}` of a random antisymmetric `K` of size `scale`.
pub fn near_identity_orthogonal<R: Rng>(n: usize, scale: f64, rng: &mut R) -> Mat<f64> {
    let mut k = Mat::<f64>::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let x = scale * rng.random_range(-1.0..1.0);
            k[(i, j)] = x;
            k[(j, i)] = -x;
        }
    }
    let id = Mat::<f64>::identity(n, n);
    let plus = &id + &k;
    let minus = &id - &k;
    let inv = plus.partial_piv_lu().inverse();
    &minus * &inv
}

/// Random complex combination of the 16 Majorana monomials on the sites
/// `j, j + 1` for a random `j`.
pub fn local_probe<R: Rng>(sites: usize, rng: &mut R) -> Vec<FermionMonomial> {
    let j = rng.random_range(0..sites.saturating_sub(1).max(1)) as i64;
    let gens = [
        (j, FermionOp::MajoranaEven),
        (j, FermionOp::MajoranaOdd),
        (j + 1, FermionOp::MajoranaEven),
        (j + 1, FermionOp::MajoranaOdd),
    ];
    let span = if sites >= 2 { 4 } else { 2 };
    (0..1u32 << span)
        .map(|mask| {
            let factors = (0..span).filter(|b| mask >> b & 1 == 1).map(|b| gens[b]).collect();
            FermionMonomial::new(factors).with_coeff(uniform_c(rng))
        })
        .collect()
}

/// Random Majorana monomial of even degree on `sites` sites.
pub fn even_monomial<R: Rng>(sites: usize, max_degree: usize, rng: &mut R) -> FermionMonomial {
    let m = 2 * sites;
    let degree = 2 * rng.random_range(0..=max_degree.min(m) / 2);
    let mut modes: Vec<usize> = Vec::with_capacity(degree);
    while modes.len() < degree {
        let x = rng.random_range(0..m);
        if !modes.contains(&x) {
            modes.push(x);
        }
    }
    let factors = modes
        .into_iter()
        .map(|x| {
            let kind = if x % 2 == 0 {
                FermionOp::MajoranaEven
            } else {
                FermionOp::MajoranaOdd
            };
            ((x / 2) as i64, kind)
        })
        .collect();
    FermionMonomial::new(factors).with_coeff(uniform_c(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::orthogonality_residual;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn orthogonal_generators() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let q = special_orthogonal(9, &mut rng);
        assert!(orthogonality_residual(&q) < 1e-12);
        assert!((q.determinant() - 1.0).abs() < 1e-10);
        let c = near_identity_orthogonal(7, 0.1, &mut rng);
        assert!(orthogonality_residual(&c) < 1e-12);
    }

    #[test]
    fn same_seed_same_instance() {
        let a = quadratic_hamiltonian(4, &mut ChaCha8Rng::seed_from_u64(1));
        let b = quadratic_hamiltonian(4, &mut ChaCha8Rng::seed_from_u64(1));
        assert_eq!(a.hopping(), b.hopping());
        assert_eq!(local_probe(6, &mut ChaCha8Rng::seed_from_u64(2)).len(), 16);
    }
}
