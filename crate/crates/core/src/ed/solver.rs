use faer::{Mat, Side};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{basis_parity, EdOperator};
use crate::error::{Error, Result};
use crate::jw::Parity;

/// Absolute gap below which the ground state is flagged as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;
/// Largest sector solved with a dense eigendecomposition.
const DENSE_LIMIT: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParitySector {
    Even,
    Odd,
    Mixed,
}

#[derive(Debug, Clone)]
pub struct EdState {
    pub sites: usize,
    /// Ground vector, unit norm, largest component real positive.
    pub vector: Vec<Complex64>,
    pub energy: f64,
    /// `E_1 - E_0` counting multiplicity.
    pub gap: f64,
    pub parity_sector: ParitySector,
    /// A few lowest levels in ascending order, as found by the solver.
    pub levels: Vec<f64>,
}

struct SectorResult {
    levels: Vec<f64>,
    vector: Vec<Complex64>,
}

/// Lowest eigenpair of a Hermitian operator, split into parity sectors when
/// the operator is even.
pub fn ed_ground(op: &EdOperator) -> Result<EdState> {
    if !op.is_hermitian() {
        return Err(Error::Solver("operator is not Hermitian".into()));
    }
    let dim = op.dim();
    let sectors: Vec<(Option<Parity>, Vec<usize>)> = if op.parity() == Some(Parity::Even) {
        let even: Vec<usize> = (0..dim).filter(|&b| basis_parity(b) == Parity::Even).collect();
        let odd: Vec<usize> = (0..dim).filter(|&b| basis_parity(b) == Parity::Odd).collect();
        vec![(Some(Parity::Even), even), (Some(Parity::Odd), odd)]
    } else {
        vec![(None, (0..dim).collect())]
    };

    let mut results = Vec::with_capacity(sectors.len());
    for (parity, basis) in &sectors {
        let r = if basis.len() <= DENSE_LIMIT {
            dense_sector(op, basis)?
        } else {
            lanczos_sector(op, basis)?
        };
        results.push((*parity, basis, r));
    }

    let mut all: Vec<f64> = results.iter().flat_map(|r| r.2.levels.iter().cloned()).collect();
    all.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let energy = all[0];
    let gap = all.get(1).map(|e| e - energy).unwrap_or(0.0);

    // ground sector: the one holding the lowest level (even wins ties)
    let (best_parity, basis, best) = results
        .iter()
        .min_by(|a, b| a.2.levels[0].partial_cmp(&b.2.levels[0]).unwrap())
        .unwrap();
    let mut vector = vec![Complex64::new(0.0, 0.0); dim];
    for (k, &b) in basis.iter().enumerate() {
        vector[b] = best.vector[k];
    }
    fix_global_phase(&mut vector);

    let parity_sector = if gap < DEGENERACY_TOL {
        ParitySector::Mixed
    } else {
        match best_parity {
            Some(Parity::Even) => ParitySector::Even,
            Some(Parity::Odd) => ParitySector::Odd,
            None => ParitySector::Mixed,
        }
    };
    all.truncate(8);
    Ok(EdState {
        sites: op.sites(),
        vector,
        energy,
        gap: gap.max(0.0),
        parity_sector,
        levels: all,
    })
}

fn fix_global_phase(v: &mut [Complex64]) {
    let max = v.iter().fold(0.0f64, |m, z| m.max(z.norm()));
    if max == 0.0 {
        return;
    }
    let k = v.iter().position(|z| z.norm() >= max * (1.0 - 1e-9)).unwrap();
    let phase = v[k].conj() / v[k].norm();
    for z in v.iter_mut() {
        *z *= phase;
    }
}

fn sector_index(dim: usize, basis: &[usize]) -> Vec<usize> {
    let mut idx = vec![usize::MAX; dim];
    for (k, &b) in basis.iter().enumerate() {
        idx[b] = k;
    }
    idx
}

fn dense_sector(op: &EdOperator, basis: &[usize]) -> Result<SectorResult> {
    let n = basis.len();
    let idx = sector_index(op.dim(), basis);
    let solver_err = |e| Error::Solver(format!("{e:?}"));
    if op.is_real() {
        let mut m = Mat::<f64>::zeros(n, n);
        for (k, &b) in basis.iter().enumerate() {
            for (c, v) in op.row(b) {
                m[(k, idx[c])] = v.re;
            }
        }
        let eig = m.self_adjoint_eigen(Side::Lower).map_err(solver_err)?;
        let levels: Vec<f64> = (0..n.min(4)).map(|i| eig.S()[i]).collect();
        let vector = (0..n).map(|r| Complex64::new(eig.U()[(r, 0)], 0.0)).collect();
        Ok(SectorResult { levels, vector })
    } else {
        let mut m = Mat::<Complex64>::zeros(n, n);
        for (k, &b) in basis.iter().enumerate() {
            for (c, v) in op.row(b) {
                m[(k, idx[c])] = v;
            }
        }
        let eig = m.self_adjoint_eigen(Side::Lower).map_err(solver_err)?;
        let levels: Vec<f64> = (0..n.min(4)).map(|i| eig.S()[i].re).collect();
        let vector = (0..n).map(|r| eig.U()[(r, 0)]).collect();
        Ok(SectorResult { levels, vector })
    }
}

/// Lanczos with full reorthogonalization; returns the two lowest Ritz values
/// and the lowest Ritz vector once both have converged.
fn lanczos_sector(op: &EdOperator, basis: &[usize]) -> Result<SectorResult> {
    let n = basis.len();
    let idx = sector_index(op.dim(), basis);
    let apply = |x: &[Complex64]| -> Vec<Complex64> {
        basis
            .iter()
            .map(|&b| op.row(b).map(|(c, v)| v * x[idx[c]]).sum())
            .collect()
    };
    // deterministic, dense start vector
    let mut q: Vec<Complex64> = (0..n)
        .map(|k| Complex64::new(1.0 + ((k * 7919) % 101) as f64 / 101.0, ((k * 104729) % 37) as f64 / 370.0))
        .collect();
    normalize(&mut q);
    let max_iter = n.min(400);
    let mut qs: Vec<Vec<Complex64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut prev_levels: Option<(f64, f64)> = None;
    for it in 0..max_iter {
        let mut w = apply(&q);
        let a = super::inner(&q, &w).re;
        for (wi, qi) in w.iter_mut().zip(&q) {
            *wi -= a * qi;
        }
        if let (Some(prev), Some(&b)) = (qs.last(), beta.last()) {
            for (wi, pi) in w.iter_mut().zip(prev) {
                *wi -= b * pi;
            }
        }
        qs.push(q.clone());
        alpha.push(a);
        // full reorthogonalization, twice
        for _ in 0..2 {
            for v in &qs {
                let d = super::inner(v, &w);
                for (wi, vi) in w.iter_mut().zip(v) {
                    *wi -= d * vi;
                }
            }
        }
        let b = norm(&w);
        let (vals, vecs) = tridiag_eigen(&alpha, &beta)?;
        let lo = (vals[0], *vals.get(1).unwrap_or(&f64::INFINITY));
        let converged = match prev_levels {
            Some(p) => (p.0 - lo.0).abs() < 1e-13 * lo.0.abs().max(1.0) && (p.1 - lo.1).abs() < 1e-12 * lo.1.abs().max(1.0),
            None => false,
        };
        prev_levels = Some(lo);
        if converged || b < 1e-12 || it + 1 == max_iter {
            let mut vector = vec![Complex64::new(0.0, 0.0); n];
            for (j, qj) in qs.iter().enumerate() {
                let c = vecs[j];
                for (x, y) in vector.iter_mut().zip(qj) {
                    *x += c * y;
                }
            }
            normalize(&mut vector);
            let mut levels = vec![lo.0];
            if lo.1.is_finite() {
                levels.push(lo.1);
            }
            return Ok(SectorResult { levels, vector });
        }
        beta.push(b);
        q = w.into_iter().map(|x| x / b).collect();
    }
    unreachable!()
}

/// Eigenvalues of the symmetric tridiagonal matrix and the lowest eigenvector.
fn tridiag_eigen(alpha: &[f64], beta: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let m = alpha.len();
    let t = Mat::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j {
            beta[i]
        } else if j + 1 == i {
            beta[j]
        } else {
            0.0
        }
    });
    let eig = t
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    let vals = (0..m).map(|i| eig.S()[i]).collect();
    let vec = (0..m).map(|i| eig.U()[(i, 0)]).collect();
    Ok((vals, vec))
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = norm(v);
    for z in v.iter_mut() {
        *z /= n;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jw::{Pauli, PauliString};
    use crate::quasifree::{build_model, ground_energy, params, Boundary};

    #[test]
    fn trivial_chain_ground() {
        let h = build_model("trivial", 4, &params([("mu", 0.75)]), Boundary::Open).unwrap();
        let s = ed_ground(&EdOperator::from_hamiltonian(&h).unwrap()).unwrap();
        assert!((s.energy + 3.0).abs() < 1e-12);
        assert!((s.gap - 1.5).abs() < 1e-12);
        assert!((s.vector[0].re - 1.0).abs() < 1e-12);
        assert_eq!(s.parity_sector, ParitySector::Even);
    }

    #[test]
    fn open_kitaev_energy_matches_quasi_free() {
        let h = build_model("kitaev", 8, &params([("J", 1.0), ("lambda", 0.0)]), Boundary::Open).unwrap();
        let s = ed_ground(&EdOperator::from_hamiltonian(&h).unwrap()).unwrap();
        assert!((s.energy - ground_energy(&h).unwrap()).abs() < 1e-10);
        // exact edge zero mode: both parity sectors hold a ground state
        assert_eq!(s.parity_sector, ParitySector::Mixed);
    }

    #[test]
    fn spin_ring_has_a_near_degenerate_pair() {
        let l = 8;
        let mut terms = Vec::new();
        for k in 0..l {
            let a = PauliString::single(0, l, k as i64, Pauli::X);
            let b = PauliString::single(0, l, ((k + 1) % l) as i64, Pauli::X);
            terms.push((&a * &b).with_coeff(Complex64::new(-1.0, 0.0)));
        }
        let s = ed_ground(&EdOperator::from_pauli(l, &terms).unwrap()).unwrap();
        assert!((s.energy + 8.0).abs() < 1e-12);
        assert_eq!(s.parity_sector, ParitySector::Mixed);
    }

    #[test]
    fn lanczos_agrees_with_dense() {
        let h = build_model("xy", 13, &params([("gamma", 0.5), ("lambda", 0.7)]), Boundary::Open).unwrap();
        let op = EdOperator::from_hamiltonian(&h).unwrap();
        let s = ed_ground(&op).unwrap();
        assert!((s.energy - ground_energy(&h).unwrap()).abs() < 1e-9);
        let hv = op.matvec(&s.vector);
        let res: f64 = hv
            .iter()
            .zip(&s.vector)
            .map(|(a, b)| (a - s.energy * b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(res < 1e-6);
    }
}
