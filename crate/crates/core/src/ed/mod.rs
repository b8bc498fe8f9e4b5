//! Exact diagonalization in the occupation basis.
//!
//! Basis state `b` has bit `j` set when site `j` is occupied. The Pauli
//! letters act as `X` = bit flip, `Z = diag(2 b_j - 1)`, `Y = i X Z`, and the
//! fermion operators follow the Jordan-Wigner convention of [`crate::jw`]:
//! `c_j = S_j X_j (1 + Z_j) / 2` with `S_j = prod_{k<j} Z_k`, so moving past
//! site `k < j` costs a factor `2 b_k - 1` (a sign for every empty site).

mod operator;
mod solver;

pub use operator::{EdOperator, EdTerm};
pub use solver::{ed_ground, EdState, ParitySector, DEGENERACY_TOL};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::jw::{FermionMonomial, FermionOp, MajoranaMonomial, Pauli, PauliString, Parity};

pub const MAX_SITES: usize = 14;

pub(crate) fn check_sites(sites: usize) -> Result<()> {
    if sites > MAX_SITES || sites == 0 {
        return Err(Error::DimensionOverflow {
            sites,
            max: MAX_SITES,
        });
    }
    Ok(())
}

/// `(2 b_k - 1)` multiplied over `k < j`.
fn string_sign(b: usize, j: usize) -> f64 {
    let below = b & ((1usize << j) - 1);
    let empty = j as u32 - below.count_ones();
    if empty.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn bit(b: usize, j: usize) -> bool {
    (b >> j) & 1 == 1
}

/// Action of a single fermion factor on a basis state.
fn act_factor(site: usize, kind: FermionOp, b: usize) -> Option<(Complex64, usize)> {
    let s = string_sign(b, site);
    let occ = bit(b, site);
    let flipped = b ^ (1 << site);
    match kind {
        FermionOp::Create if occ => None,
        FermionOp::Create => Some((Complex64::new(s, 0.0), flipped)),
        FermionOp::Annihilate if !occ => None,
        FermionOp::Annihilate => Some((Complex64::new(s, 0.0), flipped)),
        FermionOp::MajoranaEven => Some((Complex64::new(s, 0.0), flipped)),
        // i (c - c^dag): +i on occupied, -i on empty
        FermionOp::MajoranaOdd => Some((Complex64::new(0.0, if occ { s } else { -s }), flipped)),
    }
}

fn site_index(site: i64, sites: usize) -> Result<usize> {
    if site < 0 || site >= sites as i64 {
        return Err(Error::SiteOutsideWindow {
            site,
            first: 0,
            last: sites as i64 - 1,
        });
    }
    Ok(site as usize)
}

/// Basis action of a fermion monomial; factors act right to left.
pub(crate) fn act_fermion(m: &FermionMonomial, sites: usize, b: usize) -> Result<Option<(Complex64, usize)>> {
    let mut amp = m.weight();
    let mut state = b;
    for &(site, kind) in m.factors().iter().rev() {
        let j = site_index(site, sites)?;
        match act_factor(j, kind, state) {
            None => return Ok(None),
            Some((a, s)) => {
                amp *= a;
                state = s;
            }
        }
    }
    Ok(Some((amp, state)))
}

pub(crate) fn act_majorana(m: &MajoranaMonomial, sites: usize, b: usize) -> Result<(Complex64, usize)> {
    let mut amp = m.weight();
    let mut state = b;
    for &mode in m.modes().iter().rev() {
        let j = site_index(mode.div_euclid(2), sites)?;
        let kind = if mode % 2 == 0 {
            FermionOp::MajoranaEven
        } else {
            FermionOp::MajoranaOdd
        };
        let (a, s) = act_factor(j, kind, state).expect("Majorana factors never annihilate");
        amp *= a;
        state = s;
    }
    Ok((amp, state))
}

pub(crate) fn act_pauli(p: &PauliString, sites: usize, b: usize) -> Result<(Complex64, usize)> {
    let mut amp = p.weight();
    let mut state = b;
    for (k, &letter) in p.letters().iter().enumerate() {
        if letter == Pauli::I {
            continue;
        }
        let j = site_index(p.first() + k as i64, sites)?;
        let z = if bit(state, j) { 1.0 } else { -1.0 };
        match letter {
            Pauli::X => state ^= 1 << j,
            Pauli::Z => amp *= z,
            Pauli::Y => {
                amp *= Complex64::new(0.0, z);
                state ^= 1 << j;
            }
            Pauli::I => {}
        }
    }
    Ok((amp, state))
}

/// Something with a basis-state action: fermion monomials and sums of them,
/// Majorana monomials and Pauli strings.
pub trait EdObservable {
    fn terms(&self) -> Vec<EdTerm>;
}

impl EdObservable for FermionMonomial {
    fn terms(&self) -> Vec<EdTerm> {
        vec![EdTerm::Fermion(self.clone())]
    }
}

impl EdObservable for [FermionMonomial] {
    fn terms(&self) -> Vec<EdTerm> {
        self.iter().map(|m| EdTerm::Fermion(m.clone())).collect()
    }
}

impl EdObservable for Vec<FermionMonomial> {
    fn terms(&self) -> Vec<EdTerm> {
        self.as_slice().terms()
    }
}

impl EdObservable for MajoranaMonomial {
    fn terms(&self) -> Vec<EdTerm> {
        vec![EdTerm::Majorana(self.clone())]
    }
}

impl EdObservable for PauliString {
    fn terms(&self) -> Vec<EdTerm> {
        vec![EdTerm::Pauli(self.clone())]
    }
}

impl EdObservable for [PauliString] {
    fn terms(&self) -> Vec<EdTerm> {
        self.iter().map(|p| EdTerm::Pauli(p.clone())).collect()
    }
}

impl EdObservable for Vec<PauliString> {
    fn terms(&self) -> Vec<EdTerm> {
        self.as_slice().terms()
    }
}

/// `Op |v>` without assembling a matrix.
pub fn apply<O: EdObservable + ?Sized>(op: &O, sites: usize, v: &[Complex64]) -> Result<Vec<Complex64>> {
    check_sites(sites)?;
    if v.len() != 1 << sites {
        return Err(Error::DimensionMismatch {
            expected: 1 << sites,
            found: v.len(),
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
    for t in op.terms() {
        for (b, &amp) in v.iter().enumerate() {
            if amp == Complex64::new(0.0, 0.0) {
                continue;
            }
            if let Some((a, s)) = t.act(sites, b)? {
                out[s] += a * amp;
            }
        }
    }
    Ok(out)
}

/// `<v|Op|v>` for the ground vector of `state`.
pub fn ed_expectation<O: EdObservable + ?Sized>(state: &EdState, op: &O) -> Result<Complex64> {
    let w = apply(op, state.sites, &state.vector)?;
    Ok(inner(&state.vector, &w))
}

pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Parity of a basis state (`+1` for an even number of particles).
pub fn basis_parity(b: usize) -> Parity {
    Parity::from_count(b.count_ones() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jw::Phase;

    #[test]
    fn car_relations_hold_on_three_sites() {
        let sites = 3;
        let c = |j: i64| FermionMonomial::c(j);
        let cd = |j: i64| FermionMonomial::cdag(j);
        for i in 0..3 {
            for j in 0..3 {
                // {c_i, c_j^dag} = delta_ij
                for b in 0..8usize {
                    let mut v = vec![Complex64::new(0.0, 0.0); 8];
                    v[b] = Complex64::new(1.0, 0.0);
                    let x = apply(&vec![&c(i) * &cd(j), &cd(j) * &c(i)], sites, &v).unwrap();
                    for (s, amp) in x.iter().enumerate() {
                        let want = if i == j && s == b { 1.0 } else { 0.0 };
                        assert_eq!(*amp, Complex64::new(want, 0.0));
                    }
                    let y = apply(&vec![&c(i) * &c(j), &c(j) * &c(i)], sites, &v).unwrap();
                    assert!(y.iter().all(|a| *a == Complex64::new(0.0, 0.0)));
                }
            }
        }
    }

    #[test]
    fn majorana_generators_match_pauli_strings() {
        // a_{2j} = Z_0 .. Z_{j-1} X_j, a_{2j+1} = Z_0 .. Z_{j-1} Y_j
        let sites = 3;
        for j in 0..3i64 {
            for odd in [false, true] {
                let m = MajoranaMonomial::from_ordered([2 * j + odd as i64]);
                let mut letters = vec![Pauli::I; 3];
                for l in letters.iter_mut().take(j as usize) {
                    *l = Pauli::Z;
                }
                letters[j as usize] = if odd { Pauli::Y } else { Pauli::X };
                let p = PauliString::new(0, letters);
                for b in 0..8 {
                    assert_eq!(act_majorana(&m, sites, b).unwrap(), act_pauli(&p, sites, b).unwrap());
                }
            }
        }
    }

    #[test]
    fn occupation_sign_is_z() {
        let n = FermionMonomial::occupation_sign(1);
        let z = PauliString::single(0, 2, 1, Pauli::Z);
        for b in 0..4 {
            let (a, s) = act_pauli(&z, 2, b).unwrap();
            let (a2, s2) = act_fermion(&n, 2, b).unwrap().unwrap();
            assert_eq!((a, s), (a2, s2));
        }
        let y = PauliString::single(0, 1, 0, Pauli::Y).with_phase(Phase::ONE);
        // Y |0> = -i |1>
        assert_eq!(act_pauli(&y, 1, 0).unwrap(), (Complex64::new(0.0, -1.0), 1));
    }

    #[test]
    fn site_limits() {
        assert!(check_sites(15).is_err());
        assert!(act_fermion(&FermionMonomial::c(4), 3, 0).is_err());
    }
}
