//! Finite-volume Jordan-Wigner dictionary.
//!
//! Inside a window `[n, m]` the Majorana generators are represented as
//! `a_{2j} = Z_n ... Z_{j-1} X_j` and `a_{2j+1} = Z_n ... Z_{j-1} Y_j`, so
//! `2 c^dag_j c_j - 1 = Z_j`. Strings are anchored at the window's left edge;
//! an odd monomial carries a [`LeftTail`] marker recording that anchor.

mod monomial;
mod pauli;

pub use monomial::{
    mode_index, mode_site, FermionMonomial, FermionOp, MajoranaExpand, MajoranaMonomial, MajoranaSum, Parity,
    Phase,
};
pub use pauli::{ParsePauliError, Pauli, PauliString};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Closed site interval `[first, last]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteWindow {
    pub first: i64,
    pub last: i64,
}

impl SiteWindow {
    pub fn new(first: i64, last: i64) -> Self {
        assert!(first <= last, "empty window");
        Self { first, last }
    }

    pub fn len(&self) -> usize {
        (self.last - self.first + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, site: i64) -> bool {
        site >= self.first && site <= self.last
    }

    fn check(&self, site: i64) -> Result<()> {
        if self.contains(site) {
            Ok(())
        } else {
            Err(Error::SiteOutsideWindow {
                site,
                first: self.first,
                last: self.last,
            })
        }
    }
}

/// Marker for the half-infinite `Z` string to the left of the window that an
/// odd operator would carry in infinite volume. Two tails with the same
/// anchor cancel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeftTail {
    pub anchor: i64,
}

/// Pauli image of a monomial: a sum of strings, plus the tail marker for odd
/// input.
#[derive(Debug, Clone, PartialEq)]
pub struct JwImage {
    pub terms: Vec<PauliString>,
    pub tail: Option<LeftTail>,
}

impl JwImage {
    /// Graded product; tails cancel pairwise.
    pub fn product(&self, other: &JwImage) -> JwImage {
        let tail = match (self.tail, other.tail) {
            (None, None) => None,
            (Some(t), None) | (None, Some(t)) => Some(t),
            (Some(a), Some(b)) => {
                debug_assert_eq!(a, b, "tails with different anchors");
                None
            }
        };
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a * b);
            }
        }
        JwImage {
            terms: merge_strings(terms),
            tail,
        }
    }

    /// The single string if the image has exactly one term.
    pub fn single(&self) -> Option<&PauliString> {
        match self.terms.as_slice() {
            [s] => Some(s),
            _ => None,
        }
    }
}

/// Image of a single Majorana generator.
fn generator_string(mode: i64, window: SiteWindow) -> PauliString {
    let site = mode_site(mode);
    let mut s = PauliString::identity(window.first, window.len());
    let mut letters: Vec<Pauli> = s.letters().to_vec();
    for l in letters.iter_mut().take((site - window.first) as usize) {
        *l = Pauli::Z;
    }
    letters[(site - window.first) as usize] = if mode % 2 == 0 { Pauli::X } else { Pauli::Y };
    s = PauliString::new(window.first, letters);
    s
}

/// Majorana monomial to a single Pauli string times its tail marker.
pub fn jw_majorana_to_pauli(m: &MajoranaMonomial, window: SiteWindow) -> Result<(PauliString, Option<LeftTail>)> {
    for &mode in m.modes() {
        window.check(mode_site(mode))?;
    }
    let mut out = PauliString::identity(window.first, window.len())
        .with_phase(m.phase())
        .with_coeff(m.coeff());
    for &mode in m.modes() {
        out = &out * &generator_string(mode, window);
    }
    let tail = match m.parity() {
        Parity::Even => None,
        Parity::Odd => Some(LeftTail { anchor: window.first }),
    };
    Ok((out, tail))
}

pub fn jw_fermion_to_pauli(m: &FermionMonomial, window: SiteWindow) -> Result<JwImage> {
    for &(site, _) in m.factors() {
        window.check(site)?;
    }
    let mut terms = Vec::new();
    for t in m.to_majorana().terms() {
        terms.push(jw_majorana_to_pauli(t, window)?.0);
    }
    let tail = match m.parity() {
        Parity::Even => None,
        Parity::Odd => Some(LeftTail { anchor: window.first }),
    };
    Ok(JwImage {
        terms: merge_strings(terms),
        tail,
    })
}

/// Pauli string to a Majorana monomial with exact phase, using
/// `X_j = S_j a_{2j}`, `Y_j = S_j a_{2j+1}`, `Z_j = -i a_{2j} a_{2j+1}` and
/// `S_j = Z_first ... Z_{j-1}`.
pub fn jw_pauli_to_majorana(p: &PauliString) -> MajoranaMonomial {
    let mut out = MajoranaMonomial::identity()
        .with_phase(p.phase())
        .with_coeff(p.coeff());
    let first = p.first();
    // sites are processed left to right; the string S_j is accumulated as a
    // monomial so that each letter can be rewritten independently
    for (k, &letter) in p.letters().iter().enumerate() {
        let j = first + k as i64;
        let e = mode_index(j, false);
        let o = mode_index(j, true);
        let factor = match letter {
            Pauli::I => continue,
            Pauli::Z => MajoranaMonomial::from_ordered([e, o]).with_phase(Phase::MINUS_I),
            Pauli::X | Pauli::Y => {
                // S_j = prod_{first <= l < j} (-i a_{2l} a_{2l+1})
                let mut modes = Vec::with_capacity(2 * k + 1);
                for l in first..j {
                    modes.push(mode_index(l, false));
                    modes.push(mode_index(l, true));
                }
                modes.push(if letter == Pauli::X { e } else { o });
                MajoranaMonomial::from_ordered(modes).with_phase(Phase::from_power(-(k as i64)))
            }
        };
        out = &out * &factor;
    }
    out
}

/// Inverse map, returned as a monomial in Majorana factors.
pub fn jw_pauli_to_fermion(p: &PauliString) -> FermionMonomial {
    let m = jw_pauli_to_majorana(p);
    let factors = m
        .modes()
        .iter()
        .map(|&mode| {
            let kind = if mode % 2 == 0 {
                FermionOp::MajoranaEven
            } else {
                FermionOp::MajoranaOdd
            };
            (mode_site(mode), kind)
        })
        .collect();
    FermionMonomial::new(factors)
        .with_phase(m.phase())
        .with_coeff(m.coeff())
}

pub fn parity(m: &FermionMonomial) -> Parity {
    m.parity()
}

/// Sums strings with identical letters; drops exact zeros.
pub fn merge_strings(mut terms: Vec<PauliString>) -> Vec<PauliString> {
    let mut out: Vec<PauliString> = Vec::with_capacity(terms.len());
    for t in terms.drain(..) {
        if let Some(existing) = out.iter_mut().find(|e| e.same_letters(&t)) {
            let w = existing.weight() + t.weight();
            let bare = PauliString::new(existing.first(), existing.letters().to_vec());
            *existing = bare.with_coeff(w);
        } else {
            out.push(t);
        }
    }
    out.retain(|t| t.coeff() != Complex64::new(0.0, 0.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(n: i64, m: i64) -> SiteWindow {
        SiteWindow::new(n, m)
    }

    #[test]
    fn occupation_sign_maps_to_z() {
        let img = jw_fermion_to_pauli(&FermionMonomial::occupation_sign(2), w(0, 3)).unwrap();
        assert!(img.tail.is_none());
        assert_eq!(img.single().unwrap().to_string(), "Z2");
    }

    #[test]
    fn string_operator_maps_to_z_product() {
        let img = jw_fermion_to_pauli(&FermionMonomial::string(0, 3), w(0, 4)).unwrap();
        assert_eq!(img.single().unwrap().to_string(), "Z0 Z1 Z2");
    }

    #[test]
    fn adjacent_x_pair() {
        // (c0 + c0^dag)(c1 + c1^dag) = a0 a2 = (X0 Z0) X1 = -i Y0 X1
        let m = &FermionMonomial::majorana_even(0) * &FermionMonomial::majorana_even(1);
        let img = jw_fermion_to_pauli(&m, w(0, 1)).unwrap();
        assert_eq!(img.single().unwrap().to_string(), "-i Y0 X1");
    }

    #[test]
    fn odd_monomial_has_tail() {
        let img = jw_fermion_to_pauli(&FermionMonomial::cdag(1), w(0, 2)).unwrap();
        assert_eq!(img.tail, Some(LeftTail { anchor: 0 }));
        let both = img.product(&jw_fermion_to_pauli(&FermionMonomial::c(2), w(0, 2)).unwrap());
        assert!(both.tail.is_none());
    }

    #[test]
    fn outside_window_is_an_error() {
        let e = jw_fermion_to_pauli(&FermionMonomial::c(5), w(0, 3));
        assert!(matches!(e, Err(Error::SiteOutsideWindow { site: 5, .. })));
    }

    #[test]
    fn z_maps_back_to_occupation_sign() {
        let p: PauliString = "Z3".parse().unwrap();
        let m = jw_pauli_to_majorana(&p);
        assert_eq!(m.modes(), &[6, 7]);
        assert_eq!(m.weight(), Complex64::new(0.0, -1.0));
        let id = jw_pauli_to_fermion(&PauliString::identity(0, 2));
        assert!(id.factors().is_empty());
        assert_eq!(id.weight(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn round_trip_x_with_anchor() {
        let p = PauliString::new(0, vec![Pauli::I, Pauli::Z, Pauli::X, Pauli::Y]);
        let f = jw_pauli_to_fermion(&p);
        let back = jw_fermion_to_pauli(&f, w(0, 3)).unwrap();
        assert_eq!(back.single().unwrap(), &p);
    }
}
