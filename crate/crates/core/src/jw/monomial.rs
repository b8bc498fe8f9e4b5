use std::fmt;
use std::ops::Mul;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Exact phase `i^k`, `k` mod 4.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Phase(u8);

impl Phase {
    pub const ONE: Phase = Phase(0);
    pub const I: Phase = Phase(1);
    pub const MINUS_ONE: Phase = Phase(2);
    pub const MINUS_I: Phase = Phase(3);

    pub fn from_power(k: i64) -> Self {
        Phase(k.rem_euclid(4) as u8)
    }

    pub fn power(self) -> u8 {
        self.0
    }

    pub fn conj(self) -> Self {
        Phase((4 - self.0) % 4)
    }

    pub fn to_complex(self) -> Complex64 {
        match self.0 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        }
    }
}

impl Mul for Phase {
    type Output = Phase;
    fn mul(self, rhs: Phase) -> Phase {
        Phase((self.0 + rhs.0) % 4)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self.0 {
            0 => "+1",
            1 => "+i",
            2 => "-1",
            _ => "-i",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_count(n: usize) -> Self {
        if n.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

/// Majorana generator index: `2 * site` is `c + c^dag`, `2 * site + 1` is
/// `i (c - c^dag)`.
pub fn mode_index(site: i64, odd: bool) -> i64 {
    2 * site + odd as i64
}

pub fn mode_site(mode: i64) -> i64 {
    mode.div_euclid(2)
}

/// `coeff * phase * a_{m1} a_{m2} ...` with strictly increasing modes.
///
/// The phase is tracked exactly; `coeff` is whatever numeric weight the
/// caller attached and is never touched by reordering.
#[derive(Debug, Clone, PartialEq)]
pub struct MajoranaMonomial {
    modes: Vec<i64>,
    phase: Phase,
    coeff: Complex64,
}

impl MajoranaMonomial {
    pub fn identity() -> Self {
        Self {
            modes: Vec::new(),
            phase: Phase::ONE,
            coeff: Complex64::new(1.0, 0.0),
        }
    }

    /// Product `a_{m1} a_{m2} ...` in the given order, brought to canonical
    /// form with `a_p a_q = -a_q a_p` and `a_p^2 = 1`.
    pub fn from_ordered(modes: impl IntoIterator<Item = i64>) -> Self {
        let (modes, phase) = canonicalize(modes.into_iter().collect());
        Self {
            modes,
            phase,
            coeff: Complex64::new(1.0, 0.0),
        }
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = self.phase * phase;
        self
    }

    pub fn with_coeff(mut self, coeff: Complex64) -> Self {
        self.coeff *= coeff;
        self
    }

    pub fn modes(&self) -> &[i64] {
        &self.modes
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn coeff(&self) -> Complex64 {
        self.coeff
    }

    /// Full scalar prefactor `coeff * phase`.
    pub fn weight(&self) -> Complex64 {
        self.coeff * self.phase.to_complex()
    }

    pub fn degree(&self) -> usize {
        self.modes.len()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_count(self.modes.len())
    }

    /// Smallest and largest site touched, `None` for the identity.
    pub fn site_span(&self) -> Option<(i64, i64)> {
        Some((mode_site(*self.modes.first()?), mode_site(*self.modes.last()?)))
    }

    /// Lattice translation by `sites`.
    pub fn translated(&self, sites: i64) -> Self {
        Self {
            modes: self.modes.iter().map(|m| m + 2 * sites).collect(),
            phase: self.phase,
            coeff: self.coeff,
        }
    }

    /// Hermitian adjoint: reverses the product, conjugates the prefactor.
    pub fn adjoint(&self) -> Self {
        let d = self.modes.len();
        // reversing d distinct anticommuting factors costs d(d-1)/2 swaps
        let swaps = (d * d.saturating_sub(1) / 2) as i64;
        Self {
            modes: self.modes.clone(),
            phase: self.phase.conj() * Phase::from_power(2 * swaps),
            coeff: self.coeff.conj(),
        }
    }
}

impl Mul for &MajoranaMonomial {
    type Output = MajoranaMonomial;
    fn mul(self, rhs: &MajoranaMonomial) -> MajoranaMonomial {
        let mut all = self.modes.clone();
        all.extend_from_slice(&rhs.modes);
        let (modes, phase) = canonicalize(all);
        MajoranaMonomial {
            modes,
            phase: self.phase * rhs.phase * phase,
            coeff: self.coeff * rhs.coeff,
        }
    }
}

impl fmt::Display for MajoranaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase)?;
        if self.coeff != Complex64::new(1.0, 0.0) {
            write!(f, "*({})", self.coeff)?;
        }
        for m in &self.modes {
            write!(f, " a{m}")?;
        }
        Ok(())
    }
}

/// Stable insertion sort counting transpositions, then `a^2 = 1` removal.
fn canonicalize(mut modes: Vec<i64>) -> (Vec<i64>, Phase) {
    let mut swaps: u64 = 0;
    for i in 1..modes.len() {
        let mut j = i;
        while j > 0 && modes[j - 1] > modes[j] {
            modes.swap(j - 1, j);
            swaps += 1;
            j -= 1;
        }
    }
    let mut out = Vec::with_capacity(modes.len());
    let mut i = 0;
    while i < modes.len() {
        if i + 1 < modes.len() && modes[i] == modes[i + 1] {
            i += 2;
        } else {
            out.push(modes[i]);
            i += 1;
        }
    }
    (out, Phase::from_power(2 * (swaps % 2) as i64))
}

/// Sum of Majorana monomials with merged, canonical terms.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MajoranaSum {
    terms: Vec<MajoranaMonomial>,
}

impl MajoranaSum {
    pub fn new(terms: Vec<MajoranaMonomial>) -> Self {
        let mut s = Self { terms };
        s.simplify();
        s
    }

    pub fn terms(&self) -> &[MajoranaMonomial] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<MajoranaMonomial> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Merges equal mode sets. Merged terms carry phase `+1` and the summed
    /// weight; untouched singletons keep their exact phase.
    fn simplify(&mut self) {
        let mut terms = std::mem::take(&mut self.terms);
        terms.sort_by(|a, b| a.modes.cmp(&b.modes));
        let mut out: Vec<MajoranaMonomial> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.modes == t.modes => {
                    let w = last.weight() + t.weight();
                    last.phase = Phase::ONE;
                    last.coeff = w;
                }
                _ => out.push(t),
            }
        }
        out.retain(|t| t.coeff != Complex64::new(0.0, 0.0));
        self.terms = out;
    }
}

impl Mul for &MajoranaSum {
    type Output = MajoranaSum;
    fn mul(self, rhs: &MajoranaSum) -> MajoranaSum {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                terms.push(a * b);
            }
        }
        MajoranaSum::new(terms)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FermionOp {
    Create,
    Annihilate,
    MajoranaEven,
    MajoranaOdd,
}

/// Ordered product of creation, annihilation and Majorana factors.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionMonomial {
    factors: Vec<(i64, FermionOp)>,
    phase: Phase,
    coeff: Complex64,
}

impl FermionMonomial {
    pub fn new(factors: Vec<(i64, FermionOp)>) -> Self {
        Self {
            factors,
            phase: Phase::ONE,
            coeff: Complex64::new(1.0, 0.0),
        }
    }

    pub fn identity() -> Self {
        Self::new(Vec::new())
    }

    pub fn c(site: i64) -> Self {
        Self::new(vec![(site, FermionOp::Annihilate)])
    }

    pub fn cdag(site: i64) -> Self {
        Self::new(vec![(site, FermionOp::Create)])
    }

    /// `c + c^dag` at `site`.
    pub fn majorana_even(site: i64) -> Self {
        Self::new(vec![(site, FermionOp::MajoranaEven)])
    }

    /// `i (c - c^dag)` at `site`.
    pub fn majorana_odd(site: i64) -> Self {
        Self::new(vec![(site, FermionOp::MajoranaOdd)])
    }

    /// `2 c^dag c - 1 = -i a_{2j} a_{2j+1}`.
    pub fn occupation_sign(site: i64) -> Self {
        Self::new(vec![(site, FermionOp::MajoranaEven), (site, FermionOp::MajoranaOdd)]).with_phase(Phase::MINUS_I)
    }

    /// `S[start, start+len-1] = prod_j (2 c^dag_j c_j - 1)`.
    pub fn string(start: i64, len: usize) -> Self {
        let mut factors = Vec::with_capacity(2 * len);
        for j in 0..len as i64 {
            factors.push((start + j, FermionOp::MajoranaEven));
            factors.push((start + j, FermionOp::MajoranaOdd));
        }
        Self::new(factors).with_phase(Phase::from_power(-(len as i64)))
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = self.phase * phase;
        self
    }

    pub fn with_coeff(mut self, coeff: Complex64) -> Self {
        self.coeff *= coeff;
        self
    }

    pub fn factors(&self) -> &[(i64, FermionOp)] {
        &self.factors
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn coeff(&self) -> Complex64 {
        self.coeff
    }

    pub fn weight(&self) -> Complex64 {
        self.coeff * self.phase.to_complex()
    }

    pub fn parity(&self) -> Parity {
        Parity::from_count(self.factors.len())
    }

    pub fn site_span(&self) -> Option<(i64, i64)> {
        let min = self.factors.iter().map(|f| f.0).min()?;
        let max = self.factors.iter().map(|f| f.0).max()?;
        Some((min, max))
    }

    pub fn translated(&self, sites: i64) -> Self {
        Self {
            factors: self.factors.iter().map(|&(s, k)| (s + sites, k)).collect(),
            phase: self.phase,
            coeff: self.coeff,
        }
    }

    pub fn adjoint(&self) -> Self {
        let factors = self
            .factors
            .iter()
            .rev()
            .map(|&(s, k)| {
                let k = match k {
                    FermionOp::Create => FermionOp::Annihilate,
                    FermionOp::Annihilate => FermionOp::Create,
                    other => other,
                };
                (s, k)
            })
            .collect();
        Self {
            factors,
            phase: self.phase.conj(),
            coeff: self.coeff.conj(),
        }
    }

    /// Expansion over Majorana generators,
    /// `c = (a_{2j} - i a_{2j+1}) / 2`, `c^dag = (a_{2j} + i a_{2j+1}) / 2`.
    pub fn to_majorana(&self) -> MajoranaSum {
        let mut acc = vec![MajoranaMonomial::identity()
            .with_phase(self.phase)
            .with_coeff(self.coeff)];
        for &(site, kind) in &self.factors {
            let even = mode_index(site, false);
            let odd = mode_index(site, true);
            let options: Vec<(i64, Phase, f64)> = match kind {
                FermionOp::MajoranaEven => vec![(even, Phase::ONE, 1.0)],
                FermionOp::MajoranaOdd => vec![(odd, Phase::ONE, 1.0)],
                FermionOp::Create => vec![(even, Phase::ONE, 0.5), (odd, Phase::I, 0.5)],
                FermionOp::Annihilate => vec![(even, Phase::ONE, 0.5), (odd, Phase::MINUS_I, 0.5)],
            };
            let mut next = Vec::with_capacity(acc.len() * options.len());
            for t in &acc {
                for &(m, ph, scale) in &options {
                    let f = MajoranaMonomial::from_ordered([m])
                        .with_phase(ph)
                        .with_coeff(Complex64::new(scale, 0.0));
                    next.push(t * &f);
                }
            }
            acc = next;
        }
        MajoranaSum::new(acc)
    }

    /// Site-ordered form: ascending site, `c^dag` before `c` on the same site,
    /// Majorana factors expanded into `c` and `c^dag`. Returns the terms of the
    /// resulting sum (`c c^dag = 1 - c^dag c` creates extra terms). Stable:
    /// applying it to its own output is the identity.
    pub fn normal_ordered(&self) -> Vec<FermionMonomial> {
        // expand Majorana factors into creation/annihilation words
        let mut words: Vec<(Vec<(i64, FermionOp)>, Complex64)> = vec![(Vec::new(), self.weight())];
        for &(site, kind) in &self.factors {
            let options: Vec<(FermionOp, Complex64)> = match kind {
                FermionOp::Create | FermionOp::Annihilate => vec![(kind, Complex64::new(1.0, 0.0))],
                FermionOp::MajoranaEven => vec![
                    (FermionOp::Annihilate, Complex64::new(1.0, 0.0)),
                    (FermionOp::Create, Complex64::new(1.0, 0.0)),
                ],
                FermionOp::MajoranaOdd => vec![
                    (FermionOp::Annihilate, Complex64::new(0.0, 1.0)),
                    (FermionOp::Create, Complex64::new(0.0, -1.0)),
                ],
            };
            let mut next = Vec::with_capacity(words.len() * options.len());
            for (w, c) in &words {
                for &(k, f) in &options {
                    let mut w2 = w.clone();
                    w2.push((site, k));
                    next.push((w2, c * f));
                }
            }
            words = next;
        }

        let mut done: Vec<(Vec<(i64, FermionOp)>, Complex64)> = Vec::new();
        while let Some((mut w, c)) = words.pop() {
            if c == Complex64::new(0.0, 0.0) {
                continue;
            }
            let key = |f: &(i64, FermionOp)| (f.0, if f.1 == FermionOp::Create { 0 } else { 1 });
            let pos = (1..w.len()).find(|&i| key(&w[i - 1]) >= key(&w[i]));
            match pos {
                None => done.push((w, c)),
                Some(i) => {
                    let (a, b) = (w[i - 1], w[i]);
                    if a == b {
                        // c c = 0 and c^dag c^dag = 0
                        continue;
                    }
                    if a.0 == b.0 {
                        // c_j c^dag_j = 1 - c^dag_j c_j
                        let mut reduced = w.clone();
                        reduced.drain(i - 1..=i);
                        words.push((reduced, c));
                        w.swap(i - 1, i);
                        words.push((w, -c));
                    } else {
                        w.swap(i - 1, i);
                        words.push((w, -c));
                    }
                }
            }
        }
        done.sort_by(|a, b| a.0.cmp(&b.0));
        let mut merged: Vec<(Vec<(i64, FermionOp)>, Complex64)> = Vec::new();
        for (w, c) in done {
            match merged.last_mut() {
                Some(last) if last.0 == w => last.1 += c,
                _ => merged.push((w, c)),
            }
        }
        merged
            .into_iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|(w, c)| FermionMonomial::new(w).with_coeff(c))
            .collect()
    }
}

impl Mul for &FermionMonomial {
    type Output = FermionMonomial;
    fn mul(self, rhs: &FermionMonomial) -> FermionMonomial {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&rhs.factors);
        FermionMonomial {
            factors,
            phase: self.phase * rhs.phase,
            coeff: self.coeff * rhs.coeff,
        }
    }
}

impl fmt::Display for FermionMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.phase)?;
        if self.coeff != Complex64::new(1.0, 0.0) {
            write!(f, "*({})", self.coeff)?;
        }
        for (s, k) in &self.factors {
            let name = match k {
                FermionOp::Create => "c+",
                FermionOp::Annihilate => "c",
                FermionOp::MajoranaEven => "ae",
                FermionOp::MajoranaOdd => "ao",
            };
            write!(f, " {name}{s}")?;
        }
        Ok(())
    }
}

/// Anything that expands into a sum of Majorana monomials.
pub trait MajoranaExpand {
    fn majorana_terms(&self) -> Vec<MajoranaMonomial>;
}

impl MajoranaExpand for MajoranaMonomial {
    fn majorana_terms(&self) -> Vec<MajoranaMonomial> {
        vec![self.clone()]
    }
}

impl MajoranaExpand for MajoranaSum {
    fn majorana_terms(&self) -> Vec<MajoranaMonomial> {
        self.terms.clone()
    }
}

impl MajoranaExpand for FermionMonomial {
    fn majorana_terms(&self) -> Vec<MajoranaMonomial> {
        self.to_majorana().into_terms()
    }
}

impl MajoranaExpand for [FermionMonomial] {
    fn majorana_terms(&self) -> Vec<MajoranaMonomial> {
        MajoranaSum::new(self.iter().flat_map(|m| m.majorana_terms()).collect()).into_terms()
    }
}

impl MajoranaExpand for Vec<FermionMonomial> {
    fn majorana_terms(&self) -> Vec<MajoranaMonomial> {
        self.as_slice().majorana_terms()
    }
}
