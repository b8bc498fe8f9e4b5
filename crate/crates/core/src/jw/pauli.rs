use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_complex::Complex64;

use super::monomial::Phase;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    /// `p * q = phase * r`.
    pub fn product(self, other: Pauli) -> (Phase, Pauli) {
        use Pauli::*;
        match (self, other) {
            (I, q) => (Phase::ONE, q),
            (p, I) => (Phase::ONE, p),
            (p, q) if p == q => (Phase::ONE, I),
            (X, Y) => (Phase::I, Z),
            (Y, X) => (Phase::MINUS_I, Z),
            (Y, Z) => (Phase::I, X),
            (Z, Y) => (Phase::MINUS_I, X),
            (Z, X) => (Phase::I, Y),
            (X, Z) => (Phase::MINUS_I, Y),
            _ => unreachable!(),
        }
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// `coeff * phase * P_first (x) ... (x) P_last` on the sites
/// `first..first + letters.len()`; identity everywhere else.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    first: i64,
    letters: Vec<Pauli>,
    phase: Phase,
    coeff: Complex64,
}

impl PauliString {
    pub fn identity(first: i64, len: usize) -> Self {
        Self {
            first,
            letters: vec![Pauli::I; len],
            phase: Phase::ONE,
            coeff: Complex64::new(1.0, 0.0),
        }
    }

    pub fn new(first: i64, letters: Vec<Pauli>) -> Self {
        Self {
            first,
            letters,
            phase: Phase::ONE,
            coeff: Complex64::new(1.0, 0.0),
        }
    }

    /// Single letter at `site`, inside the window starting at `first`.
    pub fn single(first: i64, len: usize, site: i64, p: Pauli) -> Self {
        let mut s = Self::identity(first, len);
        s.letters[(site - first) as usize] = p;
        s
    }

    pub fn with_phase(mut self, phase: Phase) -> Self {
        self.phase = self.phase * phase;
        self
    }

    pub fn with_coeff(mut self, coeff: Complex64) -> Self {
        self.coeff *= coeff;
        self
    }

    pub fn first(&self) -> i64 {
        self.first
    }

    pub fn last(&self) -> i64 {
        self.first + self.letters.len() as i64 - 1
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    /// Letter at an arbitrary site (identity outside the window).
    pub fn at(&self, site: i64) -> Pauli {
        let off = site - self.first;
        if off < 0 || off >= self.letters.len() as i64 {
            Pauli::I
        } else {
            self.letters[off as usize]
        }
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

    /// Same operator on a larger window.
    pub fn widened(&self, first: i64, last: i64) -> Self {
        let first = first.min(self.first);
        let last = last.max(self.last());
        let letters = (first..=last).map(|s| self.at(s)).collect();
        Self {
            first,
            letters,
            phase: self.phase,
            coeff: self.coeff,
        }
    }

    /// Letters with the phase and coefficient dropped, used as a merge key.
    pub fn same_letters(&self, other: &PauliString) -> bool {
        let lo = self.first.min(other.first);
        let hi = self.last().max(other.last());
        (lo..=hi).all(|s| self.at(s) == other.at(s))
    }

    /// Number of X/Y letters mod 2, which equals the fermion parity of the
    /// preimage.
    pub fn is_even(&self) -> bool {
        self.letters.iter().filter(|p| matches!(p, Pauli::X | Pauli::Y)).count() % 2 == 0
    }
}

impl Mul for &PauliString {
    type Output = PauliString;
    fn mul(self, rhs: &PauliString) -> PauliString {
        let first = self.first.min(rhs.first);
        let last = self.last().max(rhs.last());
        let mut phase = self.phase * rhs.phase;
        let letters = (first..=last)
            .map(|s| {
                let (ph, p) = self.at(s).product(rhs.at(s));
                phase = phase * ph;
                p
            })
            .collect();
        PauliString {
            first,
            letters,
            phase,
            coeff: self.coeff * rhs.coeff,
        }
    }
}

/// Renders as `"Z0 Z1 X2"`, with a `"-1 "`, `"+i "` or `"-i "` prefix for a
/// nontrivial phase and `"(re+imi) "` for a non-unit coefficient. The
/// identity renders as `"I"`.
impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.coeff != Complex64::new(1.0, 0.0) {
            parts.push(format!("({})", self.coeff));
        }
        if self.phase != Phase::ONE {
            parts.push(self.phase.to_string());
        }
        let mut any = false;
        for (k, p) in self.letters.iter().enumerate() {
            if *p != Pauli::I {
                parts.push(format!("{}{}", p.letter(), self.first + k as i64));
                any = true;
            }
        }
        if !any {
            parts.push("I".into());
        }
        f.write_str(&parts.join(" "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsePauliError(pub String);

impl fmt::Display for ParsePauliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid Pauli string: {}", self.0)
    }
}

impl std::error::Error for ParsePauliError {}

/// Parses the phase-and-letters form produced by `Display` (without a
/// numeric coefficient). The window is the span of the non-identity letters.
impl FromStr for PauliString {
    type Err = ParsePauliError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut phase = Phase::ONE;
        let mut sites: Vec<(i64, Pauli)> = Vec::new();
        for tok in s.split_whitespace() {
            match tok {
                "+1" => {}
                "-1" => phase = phase * Phase::MINUS_ONE,
                "+i" => phase = phase * Phase::I,
                "-i" => phase = phase * Phase::MINUS_I,
                "I" => {}
                _ => {
                    let mut chars = tok.chars();
                    let p = match chars.next() {
                        Some('X') => Pauli::X,
                        Some('Y') => Pauli::Y,
                        Some('Z') => Pauli::Z,
                        _ => return Err(ParsePauliError(tok.into())),
                    };
                    let site: i64 = chars.as_str().parse().map_err(|_| ParsePauliError(tok.into()))?;
                    if sites.iter().any(|&(s, _)| s == site) {
                        return Err(ParsePauliError(format!("site {site} repeated")));
                    }
                    sites.push((site, p));
                }
            }
        }
        if sites.is_empty() {
            return Ok(PauliString::identity(0, 1).with_phase(phase));
        }
        let first = sites.iter().map(|s| s.0).min().unwrap();
        let last = sites.iter().map(|s| s.0).max().unwrap();
        let mut out = PauliString::identity(first, (last - first + 1) as usize);
        for (s, p) in sites {
            out.letters[(s - first) as usize] = p;
        }
        Ok(out.with_phase(phase))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_site_algebra() {
        // sigma_x sigma_y = i sigma_z
        assert_eq!(Pauli::X.product(Pauli::Y), (Phase::I, Pauli::Z));
        for p in [Pauli::X, Pauli::Y, Pauli::Z] {
            assert_eq!(p.product(p), (Phase::ONE, Pauli::I));
        }
    }

    #[test]
    fn strings_multiply_sitewise() {
        let a: PauliString = "X0 Z1".parse().unwrap();
        let b: PauliString = "Y0 Z2".parse().unwrap();
        let c = &a * &b;
        assert_eq!(c.to_string(), "+i Z0 Z1 Z2");
    }

    #[test]
    fn render_parse_round_trip() {
        for s in ["Z0 Z1 X2", "-i X3 Y5", "I", "-1 Y-2 X0"] {
            let p: PauliString = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        assert!("Q1".parse::<PauliString>().is_err());
        assert!("X1 Z1".parse::<PauliString>().is_err());
    }
}
