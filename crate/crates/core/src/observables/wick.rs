use num_complex::Complex64;

use crate::error::Result;
use crate::jw::{MajoranaExpand, MajoranaMonomial, Parity};
use crate::linalg::pfaffian_rows;
use crate::quasifree::MajoranaCovariance;

/// `<M>` in the quasi-free state `g`.
///
/// Each canonical Majorana term `w a_{m1} ... a_{m2k}` (distinct, increasing
/// modes) contributes `w Pf[<a_p a_q>] = w (-i)^k Pf(gamma_sub)`; odd terms
/// contribute exactly zero. Modes are physical (`2 * site + bit`).
pub fn wick_expectation<M: MajoranaExpand + ?Sized>(g: &MajoranaCovariance, m: &M) -> Result<Complex64> {
    let mut total = Complex64::new(0.0, 0.0);
    for t in m.majorana_terms() {
        total += monomial_expectation(g, &t)?;
    }
    Ok(total)
}

pub(crate) fn monomial_expectation(g: &MajoranaCovariance, t: &MajoranaMonomial) -> Result<Complex64> {
    let idx: Vec<usize> = t
        .modes()
        .iter()
        .map(|&m| g.index_of_mode(m))
        .collect::<Result<_>>()?;
    if t.parity() == Parity::Odd {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let n = idx.len();
    if n == 0 {
        return Ok(t.weight());
    }
    let mut buf = Vec::with_capacity(n * n);
    for &p in &idx {
        for &q in &idx {
            buf.push(g.get(p, q));
        }
    }
    let pf = pfaffian_rows(&mut buf, n).value();
    // (-i)^k for k = n/2 pairs
    let phase = match (n / 2) % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    };
    Ok(t.weight() * phase * pf)
}
