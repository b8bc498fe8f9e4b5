use serde::{Deserialize, Serialize};

use crate::ed::{apply, inner, EdOperator, EdState, ParitySector, DEGENERACY_TOL};
use crate::error::{Error, Result};
use crate::jw::FermionMonomial;

/// Probes whose variance is below this are skipped.
pub const VARIANCE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapCheck {
    /// Minimum ratio over the probes that were not skipped.
    pub m_empirical: Option<f64>,
    /// `None` for skipped probes.
    pub ratios: Vec<Option<f64>>,
    pub ed_gap: f64,
}

impl GapCheck {
    /// `m_empirical >= gap - tol`; vacuously true when every probe was skipped.
    pub fn holds(&self, tol: f64) -> bool {
        self.m_empirical.is_none_or(|m| m >= self.ed_gap - tol)
    }
}

/// `psi(Q^* [H, Q]) / (psi(Q^* Q) - |psi(Q)|^2)` for each probe `Q` (a sum of
/// monomials) in the ED ground state of `h`.
pub fn gap_inequality_check(ed: &EdState, h: &EdOperator, probes: &[Vec<FermionMonomial>]) -> Result<GapCheck> {
    if ed.parity_sector == ParitySector::Mixed || ed.gap < DEGENERACY_TOL {
        return Err(Error::DegenerateEdGround { gap: ed.gap });
    }
    if h.sites() != ed.sites {
        return Err(Error::DimensionMismatch {
            expected: ed.sites,
            found: h.sites(),
        });
    }
    let v = &ed.vector;
    let mut ratios = Vec::with_capacity(probes.len());
    for q in probes {
        // w = Q v; psi(Q^* H Q) - psi(Q^* Q H) = <w|H|w> - E0 <w|w>
        let w = apply(q, ed.sites, v)?;
        let ww = inner(&w, &w).re;
        let mean = inner(v, &w);
        let variance = ww - mean.norm_sqr();
        if variance < VARIANCE_FLOOR {
            ratios.push(None);
            continue;
        }
        let hw = h.matvec(&w);
        let num = inner(&w, &hw).re - ed.energy * ww;
        ratios.push(Some(num / variance));
    }
    let m_empirical = ratios.iter().flatten().cloned().reduce(f64::min);
    Ok(GapCheck {
        m_empirical,
        ratios,
        ed_gap: ed.gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ed::ed_ground;
    use crate::quasifree::{build_model, params, Boundary};

    #[test]
    fn single_mode_ratios_on_the_trivial_chain() {
        let h = build_model("trivial", 4, &params([("mu", 1.0)]), Boundary::Open).unwrap();
        let op = EdOperator::from_hamiltonian(&h).unwrap();
        let ed = ed_ground(&op).unwrap();
        let probes = vec![
            vec![FermionMonomial::identity()],
            vec![FermionMonomial::cdag(2)],
            vec![FermionMonomial::c(2)],
        ];
        let r = gap_inequality_check(&ed, &op, &probes).unwrap();
        assert_eq!(r.ratios[0], None);
        // creating one particle costs 2 mu
        assert!((r.ratios[1].unwrap() - 2.0).abs() < 1e-12);
        // c annihilates the vacuum: zero variance
        assert_eq!(r.ratios[2], None);
        assert!(r.holds(1e-9));
    }

    #[test]
    fn degenerate_ground_is_refused() {
        let h = build_model("kitaev", 6, &params([("J", 1.0), ("lambda", 0.0)]), Boundary::Open).unwrap();
        let op = EdOperator::from_hamiltonian(&h).unwrap();
        let ed = ed_ground(&op).unwrap();
        assert!(matches!(
            gap_inequality_check(&ed, &op, &[]),
            Err(Error::DegenerateEdGround { .. })
        ));
    }
}
