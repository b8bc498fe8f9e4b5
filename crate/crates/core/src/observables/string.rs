use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::wick::wick_expectation;
use crate::error::{Error, Result};
use crate::jw::{FermionMonomial, FermionOp, Parity, Phase};
use crate::parallel::{self, Execution};
use crate::quasifree::MajoranaCovariance;

/// Sites kept free between the shifted `q2` and the right end of the chain.
pub const RIGHT_MARGIN: i64 = 10;
/// Default distance between the left end of the chain and `q1`.
pub const LEFT_MARGIN: i64 = 10;

/// `psi(q1 S[0, 2k-1] tau_{2k}(q2))` in coordinates where the string starts at
/// site 0: `q1` lives on sites `< 0`, `q2` on sites `>= 0` and is translated
/// to the end of the string.
#[derive(Debug, Clone)]
pub struct StringCorrelatorSpec {
    pub q1: FermionMonomial,
    pub q2: FermionMonomial,
    pub k_values: Vec<usize>,
    /// Chain site playing the role of site 0. Defaults to `LEFT_MARGIN` sites
    /// right of the point where `q1` touches the left end.
    pub origin: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairKind {
    /// `q1 = c_{-1} - c^dag_{-1}`, `q2 = c_0 + c^dag_0`: realizes
    /// `X_{-1} X_{2k}` under Jordan-Wigner.
    X,
    /// `q1 = i a_{2(-1)}`, `q2 = a_{2*0+1}`: realizes `Y_{-1} Y_{2k}`.
    Y,
}

impl StringCorrelatorSpec {
    pub fn new(q1: FermionMonomial, q2: FermionMonomial, k_values: Vec<usize>) -> Result<Self> {
        for (what, q) in [("q1", &q1), ("q2", &q2)] {
            if q.parity() != Parity::Odd {
                return Err(Error::WrongParity { what });
            }
        }
        let (_, q1_max) = q1.site_span().unwrap();
        if q1_max >= 0 {
            return Err(Error::BadSupport {
                what: "q1",
                requirement: "sites < 0".into(),
            });
        }
        let (q2_min, _) = q2.site_span().unwrap();
        if q2_min < 0 {
            return Err(Error::BadSupport {
                what: "q2",
                requirement: "sites >= 0".into(),
            });
        }
        Ok(Self {
            q1,
            q2,
            k_values,
            origin: None,
        })
    }

    pub fn pair(kind: PairKind, k_values: Vec<usize>) -> Self {
        let (q1, q2) = match kind {
            PairKind::X => (
                // c - c^dag = -i a_odd
                FermionMonomial::new(vec![(-1, FermionOp::MajoranaOdd)]).with_phase(Phase::MINUS_I),
                FermionMonomial::majorana_even(0),
            ),
            PairKind::Y => (
                FermionMonomial::new(vec![(-1, FermionOp::MajoranaEven)]).with_phase(Phase::I),
                FermionMonomial::majorana_odd(0),
            ),
        };
        Self::new(q1, q2, k_values).expect("catalog pairs are valid")
    }

    pub fn with_origin(mut self, origin: i64) -> Self {
        self.origin = Some(origin);
        self
    }

    fn origin_for(&self, g: &MajoranaCovariance) -> i64 {
        self.origin.unwrap_or_else(|| {
            let (q1_min, _) = self.q1.site_span().unwrap();
            g.first_site() - q1_min + LEFT_MARGIN
        })
    }

    /// Largest `k` that fits into `g` with the right margin.
    pub fn max_k(&self, g: &MajoranaCovariance) -> Option<usize> {
        let origin = self.origin_for(g);
        let (_, q2_max) = self.q2.site_span().unwrap();
        let room = g.last_site() - RIGHT_MARGIN - origin - q2_max;
        (room >= 0).then_some((room / 2) as usize)
    }

    /// The monomial evaluated at string half-length `k`, in chain sites.
    pub fn monomial(&self, origin: i64, k: usize) -> FermionMonomial {
        let q1 = self.q1.translated(origin);
        let s = FermionMonomial::string(origin, 2 * k);
        let q2 = self.q2.translated(origin + 2 * k as i64);
        &(&q1 * &s) * &q2
    }
}

/// One Pfaffian per `k`, evaluated in parallel when requested; the output
/// keeps the order of `spec.k_values`.
pub fn string_correlator(
    g: &MajoranaCovariance,
    spec: &StringCorrelatorSpec,
    exec: Execution,
) -> Result<Vec<(usize, Complex64)>> {
    let origin = spec.origin_for(g);
    let (q1_min, _) = spec.q1.site_span().unwrap();
    if origin + q1_min < g.first_site() {
        return Err(Error::SiteOutsideWindow {
            site: origin + q1_min,
            first: g.first_site(),
            last: g.last_site(),
        });
    }
    let (_, q2_max) = spec.q2.site_span().unwrap();
    for &k in &spec.k_values {
        let end = origin + 2 * k as i64 + q2_max;
        let margin = g.last_site() - end;
        if margin < RIGHT_MARGIN {
            return Err(Error::MarginViolation {
                window: k,
                margin,
                required: RIGHT_MARGIN,
            });
        }
    }
    let values = parallel::map(exec, &spec.k_values, |&k| wick_expectation(g, &spec.monomial(origin, k)));
    spec.k_values
        .iter()
        .zip(values)
        .map(|(&k, v)| Ok((k, v?)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionThresholds {
    pub eta: f64,
    pub tail_tol: f64,
}

impl Default for DetectionThresholds {
    fn default() -> Self {
        Self {
            eta: 1e-3,
            tail_tol: 0.05,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StringOrderDetection {
    pub detected: bool,
    pub estimate: f64,
    pub period_hint: u8,
}

pub const MIN_SERIES: usize = 20;
pub const TAIL: usize = 10;

/// Large-`k` limit test on the real parts of a correlator series. The tail of
/// the last `TAIL` points must have mean modulus above `eta` and relative
/// spread below `tail_tol`; failing that, the tail of the even-`k`
/// subsequence is tried (`period_hint = 2`).
pub fn detect_string_order(series: &[(usize, f64)], th: DetectionThresholds) -> Result<StringOrderDetection> {
    if series.len() < MIN_SERIES {
        return Err(Error::SeriesTooShort {
            found: series.len(),
            required: MIN_SERIES,
        });
    }
    let tail_stats = |vals: &[f64]| -> (bool, f64) {
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let mean_abs = vals.iter().map(|v| v.abs()).sum::<f64>() / n;
        let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let ok = mean_abs > th.eta && (max - min) / mean_abs < th.tail_tol;
        (ok, mean)
    };
    let mut sorted = series.to_vec();
    sorted.sort_by_key(|p| p.0);
    let all: Vec<f64> = sorted.iter().map(|p| p.1).collect();
    let (ok, mean) = tail_stats(&all[all.len() - TAIL..]);
    if ok {
        return Ok(StringOrderDetection {
            detected: true,
            estimate: mean,
            period_hint: 1,
        });
    }
    let even: Vec<f64> = sorted.iter().filter(|p| p.0 % 2 == 0).map(|p| p.1).collect();
    if even.len() >= TAIL {
        let (ok_even, mean_even) = tail_stats(&even[even.len() - TAIL..]);
        if ok_even {
            return Ok(StringOrderDetection {
                detected: true,
                estimate: mean_even,
                period_hint: 2,
            });
        }
    }
    Ok(StringOrderDetection {
        detected: false,
        estimate: mean,
        period_hint: 1,
    })
}
