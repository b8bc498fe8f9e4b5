use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parallel::{self, Execution};
use crate::quasifree::{BasisProjection, SelfDualCut};

/// Sites that every window must keep away from either end of the chain.
pub const SPLIT_MARGIN: i64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitVerdict {
    Converged,
    Diverging,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitDefectSeries {
    pub windows: Vec<usize>,
    pub hs_norms: Vec<f64>,
    pub verdict: SplitVerdict,
    pub conv_tol: f64,
}

impl SplitDefectSeries {
    pub fn increments(&self) -> Vec<f64> {
        self.hs_norms.windows(2).map(|w| w[1] - w[0]).collect()
    }
}

/// `||(theta E theta - E)|_w||_HS` for increasing half-widths `w`, where the
/// restriction keeps the sites `[cut - w, cut + w - 1]`. Only left-right
/// entries survive, each equal to `-2 E_ij`.
pub fn split_defect(
    e: &BasisProjection<'_>,
    cut: SelfDualCut,
    windows: &[usize],
    conv_tol: f64,
    exec: Execution,
) -> Result<SplitDefectSeries> {
    let (first, last) = e.site_range();
    if windows.is_empty() || windows.windows(2).any(|w| w[0] >= w[1]) || windows[0] == 0 {
        return Err(Error::BadWindows);
    }
    for &w in windows {
        let margin = (cut.cut - w as i64 - first).min(last - (cut.cut + w as i64 - 1));
        if margin < SPLIT_MARGIN {
            return Err(Error::MarginViolation {
                window: w,
                margin,
                required: SPLIT_MARGIN,
            });
        }
    }
    let c = 2 * (cut.cut - first) as usize;
    let hs_norms = parallel::map(exec, windows, |&w| {
        let mut acc = 0.0;
        for i in c - 2 * w..c {
            for j in c..c + 2 * w {
                acc += 4.0 * e.entry(i, j).norm_sqr();
            }
        }
        // (i, j) and (j, i) contribute equally
        (2.0 * acc).sqrt()
    });
    let verdict = classify(&hs_norms, conv_tol);
    Ok(SplitDefectSeries {
        windows: windows.to_vec(),
        hs_norms,
        verdict,
        conv_tol,
    })
}

fn classify(norms: &[f64], conv_tol: f64) -> SplitVerdict {
    let inc: Vec<f64> = norms.windows(2).map(|w| w[1] - w[0]).collect();
    if inc.len() >= 3 && inc[inc.len() - 3..].iter().all(|d| d.abs() < conv_tol) {
        return SplitVerdict::Converged;
    }
    if inc.len() >= 5 && inc[inc.len() - 5..].windows(2).all(|d| d[1] >= d[0]) {
        return SplitVerdict::Diverging;
    }
    SplitVerdict::Inconclusive
}

/// `count` evenly spaced windows up to the largest one allowed by the margin.
pub fn default_windows(e: &BasisProjection<'_>, cut: SelfDualCut, count: usize) -> Result<Vec<usize>> {
    let (first, last) = e.site_range();
    let room = (cut.cut - first).min(last + 1 - cut.cut) - SPLIT_MARGIN;
    if room < count as i64 {
        return Err(Error::MarginViolation {
            window: count,
            margin: room + SPLIT_MARGIN,
            required: SPLIT_MARGIN,
        });
    }
    let room = room as usize;
    Ok((1..=count).map(|i| i * room / count).collect())
}
