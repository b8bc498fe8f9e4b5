use faer::Mat;
use serde::{Deserialize, Serialize};

use super::split::{default_windows, split_defect, SplitDefectSeries, SplitVerdict};
use super::string::{
    detect_string_order, string_correlator, DetectionThresholds, PairKind, StringCorrelatorSpec, StringOrderDetection,
    MIN_SERIES,
};
use crate::error::{Error, Result};
use crate::parallel::Execution;
use crate::quasifree::{
    bloch_block, circulant_symbol, BasisProjection, Boundary, MajoranaCovariance, QuadraticHamiltonian, SelfDualCut,
    PURITY_TOL,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndexOptions {
    /// Split-defect windows; evenly spaced up to the margin when absent.
    pub windows: Option<Vec<usize>>,
    pub window_count: usize,
    pub wedge_tol: f64,
    pub conv_tol: f64,
    /// Largest half-width used for the wedge count.
    pub max_wedge_window: usize,
    /// Largest `k` used for the string-order estimator.
    pub max_string_k: usize,
    pub detection: DetectionThresholds,
}

impl Default for IndexOptions {
    fn default() -> Self {
        Self {
            windows: None,
            window_count: 8,
            wedge_tol: 1e-6,
            conv_tol: 1e-6,
            max_wedge_window: 200,
            max_string_k: 40,
            detection: DetectionThresholds::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EstimatorValues {
    /// Parity of the unit-singular-value count across the cut.
    pub wedge: i8,
    /// Sign of `Pf h(0) Pf h(pi)`, translation-invariant rings only.
    pub momentum: Option<i8>,
    /// `-1` when string order is detected for the x or y pair.
    pub string_order: Option<i8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Z2IndexResult {
    pub index: i8,
    pub dim_wedge: usize,
    pub estimator_values: EstimatorValues,
    pub agreement: bool,
    pub wedge_window: usize,
    /// Squared singular values in `(0.1, 0.9)`: neither counted nor clearly
    /// absent.
    pub diagnostics: Vec<f64>,
    pub split: SplitDefectSeries,
    pub string_detection: Vec<(PairKind, StringOrderDetection)>,
}

/// Z2 index of a pure covariance across `cut`, by three estimators.
///
/// The wedge estimator counts squared singular values above `1 - wedge_tol`
/// of the left-right block of gamma on `[cut - w, cut + w - 1]`: each such
/// value is a Majorana pair shared across the cut, and an odd count means
/// the left restriction is not a factor state.
pub fn z2_index(
    g: &MajoranaCovariance,
    cut: SelfDualCut,
    h: Option<&QuadraticHamiltonian>,
    opts: &IndexOptions,
    exec: Execution,
) -> Result<Z2IndexResult> {
    let residual = row_purity_residual(g);
    if residual > PURITY_TOL {
        return Err(Error::ImpureCovariance { residual });
    }
    let e = BasisProjection::new(g);
    let windows = match &opts.windows {
        Some(w) => w.clone(),
        None => default_windows(&e, cut, opts.window_count)?,
    };
    let split = split_defect(&e, cut, &windows, opts.conv_tol, exec)?;
    if split.verdict != SplitVerdict::Converged {
        return Err(Error::IndexUndefined {
            verdict: format!("{:?}", split.verdict).to_lowercase(),
        });
    }

    let w = (*windows.last().unwrap()).min(opts.max_wedge_window);
    let c = 2 * (cut.cut - g.first_site()) as usize;
    let block = Mat::from_fn(2 * w, 2 * w, |i, j| g.get(c - 2 * w + i, c + j));
    let s = block
        .singular_values()
        .map_err(|e| Error::Solver(format!("{e:?}")))?;
    let sq: Vec<f64> = s.iter().map(|x| x * x).collect();
    let dim_wedge = sq.iter().filter(|&&x| x > 1.0 - opts.wedge_tol).count();
    let diagnostics: Vec<f64> = sq.iter().cloned().filter(|&x| x > 0.1 && x < 0.9).collect();
    let wedge = if dim_wedge % 2 == 0 { 1 } else { -1 };

    let momentum = h.and_then(momentum_estimator);

    let mut string_detection = Vec::new();
    for kind in [PairKind::X, PairKind::Y] {
        let probe = StringCorrelatorSpec::pair(kind, Vec::new()).with_origin(cut.cut);
        let Some(kmax) = probe.max_k(g) else { continue };
        let kmax = kmax.min(opts.max_string_k);
        if kmax + 1 < MIN_SERIES {
            continue;
        }
        let spec = StringCorrelatorSpec::pair(kind, (0..=kmax).collect()).with_origin(cut.cut);
        let series: Vec<(usize, f64)> = string_correlator(g, &spec, exec)?
            .into_iter()
            .map(|(k, v)| (k, v.re))
            .collect();
        string_detection.push((kind, detect_string_order(&series, opts.detection)?));
    }
    let string_order = if string_detection.is_empty() {
        None
    } else if string_detection.iter().any(|(_, d)| d.detected) {
        Some(-1)
    } else {
        Some(1)
    };

    let estimator_values = EstimatorValues {
        wedge,
        momentum,
        string_order,
    };
    let agreement = [momentum, string_order].iter().flatten().all(|&v| v == wedge);
    Ok(Z2IndexResult {
        index: wedge,
        dim_wedge,
        estimator_values,
        agreement,
        wedge_window: w,
        diagnostics,
        split,
        string_detection,
    })
}

/// `sign(Pf h(0) Pf h(pi))` of the two-band Bloch matrix, with bond offsets
/// taken as minimal images so that odd rings work too.
pub fn momentum_estimator(h: &QuadraticHamiltonian) -> Option<i8> {
    if h.boundary() != Boundary::Ring {
        return None;
    }
    let t = circulant_symbol(&h.majorana_matrix())?;
    let l = t.len() as i64;
    let mut at0 = 0.0;
    let mut at_pi = 0.0;
    for (r, tr) in t.iter().enumerate() {
        let r = r as i64;
        let image = if r <= l / 2 { r } else { r - l };
        at0 += tr[0][1];
        at_pi += if image.rem_euclid(2) == 0 { tr[0][1] } else { -tr[0][1] };
    }
    let p = at0 * at_pi;
    if p == 0.0 {
        None
    } else if p > 0.0 {
        Some(1)
    } else {
        Some(-1)
    }
}

/// Bloch-sampled one-particle energies (half the eigenvalues of `i h(k)`),
/// for reports on translation-invariant rings.
pub fn bloch_energies(h: &QuadraticHamiltonian) -> Option<Vec<(f64, f64, f64)>> {
    if h.boundary() != Boundary::Ring {
        return None;
    }
    let t = circulant_symbol(&h.majorana_matrix())?;
    let l = t.len();
    Some(
        (0..l)
            .map(|m| {
                let k = 2.0 * std::f64::consts::PI * m as f64 / l as f64;
                let (lo, hi) = bloch_block(&t, k).eigenvalues();
                (k, 0.5 * lo, 0.5 * hi)
            })
            .collect(),
    )
}

/// `max_i |(gamma gamma^T)_ii - 1|`. Since `1 - gamma gamma^T` is positive
/// for a valid covariance, a vanishing diagonal means it vanishes entirely.
fn row_purity_residual(g: &MajoranaCovariance) -> f64 {
    let n = g.majoranas();
    let m = g.gamma().as_mat();
    (0..n)
        .map(|i| {
            let s: f64 = (0..n).map(|j| m[(i, j)] * m[(i, j)]).sum();
            (s - 1.0).abs()
        })
        .fold(0.0, f64::max)
}
