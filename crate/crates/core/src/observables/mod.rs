//! Expectation values and diagnostics of quasi-free states: Wick/Pfaffian
//! evaluation, string correlators, the split defect, the Z2 index and the
//! gap inequality.

mod gap;
mod split;
mod string;
mod wick;
mod z2;

pub use gap::{gap_inequality_check, GapCheck, VARIANCE_FLOOR};
pub use split::{default_windows, split_defect, SplitDefectSeries, SplitVerdict, SPLIT_MARGIN};
pub use string::{
    detect_string_order, string_correlator, DetectionThresholds, PairKind, StringCorrelatorSpec, StringOrderDetection,
    LEFT_MARGIN, MIN_SERIES, RIGHT_MARGIN, TAIL,
};
pub use wick::wick_expectation;
pub use z2::{bloch_energies, momentum_estimator, z2_index, EstimatorValues, IndexOptions, Z2IndexResult};
