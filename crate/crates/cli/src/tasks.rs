//! Task execution at one parameter point. Every task yields a record; a
//! failing task never stops the ones after it.

use std::collections::BTreeMap;
use std::time::Instant;

use majorana_chain::ed::{ed_expectation, ed_ground, EdOperator, ParitySector};
use majorana_chain::jw::MajoranaMonomial;
use majorana_chain::observables::{
    bloch_energies, default_windows, detect_string_order, gap_inequality_check, split_defect, string_correlator,
    wick_expectation, z2_index, DetectionThresholds, IndexOptions, StringCorrelatorSpec, MIN_SERIES,
};
use majorana_chain::quasifree::{
    build_model, excitation_energies, ground_energy, pauli_terms, BasisProjection, Boundary, GroundRoute,
    GroundSolver, MajoranaCovariance, QuadraticHamiltonian, SelfDualCut,
};
use majorana_chain::random::local_probe;
use majorana_chain::{ed, Execution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::config::{ModelConfig, TaskSpec, Tolerances};

const DEFAULT_K_CAP: usize = 100;

/// A numeric series for CSV output: `(label, value)` rows under the header
/// `"{label_name},value"`.
#[derive(Debug, Clone)]
pub struct Series {
    pub label_name: &'static str,
    pub rows: Vec<(i64, f64)>,
}

#[derive(Debug, Clone)]
pub struct TaskRecord {
    pub kind: &'static str,
    pub spec: TaskSpec,
    pub outcome: Result<Value, String>,
    pub series: Option<Series>,
    pub seconds: f64,
}

#[derive(Debug, Clone)]
pub struct PointRecord {
    pub sweep_value: Option<f64>,
    pub params: BTreeMap<String, f64>,
    pub tasks: Vec<TaskRecord>,
}

impl PointRecord {
    pub fn failed(&self) -> bool {
        self.tasks.iter().any(|t| t.outcome.is_err())
    }
}

struct Point<'a> {
    model: &'a ModelConfig,
    tol: &'a Tolerances,
    h: QuadraticHamiltonian,
    ground: Option<Result<MajoranaCovariance, String>>,
}

impl Point<'_> {
    fn ground(&mut self) -> Result<&MajoranaCovariance, String> {
        if self.ground.is_none() {
            let solver =
                GroundSolver::new(GroundRoute::Auto, Execution::Sequential).with_zero_mode_tol(self.tol.zero_mode_tol);
            self.ground = Some(solver.solve(&self.h).map_err(|e| e.to_string()));
        }
        self.ground.as_ref().unwrap().as_ref().map_err(Clone::clone)
    }

    fn default_cut(&self) -> i64 {
        (self.model.sites / 2) as i64
    }

    fn thresholds(&self) -> DetectionThresholds {
        DetectionThresholds {
            eta: self.tol.eta,
            tail_tol: self.tol.tail_tol,
        }
    }
}

pub fn run_point(
    model: &ModelConfig,
    tol: &Tolerances,
    sweep_value: Option<f64>,
    params: BTreeMap<String, f64>,
    tasks: &[TaskSpec],
    seed: u64,
) -> PointRecord {
    let h = build_model(&model.name, model.sites, &params, model.boundary).expect("validated before running");
    let mut point = Point {
        model,
        tol,
        h,
        ground: None,
    };
    let records = tasks
        .iter()
        .enumerate()
        .map(|(i, spec)| {
            let start = Instant::now();
            let task_seed = seed.wrapping_add(i as u64);
            let (outcome, series) = match run_task(&mut point, &params, spec, task_seed) {
                Ok((v, s)) => (Ok(v), s),
                Err(e) => (Err(e), None),
            };
            TaskRecord {
                kind: spec.kind().as_str(),
                spec: spec.clone(),
                outcome,
                series,
                seconds: start.elapsed().as_secs_f64(),
            }
        })
        .collect();
    PointRecord {
        sweep_value,
        params,
        tasks: records,
    }
}

type TaskOutput = Result<(Value, Option<Series>), String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn run_task(p: &mut Point<'_>, params: &BTreeMap<String, f64>, spec: &TaskSpec, seed: u64) -> TaskOutput {
    match spec {
        TaskSpec::Spectrum {} => spectrum(p),
        TaskSpec::StringOrder { pair, k_max, origin } => {
            let thresholds = p.thresholds();
            let g = p.ground()?;
            let mut s = StringCorrelatorSpec::pair(*pair, Vec::new());
            if let Some(o) = origin {
                s = s.with_origin(*o);
            }
            let fit = s.max_k(g).ok_or("chain too short for the string correlator")?;
            let k_max = k_max.unwrap_or(fit.min(DEFAULT_K_CAP));
            s.k_values = (0..=k_max).collect();
            let values = string_correlator(g, &s, Execution::Sequential).map_err(err)?;
            let max_imag = values.iter().map(|(_, v)| v.im.abs()).fold(0.0, f64::max);
            let real: Vec<(usize, f64)> = values.iter().map(|(k, v)| (*k, v.re)).collect();
            let detection = if real.len() >= MIN_SERIES {
                Some(detect_string_order(&real, thresholds).map_err(err)?)
            } else {
                None
            };
            let result = json!({
                "pair": pair,
                "k": real.iter().map(|r| r.0).collect::<Vec<_>>(),
                "value": real.iter().map(|r| r.1).collect::<Vec<_>>(),
                "max_abs_imag": max_imag,
                "detection": detection,
                "thresholds": thresholds,
            });
            let series = Series {
                label_name: "k",
                rows: real.iter().map(|&(k, v)| (k as i64, v)).collect(),
            };
            Ok((result, Some(series)))
        }
        TaskSpec::Z2Index {
            cut,
            windows,
            window_count,
        } => {
            let opts = IndexOptions {
                windows: windows.clone(),
                window_count: *window_count,
                wedge_tol: p.tol.wedge_tol,
                conv_tol: p.tol.conv_tol,
                detection: p.thresholds(),
                ..IndexOptions::default()
            };
            let cut = SelfDualCut::new(cut.unwrap_or(p.default_cut()));
            let h = p.h.clone();
            let g = p.ground()?;
            let r = z2_index(g, cut, Some(&h), &opts, Execution::Sequential).map_err(err)?;
            let series = split_series(&r.split.windows, &r.split.hs_norms);
            let mut v = serde_json::to_value(&r).map_err(err)?;
            v["cut"] = json!(cut.cut);
            v["options"] = serde_json::to_value(&opts).map_err(err)?;
            Ok((v, Some(series)))
        }
        TaskSpec::Split {
            cut,
            windows,
            window_count,
        } => {
            let conv_tol = p.tol.conv_tol;
            let cut = SelfDualCut::new(cut.unwrap_or(p.default_cut()));
            let g = p.ground()?;
            let e = BasisProjection::new(g);
            let windows = match windows {
                Some(w) => w.clone(),
                None => default_windows(&e, cut, *window_count).map_err(err)?,
            };
            let s = split_defect(&e, cut, &windows, conv_tol, Execution::Sequential).map_err(err)?;
            let series = split_series(&s.windows, &s.hs_norms);
            let mut v = serde_json::to_value(&s).map_err(err)?;
            v["cut"] = json!(cut.cut);
            v["increments"] = json!(s.increments());
            Ok((v, Some(series)))
        }
        TaskSpec::Oracle { probes } => oracle(p, params, *probes, seed),
    }
}

fn split_series(windows: &[usize], norms: &[f64]) -> Series {
    Series {
        label_name: "window",
        rows: windows.iter().zip(norms).map(|(&w, &v)| (w as i64, v)).collect(),
    }
}

fn spectrum(p: &mut Point<'_>) -> TaskOutput {
    let modes = excitation_energies(&p.h).map_err(err)?;
    let e0 = ground_energy(&p.h).map_err(err)?;
    let bands = bloch_energies(&p.h).map(|b| b.into_iter().map(|(k, lo, hi)| [k, lo, hi]).collect::<Vec<_>>());
    let result = json!({
        "ground_energy": e0,
        "mode_energies": modes,
        "excitation_gap": modes.first(),
        "bloch_bands": bands,
    });
    let series = Series {
        label_name: "k",
        rows: modes.iter().enumerate().map(|(k, &v)| (k as i64, v)).collect(),
    };
    Ok((result, Some(series)))
}

/// Exact-diagonalization cross-checks on small chains.
fn oracle(p: &mut Point<'_>, params: &BTreeMap<String, f64>, probes: usize, seed: u64) -> TaskOutput {
    let sites = p.model.sites;
    if sites > ed::MAX_SITES {
        return Err(format!("oracle needs at most {} sites, got {sites}", ed::MAX_SITES));
    }
    let op = EdOperator::from_hamiltonian(&p.h).map_err(err)?;
    let st = ed_ground(&op).map_err(err)?;
    let mut result = json!({
        "ed_energy": st.energy,
        "ed_gap": st.gap,
        "parity_sector": st.parity_sector,
        "conserves_parity": op.conserves_parity(),
    });

    match p.ground() {
        Ok(g) if st.parity_sector != ParitySector::Mixed => {
            let g = g.clone();
            let qf = g.energy(&p.h.majorana_matrix()).map_err(err)?;
            let mut dev = 0.0f64;
            for i in 0..2 * sites as i64 {
                for j in i + 1..2 * sites as i64 {
                    let m = MajoranaMonomial::from_ordered([i, j]);
                    let d = wick_expectation(&g, &m).map_err(err)? - ed_expectation(&st, &m).map_err(err)?;
                    dev = dev.max(d.norm());
                }
            }
            result["quasi_free_energy"] = json!(qf);
            result["energy_deviation"] = json!((qf - st.energy).abs());
            result["two_point_max_deviation"] = json!(dev);
        }
        Ok(_) => result["comparison_skipped"] = json!("ED ground state is degenerate"),
        Err(e) => result["comparison_skipped"] = json!(e),
    }

    if st.parity_sector != ParitySector::Mixed {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let qs: Vec<_> = (0..probes).map(|_| local_probe(sites, &mut rng)).collect();
        let gap = gap_inequality_check(&st, &op, &qs).map_err(err)?;
        result["gap_inequality"] = json!({
            "m_empirical": gap.m_empirical,
            "ed_gap": gap.ed_gap,
            "probes": probes,
            "skipped": gap.ratios.iter().filter(|r| r.is_none()).count(),
            "holds": gap.holds(1e-9),
            "seed": seed,
        });
    }

    // the spin ring closes periodically in the spins, not in the fermions
    if p.model.boundary == Boundary::Open {
        if let Some(terms) = pauli_terms(&p.model.name, sites, params, Boundary::Open).map_err(err)? {
            let spin = EdOperator::from_pauli(sites, &terms).map_err(err)?;
            result["jw_matrix_equal"] = json!(spin.exactly_equal(&op));
            result["jw_max_abs_diff"] = json!(spin.max_abs_diff(&op));
        }
    }
    Ok((result, None))
}
