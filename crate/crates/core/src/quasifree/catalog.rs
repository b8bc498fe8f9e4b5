//! Named translation-invariant chains.
//!
//! Spin forms (open chain, `Z = 2 c^dag c - 1`):
//!
//! * `kitaev(J, lambda)`: `-J sum X_k X_{k+1} + lambda sum Z_k`
//! * `xy(gamma, lambda)`: `-sum [(1+gamma)/2 X X + (1-gamma)/2 Y Y] + lambda sum Z`
//! * `trivial(mu)`: `mu sum Z_k`, `mu > 0`
//! * `custom(a0, a1, .., b1, ..)`: banded `A_{k,k+r} = a_r`, `B_{k,k+r} = b_r`
//!
//! `kitaev` with `J = 1`, `lambda = 0` is the ferromagnetic Ising chain whose
//! ground state has `<X_k> = 1` in the symmetry-broken sector.

use std::collections::BTreeMap;

use faer::Mat;
use num_complex::Complex64;

use super::hamiltonian::{Boundary, QuadraticHamiltonian};
use crate::error::{Error, Result};
use crate::jw::{Pauli, PauliString};

pub const MODEL_NAMES: [&str; 4] = ["kitaev", "xy", "trivial", "custom"];

/// Band description: `hop[r]` is `A_{k,k+r}` and `pair[r]` is `B_{k,k+r}`
/// (`pair[0]` is ignored).
#[derive(Debug, Clone)]
struct Bands {
    hop: Vec<f64>,
    pair: Vec<f64>,
}

impl Bands {
    fn range(&self) -> usize {
        let last = |v: &[f64]| v.iter().rposition(|&x| x != 0.0).unwrap_or(0);
        last(&self.hop).max(last(&self.pair))
    }
}

fn take(params: &BTreeMap<String, f64>, model: &str, allowed: &[&str]) -> Result<Vec<f64>> {
    for key in params.keys() {
        if !allowed.contains(&key.as_str()) {
            return Err(Error::UnexpectedParameter {
                model: model.into(),
                param: key.clone(),
            });
        }
    }
    allowed
        .iter()
        .map(|&p| {
            let v = *params.get(p).ok_or_else(|| Error::MissingParameter {
                model: model.into(),
                param: p.into(),
            })?;
            if !v.is_finite() {
                return Err(Error::InvalidParameter {
                    param: p.into(),
                    reason: "must be finite".into(),
                });
            }
            Ok(v)
        })
        .collect()
}

fn bands(name: &str, params: &BTreeMap<String, f64>) -> Result<Bands> {
    match name {
        "kitaev" => {
            let v = take(params, name, &["J", "lambda"])?;
            let (j, l) = (v[0], v[1]);
            Ok(Bands {
                hop: vec![l, 0.5 * j],
                pair: vec![0.0, 0.5 * j],
            })
        }
        "xy" => {
            let v = take(params, name, &["gamma", "lambda"])?;
            let (g, l) = (v[0], v[1]);
            Ok(Bands {
                hop: vec![l, 0.5],
                pair: vec![0.0, 0.5 * g],
            })
        }
        "trivial" => {
            let v = take(params, name, &["mu"])?;
            if v[0] <= 0.0 {
                return Err(Error::InvalidParameter {
                    param: "mu".into(),
                    reason: "must be positive".into(),
                });
            }
            Ok(Bands {
                hop: vec![v[0]],
                pair: vec![0.0],
            })
        }
        "custom" => {
            let mut hop = Vec::new();
            let mut pair = vec![0.0];
            for (key, &v) in params {
                let (kind, idx) = key.split_at(1);
                let r: usize = idx.parse().map_err(|_| Error::UnexpectedParameter {
                    model: name.into(),
                    param: key.clone(),
                })?;
                if !v.is_finite() {
                    return Err(Error::InvalidParameter {
                        param: key.clone(),
                        reason: "must be finite".into(),
                    });
                }
                let target = match kind {
                    "a" => &mut hop,
                    "b" if r >= 1 => &mut pair,
                    _ => {
                        return Err(Error::UnexpectedParameter {
                            model: name.into(),
                            param: key.clone(),
                        })
                    }
                };
                if target.len() <= r {
                    target.resize(r + 1, 0.0);
                }
                target[r] = v;
            }
            if hop.is_empty() && pair.len() == 1 {
                return Err(Error::MissingParameter {
                    model: name.into(),
                    param: "a0".into(),
                });
            }
            if hop.is_empty() {
                hop.push(0.0);
            }
            Ok(Bands { hop, pair })
        }
        other => Err(Error::UnknownModel(other.into())),
    }
}

/// Builds a catalog model. Open chains need `sites >= range + 1`, rings
/// `sites >= 2 * range + 1` so that no bond wraps onto itself.
pub fn build_model(
    name: &str,
    sites: usize,
    params: &BTreeMap<String, f64>,
    boundary: Boundary,
) -> Result<QuadraticHamiltonian> {
    let bands = bands(name, params)?;
    let range = bands.range().max(1);
    let needed = match boundary {
        Boundary::Open => range + 1,
        Boundary::Ring => 2 * range + 1,
    };
    if sites < needed.max(2) {
        return Err(Error::ChainTooShort {
            sites,
            range,
            boundary: boundary.as_str(),
        });
    }
    let mut a = Mat::<Complex64>::zeros(sites, sites);
    let mut b = Mat::<Complex64>::zeros(sites, sites);
    for k in 0..sites {
        for r in 0..=range {
            let j = k + r;
            let j = match boundary {
                Boundary::Open if j >= sites => continue,
                Boundary::Open => j,
                Boundary::Ring => j % sites,
            };
            if let Some(&t) = bands.hop.get(r) {
                if t != 0.0 {
                    a[(k, j)] += Complex64::new(t, 0.0);
                    if r > 0 {
                        a[(j, k)] += Complex64::new(t, 0.0);
                    }
                }
            }
            if r > 0 {
                if let Some(&d) = bands.pair.get(r) {
                    if d != 0.0 {
                        b[(k, j)] += Complex64::new(d, 0.0);
                        b[(j, k)] -= Complex64::new(d, 0.0);
                    }
                }
            }
        }
    }
    QuadraticHamiltonian::new(a, b, boundary)
}

/// Spin-chain form of a named model, built directly from Pauli letters (not
/// through the fermion map). `None` for `custom`.
///
/// `Ring` closes the chain periodically in the spins; unlike the fermion
/// ring this is not a quadratic fermion model.
pub fn pauli_terms(
    name: &str,
    sites: usize,
    params: &BTreeMap<String, f64>,
    boundary: Boundary,
) -> Result<Option<Vec<PauliString>>> {
    // validates the parameters the same way build_model does
    bands(name, params)?;
    if boundary == Boundary::Ring && sites < 3 {
        return Err(Error::ChainTooShort {
            sites,
            range: 1,
            boundary: boundary.as_str(),
        });
    }
    let c = |x: f64| Complex64::new(x, 0.0);
    let single = |site: usize, p: Pauli| PauliString::single(0, sites, site as i64, p);
    let pair = |site: usize, p: Pauli| &single(site, p) * &single((site + 1) % sites, p);
    let mut terms = Vec::new();
    let (xx, yy, field) = match name {
        "kitaev" => (-params["J"], 0.0, params["lambda"]),
        "xy" => {
            let g = params["gamma"];
            (-(1.0 + g) / 2.0, -(1.0 - g) / 2.0, params["lambda"])
        }
        "trivial" => (0.0, 0.0, params["mu"]),
        _ => return Ok(None),
    };
    for k in 0..sites {
        if field != 0.0 {
            terms.push(single(k, Pauli::Z).with_coeff(c(field)));
        }
        if k + 1 < sites || boundary == Boundary::Ring {
            if xx != 0.0 {
                terms.push(pair(k, Pauli::X).with_coeff(c(xx)));
            }
            if yy != 0.0 {
                terms.push(pair(k, Pauli::Y).with_coeff(c(yy)));
            }
        }
    }
    Ok(Some(terms))
}

pub fn params<const N: usize>(pairs: [(&str, f64); N]) -> BTreeMap<String, f64> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}
