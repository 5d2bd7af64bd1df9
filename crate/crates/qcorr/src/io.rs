//! JSON encodings for states, kets, and ensembles.
//!
//! Density matrices: `{"dims": [2, 2], "labels": ["A", "B"],
//! "matrix": [[[re, im], ...], ...]}` with rows in row-major order. Kets use
//! `"vector": [[re, im], ...]` instead of `"matrix"`. Ensembles are
//! `{"weights": [...], "states": [...]}` where each state is either form.
//! Parsing runs the full construction validation, so malformed input fails
//! with the violated invariant rather than a downstream panic.

use serde::{Deserialize, Serialize};

use crate::ensemble::{Ensemble, EnsembleMember};
use crate::error::{QcorrError, Result};
use crate::linalg::{c64, CMatrix, CVector};
use crate::state::{default_labels, DensityMatrix, Ket};

#[derive(Serialize, Deserialize)]
struct StateJson {
    dims: Vec<usize>,
    labels: Vec<String>,
    matrix: Vec<Vec<[f64; 2]>>,
}

#[derive(Serialize, Deserialize)]
struct KetJson {
    dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    vector: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct EnsembleJson {
    weights: Vec<f64>,
    states: Vec<serde_json::Value>,
}

pub fn state_to_json(rho: &DensityMatrix) -> String {
    let n = rho.dim();
    let matrix: Vec<Vec<[f64; 2]>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let z = rho.data()[(i, j)];
                    [z.re, z.im]
                })
                .collect()
        })
        .collect();
    serde_json::to_string_pretty(&StateJson {
        dims: rho.dims().to_vec(),
        labels: rho.labels().to_vec(),
        matrix,
    })
    .expect("plain data structure")
}

pub fn state_from_json(text: &str) -> Result<DensityMatrix> {
    let raw: StateJson = serde_json::from_str(text)?;
    let n: usize = raw.dims.iter().product();
    if raw.matrix.len() != n || raw.matrix.iter().any(|row| row.len() != n) {
        return Err(QcorrError::DimensionMismatch {
            context: format!(
                "matrix must be {n}x{n} for dims {:?}, got {} rows",
                raw.dims,
                raw.matrix.len()
            ),
        });
    }
    let mut data = CMatrix::zeros(n, n);
    for (i, row) in raw.matrix.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            data[(i, j)] = c64(re, im);
        }
    }
    DensityMatrix::new(data, raw.dims, raw.labels)
}

pub fn ket_to_json(psi: &Ket) -> String {
    let vector: Vec<[f64; 2]> = psi.amplitudes().iter().map(|z| [z.re, z.im]).collect();
    serde_json::to_string_pretty(&KetJson {
        dims: psi.dims().to_vec(),
        labels: default_labels(psi.dims().len()).ok(),
        vector,
    })
    .expect("plain data structure")
}

pub fn ket_from_json(text: &str) -> Result<Ket> {
    let raw: KetJson = serde_json::from_str(text)?;
    let n: usize = raw.dims.iter().product();
    if raw.vector.len() != n {
        return Err(QcorrError::DimensionMismatch {
            context: format!(
                "vector must have {n} entries for dims {:?}, got {}",
                raw.dims,
                raw.vector.len()
            ),
        });
    }
    let amps = CVector::from_iterator(n, raw.vector.iter().map(|&[re, im]| c64(re, im)));
    Ket::new(amps, raw.dims)
}

/// Loads a state file holding either a density matrix (`"matrix"`) or a ket
/// (`"vector"`); kets are promoted to their projectors with default labels.
pub fn bipartite_state_from_json(text: &str) -> Result<DensityMatrix> {
    let probe: serde_json::Value = serde_json::from_str(text)?;
    if probe.get("matrix").is_some() {
        state_from_json(text)
    } else if probe.get("vector").is_some() {
        ket_from_json(text)?.to_density_default()
    } else {
        Err(QcorrError::InvalidArgument {
            context: "state object needs a 'matrix' or 'vector' field".into(),
        })
    }
}

pub fn ensemble_to_json(ensemble: &Ensemble) -> String {
    let states: Vec<serde_json::Value> = ensemble
        .members()
        .iter()
        .map(|m| {
            let text = match m {
                EnsembleMember::Pure(k) => ket_to_json(k),
                EnsembleMember::Mixed(r) => state_to_json(r),
            };
            serde_json::from_str(&text).expect("round-trip of emitted json")
        })
        .collect();
    serde_json::to_string_pretty(&EnsembleJson {
        weights: ensemble.weights().to_vec(),
        states,
    })
    .expect("plain data structure")
}

pub fn ensemble_from_json(text: &str) -> Result<Ensemble> {
    let raw: EnsembleJson = serde_json::from_str(text)?;
    let mut members = Vec::with_capacity(raw.states.len());
    for value in &raw.states {
        let text = value.to_string();
        if value.get("matrix").is_some() {
            members.push(EnsembleMember::Mixed(state_from_json(&text)?));
        } else if value.get("vector").is_some() {
            members.push(EnsembleMember::Pure(ket_from_json(&text)?));
        } else {
            return Err(QcorrError::InvalidArgument {
                context: "ensemble member needs a 'matrix' or 'vector' field".into(),
            });
        }
    }
    Ensemble::new(raw.weights, members)
}
