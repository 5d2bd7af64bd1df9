//! Weighted ensembles of states and their mixtures.

use crate::error::{QcorrError, Result};
use crate::linalg::CMatrix;
use crate::state::{DensityMatrix, Ket};

#[derive(Debug, Clone)]
pub enum EnsembleMember {
    Pure(Ket),
    Mixed(DensityMatrix),
}

impl EnsembleMember {
    pub fn dims(&self) -> &[usize] {
        match self {
            EnsembleMember::Pure(k) => k.dims(),
            EnsembleMember::Mixed(m) => m.dims(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            EnsembleMember::Pure(k) => k.dim(),
            EnsembleMember::Mixed(m) => m.dim(),
        }
    }

    /// The member as a density matrix (projector for pure members).
    pub fn density_data(&self) -> CMatrix {
        match self {
            EnsembleMember::Pure(k) => k.amplitudes() * k.amplitudes().adjoint(),
            EnsembleMember::Mixed(m) => m.data().clone(),
        }
    }
}

/// A finite ensemble `{(w_i, state_i)}` with nonnegative weights summing to
/// one and members sharing a common dims layout.
#[derive(Debug, Clone)]
pub struct Ensemble {
    weights: Vec<f64>,
    members: Vec<EnsembleMember>,
}

impl Ensemble {
    pub fn new(weights: Vec<f64>, members: Vec<EnsembleMember>) -> Result<Self> {
        if weights.is_empty() || weights.len() != members.len() {
            return Err(QcorrError::InvalidArgument {
                context: format!(
                    "{} weights for {} members",
                    weights.len(),
                    members.len()
                ),
            });
        }
        if weights.iter().any(|&w| w < -1e-12) {
            return Err(QcorrError::InvalidArgument {
                context: "ensemble weights must be nonnegative".into(),
            });
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-10 {
            return Err(QcorrError::InvalidArgument {
                context: format!("ensemble weights sum to {sum}, expected 1"),
            });
        }
        let dims = members[0].dims().to_vec();
        for (k, m) in members.iter().enumerate() {
            if m.dims() != dims.as_slice() {
                return Err(QcorrError::DimensionMismatch {
                    context: format!(
                        "ensemble member {k} has dims {:?}, expected {:?}",
                        m.dims(),
                        dims
                    ),
                });
            }
        }
        Ok(Self { weights, members })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn members(&self) -> &[EnsembleMember] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dims(&self) -> &[usize] {
        self.members[0].dims()
    }

    /// The mixture `sum_i w_i rho_i` as a labeled density matrix.
    pub fn mixture(&self, labels: Vec<String>) -> Result<DensityMatrix> {
        let dim = self.members[0].dim();
        let mut data = CMatrix::zeros(dim, dim);
        for (w, m) in self.weights.iter().zip(&self.members) {
            data += m.density_data() * crate::linalg::c64(*w, 0.0);
        }
        DensityMatrix::new(data, self.dims().to_vec(), labels)
    }

    /// The members as `(weight, ket)` pairs. Mixed members must be projectors
    /// of unit purity, which are converted to their principal kets.
    pub fn pure_kets(&self) -> Result<Vec<(f64, Ket)>> {
        let mut out = Vec::with_capacity(self.len());
        for (k, (w, m)) in self.weights.iter().zip(&self.members).enumerate() {
            let ket = match m {
                EnsembleMember::Pure(ket) => ket.clone(),
                EnsembleMember::Mixed(rho) => {
                    if !rho.is_pure() {
                        return Err(QcorrError::InvalidArgument {
                            context: format!(
                                "ensemble member {k} is mixed (purity {:.6})",
                                rho.purity()
                            ),
                        });
                    }
                    rho.principal_ket()
                }
            };
            out.push((*w, ket));
        }
        Ok(out)
    }

    /// Max entry of |mixture - rho|.
    pub fn reconstruction_residual(&self, rho: &DensityMatrix) -> Result<f64> {
        if self.dims() != rho.dims() {
            return Err(QcorrError::DimensionMismatch {
                context: format!(
                    "ensemble dims {:?} vs state dims {:?}",
                    self.dims(),
                    rho.dims()
                ),
            });
        }
        let dim = rho.dim();
        let mut data = CMatrix::zeros(dim, dim);
        for (w, m) in self.weights.iter().zip(&self.members) {
            data += m.density_data() * crate::linalg::c64(*w, 0.0);
        }
        Ok(crate::linalg::max_abs_diff(&data, rho.data()))
    }
}
