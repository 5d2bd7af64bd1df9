//! Degeneracy clustering of marginal spectra.
//!
//! The admissible local bases for the correlated-coherence minimization are
//! the marginal eigenbases, unique up to rotations inside (near-)degenerate
//! eigenspaces. Clustering decides which eigenvalues share an eigenspace for
//! optimization purposes.

use crate::linalg::CMatrix;
use crate::state::DensityMatrix;

/// A maximal run of near-equal eigenvalues in a descending spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenCluster {
    /// Index of the first member in the descending spectrum.
    pub start: usize,
    pub multiplicity: usize,
    /// Mean eigenvalue of the cluster.
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct DegeneracyProfile {
    pub clusters: Vec<EigenCluster>,
    pub eps_deg: f64,
}

impl DegeneracyProfile {
    pub fn is_nondegenerate(&self) -> bool {
        self.clusters.iter().all(|c| c.multiplicity == 1)
    }

    /// Real parameters of the residual unitary freedom: `sum multiplicity^2`
    /// over clusters with multiplicity above one.
    pub fn free_parameter_count(&self) -> usize {
        self.clusters
            .iter()
            .filter(|c| c.multiplicity > 1)
            .map(|c| c.multiplicity * c.multiplicity)
            .sum()
    }
}

/// Single-linkage clustering of a descending spectrum: adjacent values join
/// the same cluster when their gap stays below `eps_deg` relative to their
/// combined magnitude. Gaps at rounding level always merge so exact
/// degeneracies (including zero runs) land in one cluster.
pub fn cluster_spectrum(values: &[f64], eps_deg: f64) -> Vec<EigenCluster> {
    let mut clusters: Vec<EigenCluster> = Vec::new();
    let mut start = 0usize;
    for k in 1..=values.len() {
        let split = k == values.len() || {
            let gap = values[k - 1] - values[k];
            gap > 1e-14 && gap >= eps_deg * (values[k - 1] + values[k]) - 1e-14
        };
        if split {
            let members = &values[start..k];
            clusters.push(EigenCluster {
                start,
                multiplicity: members.len(),
                value: members.iter().sum::<f64>() / members.len() as f64,
            });
            start = k;
        }
    }
    clusters
}

/// The admissible-basis data of one marginal: its eigenbasis (descending,
/// phase-fixed) plus the degeneracy profile at the given threshold.
#[derive(Debug, Clone)]
pub struct AdmissibleBases {
    pub eigenvalues: Vec<f64>,
    pub eigenbasis: CMatrix,
    pub profile: DegeneracyProfile,
}

pub fn admissible_bases(marginal: &DensityMatrix, eps_deg: f64) -> AdmissibleBases {
    let (eigenvalues, eigenbasis) = marginal.eigen();
    let clusters = cluster_spectrum(&eigenvalues, eps_deg);
    AdmissibleBases {
        eigenvalues,
        eigenbasis,
        profile: DegeneracyProfile { clusters, eps_deg },
    }
}
