//! Density matrices and kets on labeled tensor-product spaces.
//!
//! Factor labels name the party that owns each factor: labels starting with
//! `A` belong to Alice, labels starting with `B` to Bob, and every Alice
//! factor must precede every Bob factor. A plain bipartite state is
//! `dims [dA, dB]`, `labels ["A", "B"]`; extended states add primed ancilla
//! factors such as `["A", "A'", "B", "B'"]`.

use crate::error::{QcorrError, Result};
use crate::linalg::{
    clip_small_negative, hermiticity_deviation, hermitian_eigen_desc, hermitian_eigenvalues_desc,
    CMatrix, CVector, C64,
};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Alice,
    Bob,
}

impl Party {
    pub fn from_label(label: &str) -> Result<Party> {
        match label.chars().next() {
            Some('A') => Ok(Party::Alice),
            Some('B') => Ok(Party::Bob),
            _ => Err(QcorrError::InvalidLabels {
                context: format!("label '{label}' must start with 'A' or 'B'"),
            }),
        }
    }
}

pub(crate) fn validate_layout(dims: &[usize], labels: &[String], total: usize) -> Result<()> {
    if dims.is_empty() {
        return Err(QcorrError::InvalidArgument {
            context: "dims must be nonempty".into(),
        });
    }
    if dims.len() != labels.len() {
        return Err(QcorrError::InvalidLabels {
            context: format!("{} dims but {} labels", dims.len(), labels.len()),
        });
    }
    let mut product = 1usize;
    for &d in dims {
        if d == 0 {
            return Err(QcorrError::InvalidArgument {
                context: "factor dimension 0".into(),
            });
        }
        if d > tol::MAX_FACTOR_DIM {
            return Err(QcorrError::SizeLimit {
                context: format!("factor dimension {d} exceeds max {}", tol::MAX_FACTOR_DIM),
            });
        }
        product = product.checked_mul(d).ok_or(QcorrError::SizeLimit {
            context: "dimension product overflows".into(),
        })?;
    }
    if product > tol::MAX_TOTAL_DIM {
        return Err(QcorrError::SizeLimit {
            context: format!(
                "total dimension {product} exceeds max {}",
                tol::MAX_TOTAL_DIM
            ),
        });
    }
    if product != total {
        return Err(QcorrError::DimensionMismatch {
            context: format!("dims product {product} does not match data dimension {total}"),
        });
    }
    let mut seen_bob = false;
    for (k, label) in labels.iter().enumerate() {
        match Party::from_label(label)? {
            Party::Alice if seen_bob => {
                return Err(QcorrError::InvalidLabels {
                    context: format!("Alice factor '{label}' appears after a Bob factor"),
                });
            }
            Party::Alice => {}
            Party::Bob => seen_bob = true,
        }
        if labels[..k].contains(label) {
            return Err(QcorrError::InvalidLabels {
                context: format!("duplicate label '{label}'"),
            });
        }
    }
    Ok(())
}

pub fn default_labels(n_factors: usize) -> Result<Vec<String>> {
    match n_factors {
        1 => Ok(vec!["A".into()]),
        2 => Ok(vec!["A".into(), "B".into()]),
        4 => Ok(vec!["A".into(), "A'".into(), "B".into(), "B'".into()]),
        n => Err(QcorrError::InvalidLabels {
            context: format!("no default labels for {n} factors; pass labels explicitly"),
        }),
    }
}

/// A dense density matrix on a labeled tensor-product space.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    data: CMatrix,
    dims: Vec<usize>,
    labels: Vec<String>,
}

impl DensityMatrix {
    /// Validating constructor: checks layout, Hermiticity, unit trace, and
    /// positive semidefiniteness.
    pub fn new(data: CMatrix, dims: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(QcorrError::DimensionMismatch {
                context: format!("matrix is {}x{}, not square", data.nrows(), data.ncols()),
            });
        }
        validate_layout(&dims, &labels, data.nrows())?;
        let herm = hermiticity_deviation(&data);
        if herm > tol::HERMITICITY {
            return Err(QcorrError::NotHermitian { max_dev: herm });
        }
        let trace = data.trace();
        if (trace.re - 1.0).abs() > tol::TRACE || trace.im.abs() > tol::TRACE {
            return Err(QcorrError::TraceNotOne { trace: trace.re });
        }
        let min_eig = hermitian_eigenvalues_desc(&data)
            .last()
            .copied()
            .unwrap_or(0.0);
        if min_eig < -tol::PSD_FLOOR {
            return Err(QcorrError::NotPositiveSemidefinite {
                min_eigenvalue: min_eig,
            });
        }
        Ok(Self { data, dims, labels })
    }

    pub fn with_default_labels(data: CMatrix, dims: Vec<usize>) -> Result<Self> {
        let labels = default_labels(dims.len())?;
        Self::new(data, dims, labels)
    }

    /// Constructor for internal operations whose outputs are valid by
    /// construction (tensor products, partial traces, unitary conjugations,
    /// dephasings of already-validated states). Layout is still checked in
    /// debug builds.
    pub(crate) fn new_unchecked(data: CMatrix, dims: Vec<usize>, labels: Vec<String>) -> Self {
        debug_assert!(validate_layout(&dims, &labels, data.nrows()).is_ok());
        Self { data, dims, labels }
    }

    pub fn data(&self) -> &CMatrix {
        &self.data
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn n_factors(&self) -> usize {
        self.dims.len()
    }

    pub fn factor_index(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn party_indices(&self, party: Party) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, l)| matches!(Party::from_label(l), Ok(p) if p == party))
            .map(|(k, _)| k)
            .collect()
    }

    pub fn party_labels(&self, party: Party) -> Vec<String> {
        self.party_indices(party)
            .into_iter()
            .map(|k| self.labels[k].clone())
            .collect()
    }

    pub fn party_dim(&self, party: Party) -> usize {
        self.party_indices(party)
            .into_iter()
            .map(|k| self.dims[k])
            .product()
    }

    pub fn trace(&self) -> C64 {
        self.data.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.data * &self.data).trace().re
    }

    /// Eigenvalues in descending order with tiny negatives clipped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues_desc(&self.data)
            .into_iter()
            .map(clip_small_negative)
            .collect()
    }

    /// Eigendecomposition with descending eigenvalues (clipped) and
    /// phase-fixed eigenvector columns.
    pub fn eigen(&self) -> (Vec<f64>, CMatrix) {
        let (values, vectors) = hermitian_eigen_desc(&self.data);
        (values.into_iter().map(clip_small_negative).collect(), vectors)
    }

    /// Number of eigenvalues above the rank cutoff.
    pub fn numerical_rank(&self) -> usize {
        self.eigenvalues()
            .iter()
            .filter(|&&x| x > tol::RANK_CUTOFF)
            .count()
    }

    pub fn is_pure(&self) -> bool {
        self.purity() >= 1.0 - tol::PURE_PURITY
    }

    /// Principal eigenvector as a ket; meaningful for (near-)pure states.
    pub fn principal_ket(&self) -> Ket {
        let (_, vectors) = self.eigen();
        let amplitudes = CVector::from_column_slice(vectors.column(0).as_slice());
        Ket::new_unchecked(amplitudes, self.dims.clone())
    }

    /// Relabels the factors in place after validating the new layout.
    pub fn relabeled(mut self, labels: Vec<String>) -> Result<Self> {
        validate_layout(&self.dims, &labels, self.data.nrows())?;
        self.labels = labels;
        Ok(self)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        crate::linalg::max_abs_diff(&self.data, &other.data)
    }

    pub fn maximally_mixed(dims: Vec<usize>, labels: Vec<String>) -> Result<Self> {
        let total: usize = dims.iter().product();
        let data = CMatrix::identity(total, total) / C64::from(total as f64);
        Self::new(data, dims, labels)
    }
}

/// A pure state vector on a labeled-by-position tensor-product space.
#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    amplitudes: CVector,
    dims: Vec<usize>,
}

impl Ket {
    pub fn new(amplitudes: CVector, dims: Vec<usize>) -> Result<Self> {
        let product: usize = dims.iter().product();
        if dims.is_empty() || product != amplitudes.len() {
            return Err(QcorrError::DimensionMismatch {
                context: format!(
                    "dims {:?} do not match amplitude length {}",
                    dims,
                    amplitudes.len()
                ),
            });
        }
        for &d in &dims {
            if d == 0 || d > tol::MAX_FACTOR_DIM {
                return Err(QcorrError::SizeLimit {
                    context: format!("factor dimension {d} outside 1..={}", tol::MAX_FACTOR_DIM),
                });
            }
        }
        if product > tol::MAX_TOTAL_DIM {
            return Err(QcorrError::SizeLimit {
                context: format!("total dimension {product} exceeds max {}", tol::MAX_TOTAL_DIM),
            });
        }
        let norm = amplitudes.norm();
        if (norm - 1.0).abs() > tol::KET_NORM {
            return Err(QcorrError::NotNormalized { norm });
        }
        Ok(Self { amplitudes, dims })
    }

    pub(crate) fn new_unchecked(amplitudes: CVector, dims: Vec<usize>) -> Self {
        Self { amplitudes, dims }
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// (dA, dB) for a two-factor ket.
    pub fn bipartite_dims(&self) -> Result<(usize, usize)> {
        if self.dims.len() != 2 {
            return Err(QcorrError::NotBipartite {
                factors: self.dims.len(),
            });
        }
        Ok((self.dims[0], self.dims[1]))
    }

    pub fn to_density(&self, labels: Vec<String>) -> Result<DensityMatrix> {
        let data = &self.amplitudes * self.amplitudes.adjoint();
        DensityMatrix::new(data, self.dims.clone(), labels)
    }

    pub fn to_density_default(&self) -> Result<DensityMatrix> {
        self.to_density(default_labels(self.dims.len())?)
    }

    /// Overlap magnitude |<self|other>|.
    pub fn overlap_abs(&self, other: &Ket) -> f64 {
        self.amplitudes.dotc(&other.amplitudes).norm()
    }

    /// Deviation from `other` modulo global phase: min over phases of the
    /// vector distance, computed as sqrt(2 - 2|<a|b>|) guarded at zero.
    pub fn distance_up_to_phase(&self, other: &Ket) -> f64 {
        let overlap = self.overlap_abs(other).min(1.0);
        (2.0 - 2.0 * overlap).max(0.0).sqrt()
    }

    /// Computational basis state |index> in the given dims.
    pub fn basis_state(dims: Vec<usize>, index: usize) -> Result<Self> {
        let total: usize = dims.iter().product();
        if index >= total {
            return Err(QcorrError::InvalidArgument {
                context: format!("basis index {index} out of range for dimension {total}"),
            });
        }
        let mut amplitudes = CVector::zeros(total);
        amplitudes[index] = C64::ONE;
        Self::new(amplitudes, dims)
    }
}

/// Validation entry point shared by loaders: verifies a raw matrix is a
/// density matrix and reports the first violated invariant.
pub fn check_density(data: &CMatrix) -> Result<()> {
    let herm = hermiticity_deviation(data);
    if herm > tol::HERMITICITY {
        return Err(QcorrError::NotHermitian { max_dev: herm });
    }
    let trace = data.trace();
    if (trace.re - 1.0).abs() > tol::TRACE || trace.im.abs() > tol::TRACE {
        return Err(QcorrError::TraceNotOne { trace: trace.re });
    }
    let min_eig = hermitian_eigenvalues_desc(data).last().copied().unwrap_or(0.0);
    if min_eig < -tol::PSD_FLOOR {
        return Err(QcorrError::NotPositiveSemidefinite {
            min_eigenvalue: min_eig,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;
    use nalgebra::Complex;

    fn bell_phi_plus() -> Ket {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Ket::new(
            CVector::from_vec(vec![c64(s, 0.0), C64::ZERO, C64::ZERO, c64(s, 0.0)]),
            vec![2, 2],
        )
        .unwrap()
    }

    #[test]
    fn valid_bell_state_constructs() {
        let rho = bell_phi_plus().to_density_default().unwrap();
        assert_eq!(rho.dim(), 4);
        assert_eq!(rho.labels(), &["A".to_string(), "B".to_string()]);
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!(rho.is_pure());
    }

    #[test]
    fn non_hermitian_is_rejected() {
        let mut data = CMatrix::identity(2, 2) * c64(0.5, 0.0);
        data[(0, 1)] = c64(0.3, 0.0);
        let err = DensityMatrix::new(data, vec![2], vec!["A".into()]).unwrap_err();
        assert!(matches!(err, QcorrError::NotHermitian { .. }));
    }

    #[test]
    fn wrong_trace_is_rejected() {
        let data = CMatrix::identity(2, 2);
        let err = DensityMatrix::new(data, vec![2], vec!["A".into()]).unwrap_err();
        assert!(matches!(err, QcorrError::TraceNotOne { trace } if (trace - 2.0).abs() < 1e-12));
    }

    #[test]
    fn negative_eigenvalue_is_rejected_with_value_in_message() {
        let data = CMatrix::from_row_slice(
            2,
            2,
            &[c64(1.02, 0.0), C64::ZERO, C64::ZERO, c64(-0.02, 0.0)],
        );
        let err = DensityMatrix::new(data, vec![2], vec!["A".into()]).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("min eigenvalue"), "message was: {msg}");
        assert!(msg.contains("-0.02"), "message was: {msg}");
    }

    #[test]
    fn tiny_negative_eigenvalue_is_tolerated_and_clipped() {
        let eps = 5e-11;
        let data = CMatrix::from_row_slice(
            2,
            2,
            &[c64(1.0 + eps, 0.0), C64::ZERO, C64::ZERO, c64(-eps, 0.0)],
        );
        let rho = DensityMatrix::new(data, vec![2], vec!["A".into()]).unwrap();
        let eigs = rho.eigenvalues();
        assert_eq!(eigs.last().copied().unwrap(), 0.0);
    }

    #[test]
    fn label_ordering_is_enforced() {
        let data = CMatrix::identity(4, 4) * c64(0.25, 0.0);
        let err = DensityMatrix::new(data, vec![2, 2], vec!["B".into(), "A".into()]).unwrap_err();
        assert!(matches!(err, QcorrError::InvalidLabels { .. }));
    }

    #[test]
    fn size_limits_are_enforced() {
        let data = CMatrix::identity(32, 32) / c64(32.0, 0.0);
        let err = DensityMatrix::new(data, vec![32], vec!["A".into()]).unwrap_err();
        assert!(matches!(err, QcorrError::SizeLimit { .. }));
    }

    #[test]
    fn ket_norm_is_enforced() {
        let err = Ket::new(CVector::from_vec(vec![c64(0.9, 0.0), C64::ZERO]), vec![2]).unwrap_err();
        assert!(matches!(err, QcorrError::NotNormalized { .. }));
    }

    #[test]
    fn party_grouping_on_extended_labels() {
        let dims = vec![2, 2, 2, 2];
        let labels: Vec<String> = ["A", "A'", "B", "B'"].iter().map(|s| s.to_string()).collect();
        let rho = DensityMatrix::maximally_mixed(dims, labels).unwrap();
        assert_eq!(rho.party_indices(Party::Alice), vec![0, 1]);
        assert_eq!(rho.party_indices(Party::Bob), vec![2, 3]);
        assert_eq!(rho.party_dim(Party::Alice), 4);
    }

    #[test]
    fn distance_up_to_phase_ignores_global_phase() {
        let psi = bell_phi_plus();
        let rotated = Ket::new(psi.amplitudes() * Complex::from_polar(1.0, 1.234), vec![2, 2]).unwrap();
        assert!(psi.distance_up_to_phase(&rotated) < 1e-12);
    }
}
