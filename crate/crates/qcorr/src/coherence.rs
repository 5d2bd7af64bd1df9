//! Basis-dependent coherence measures.
//!
//! Both measures vanish exactly on states diagonal in the reference basis,
//! are invariant under relabeling/unitary covariance, and are convex, which
//! is what the correlated-coherence quantifiers downstream rely on.

use crate::basis::LocalBasisPair;
use crate::error::{QcorrError, Result};
use crate::linalg::{clip_small_negative, unitarity_deviation, CMatrix};
use crate::state::{DensityMatrix, Party};
use crate::tol;

/// Shannon entropy of a probability vector, in bits. Zero entries contribute
/// zero; tiny negatives from numerics are clipped.
pub fn shannon_entropy_bits(p: &[f64]) -> f64 {
    p.iter()
        .map(|&x| clip_small_negative(x).max(0.0))
        .filter(|&x| x > 0.0)
        .map(|x| -x * x.log2())
        .sum()
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_entropy_bits(&rho.eigenvalues())
}

/// A coherence measure evaluated relative to an orthonormal basis given
/// column-wise. Implementations must vanish exactly on basis-diagonal states
/// and be convex.
pub trait CoherenceMeasure: Sync {
    fn id(&self) -> &'static str;

    fn evaluate(&self, rho: &DensityMatrix, basis: &CMatrix) -> Result<f64>;

    /// Evaluates in the Kronecker product of a local basis pair; the pair's
    /// factor dims must match the state's party dims.
    fn evaluate_in_pair(&self, rho: &DensityMatrix, pair: &LocalBasisPair) -> Result<f64> {
        let expected = (rho.party_dim(Party::Alice), rho.party_dim(Party::Bob));
        if pair.dims() != expected {
            return Err(QcorrError::DimensionMismatch {
                context: format!(
                    "basis pair dims {:?} do not match party dims {:?}",
                    pair.dims(),
                    expected
                ),
            });
        }
        self.evaluate(rho, &pair.composite())
    }
}

fn rotated(rho: &DensityMatrix, basis: &CMatrix) -> Result<CMatrix> {
    if basis.nrows() != rho.dim() || basis.ncols() != rho.dim() {
        return Err(QcorrError::DimensionMismatch {
            context: format!(
                "basis is {}x{}, state dimension is {}",
                basis.nrows(),
                basis.ncols(),
                rho.dim()
            ),
        });
    }
    let dev = unitarity_deviation(basis);
    if dev > tol::ORTHONORMALITY {
        return Err(QcorrError::NotOrthonormal { max_dev: dev });
    }
    Ok(basis.adjoint() * rho.data() * basis)
}

/// The l1 measure: sum of off-diagonal magnitudes in the reference basis.
pub struct L1Coherence;

impl CoherenceMeasure for L1Coherence {
    fn id(&self) -> &'static str {
        "l1"
    }

    fn evaluate(&self, rho: &DensityMatrix, basis: &CMatrix) -> Result<f64> {
        let r = rotated(rho, basis)?;
        let n = r.nrows();
        let mut sum = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    sum += r[(i, j)].norm();
                }
            }
        }
        Ok(sum)
    }
}

/// The relative-entropy measure: `S(dephased rho) - S(rho)`, in bits.
pub struct RelativeEntropyCoherence;

impl CoherenceMeasure for RelativeEntropyCoherence {
    fn id(&self) -> &'static str {
        "relent"
    }

    fn evaluate(&self, rho: &DensityMatrix, basis: &CMatrix) -> Result<f64> {
        let r = rotated(rho, basis)?;
        let diagonal: Vec<f64> = (0..r.nrows()).map(|k| r[(k, k)].re).collect();
        let dephased_entropy = shannon_entropy_bits(&diagonal);
        // Dephasing can only raise entropy; clamp the tiny negative slack
        // numerics leave on (near-)diagonal states.
        Ok((dephased_entropy - von_neumann_entropy(rho)).max(0.0))
    }
}

pub static L1: L1Coherence = L1Coherence;
pub static RELENT: RelativeEntropyCoherence = RelativeEntropyCoherence;

pub const MEASURE_IDS: [&str; 2] = ["l1", "relent"];

pub fn all_measures() -> [&'static dyn CoherenceMeasure; 2] {
    [&L1, &RELENT]
}

pub fn measure_by_id(id: &str) -> Result<&'static dyn CoherenceMeasure> {
    match id {
        "l1" => Ok(&L1),
        "relent" => Ok(&RELENT),
        other => Err(QcorrError::UnknownMeasure { id: other.into() }),
    }
}
