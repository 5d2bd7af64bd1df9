//! Local product bases for bipartite coherence evaluations.

use crate::error::{QcorrError, Result};
use crate::linalg::{unitarity_deviation, CMatrix};
use crate::tol;

/// An ordered pair of local orthonormal bases, stored column-wise. The
/// composite basis is their Kronecker product.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalBasisPair {
    basis_a: CMatrix,
    basis_b: CMatrix,
}

impl LocalBasisPair {
    pub fn new(basis_a: CMatrix, basis_b: CMatrix) -> Result<Self> {
        for (name, basis) in [("A", &basis_a), ("B", &basis_b)] {
            if basis.nrows() != basis.ncols() || basis.nrows() == 0 {
                return Err(QcorrError::DimensionMismatch {
                    context: format!(
                        "basis {name} is {}x{}, expected square and nonempty",
                        basis.nrows(),
                        basis.ncols()
                    ),
                });
            }
            let dev = unitarity_deviation(basis);
            if dev > tol::ORTHONORMALITY {
                return Err(QcorrError::NotOrthonormal { max_dev: dev });
            }
        }
        Ok(Self { basis_a, basis_b })
    }

    pub fn computational(dim_a: usize, dim_b: usize) -> Self {
        Self {
            basis_a: CMatrix::identity(dim_a, dim_a),
            basis_b: CMatrix::identity(dim_b, dim_b),
        }
    }

    pub fn basis_a(&self) -> &CMatrix {
        &self.basis_a
    }

    pub fn basis_b(&self) -> &CMatrix {
        &self.basis_b
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.basis_a.nrows(), self.basis_b.nrows())
    }

    /// Composite basis `B_A (x) B_B` on the joint space.
    pub fn composite(&self) -> CMatrix {
        self.basis_a.kronecker(&self.basis_b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c64;

    #[test]
    fn computational_composite_is_identity() {
        let pair = LocalBasisPair::computational(2, 3);
        assert_eq!(pair.dims(), (2, 3));
        assert_eq!(pair.composite(), CMatrix::identity(6, 6));
    }

    #[test]
    fn non_orthonormal_basis_is_rejected() {
        let mut bad = CMatrix::identity(2, 2);
        bad[(0, 0)] = c64(0.9, 0.0);
        let err = LocalBasisPair::new(bad, CMatrix::identity(2, 2)).unwrap_err();
        assert!(matches!(err, QcorrError::NotOrthonormal { .. }));
    }

    #[test]
    fn composite_of_hadamards_is_orthonormal() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = CMatrix::from_row_slice(
            2,
            2,
            &[c64(s, 0.0), c64(s, 0.0), c64(s, 0.0), c64(-s, 0.0)],
        );
        let pair = LocalBasisPair::new(h.clone(), h).unwrap();
        assert!(unitarity_deviation(&pair.composite()) < 1e-12);
    }
}
