//! Independent cross-check oracles: PPT separability (exact in 2x2 and 2x3),
//! spin-flip concurrence, and entropy of entanglement.

use crate::error::{QcorrError, Result};
use crate::linalg::{hermitian_eigenvalues_desc, sqrt_psd, CMatrix, C64};
use crate::schmidt::schmidt_decompose;
use crate::state::{DensityMatrix, Ket};
use crate::tol;

fn bipartite_dims(rho: &DensityMatrix) -> Result<(usize, usize)> {
    if rho.n_factors() != 2 {
        return Err(QcorrError::NotBipartite {
            factors: rho.n_factors(),
        });
    }
    Ok((rho.dims()[0], rho.dims()[1]))
}

/// Partial transpose on the second (Bob) factor.
pub fn partial_transpose(rho: &DensityMatrix) -> Result<CMatrix> {
    let (da, db) = bipartite_dims(rho)?;
    let mut out = CMatrix::zeros(rho.dim(), rho.dim());
    for i in 0..da {
        for k in 0..da {
            for j in 0..db {
                for l in 0..db {
                    out[(i * db + j, k * db + l)] = rho.data()[(i * db + l, k * db + j)];
                }
            }
        }
    }
    Ok(out)
}

/// Smallest eigenvalue of the partial transpose.
pub fn min_ppt_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    let pt = partial_transpose(rho)?;
    Ok(hermitian_eigenvalues_desc(&pt)
        .last()
        .copied()
        .unwrap_or(0.0))
}

/// PPT separability test; exact for 2x2 and 2x3 systems, which is all it
/// accepts.
pub fn is_separable_ppt(rho: &DensityMatrix) -> Result<bool> {
    let (da, db) = bipartite_dims(rho)?;
    if da * db > 6 || da.min(db) < 1 || da.max(db) > 3 || da * db < 4 {
        return Err(QcorrError::UnsupportedDims { dim_a: da, dim_b: db });
    }
    Ok(min_ppt_eigenvalue(rho)? >= -tol::PSD_FLOOR)
}

/// Wootters spin-flip concurrence for two qubits, in [0, 1].
pub fn concurrence_2q(rho: &DensityMatrix) -> Result<f64> {
    let (da, db) = bipartite_dims(rho)?;
    if (da, db) != (2, 2) {
        return Err(QcorrError::DimensionMismatch {
            context: format!("concurrence_2q needs dims (2, 2), got ({da}, {db})"),
        });
    }
    // sigma_y (x) sigma_y in the computational basis has entries +-1 on the
    // antidiagonal: (0,3) -> -1, (1,2) -> +1, (2,1) -> +1, (3,0) -> -1.
    let mut yy = CMatrix::zeros(4, 4);
    yy[(0, 3)] = C64::from(-1.0);
    yy[(1, 2)] = C64::ONE;
    yy[(2, 1)] = C64::ONE;
    yy[(3, 0)] = C64::from(-1.0);
    let conj = rho.data().map(|z| z.conj());
    let tilde = &yy * conj * &yy;
    let root = sqrt_psd(rho.data());
    let m = &root * tilde * &root;
    let mut mu = hermitian_eigenvalues_desc(&m);
    for x in mu.iter_mut() {
        // The sqrt turns eigensolver noise (~1e-16) into ~1e-8 offsets, so
        // clip to zero below the noise floor first.
        *x = if *x < 1e-14 { 0.0 } else { x.sqrt() };
    }
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).max(0.0))
}

/// Entropy of entanglement of a bipartite pure state, in bits.
pub fn entropy_of_entanglement(psi: &Ket) -> Result<f64> {
    let schmidt = schmidt_decompose(psi)?;
    Ok(crate::coherence::shannon_entropy_bits(
        schmidt.coefficients(),
    ))
}
