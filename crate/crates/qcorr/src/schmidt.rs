//! Schmidt decomposition of bipartite kets.

use crate::basis::LocalBasisPair;
use crate::error::{QcorrError, Result};
use crate::linalg::{complete_orthonormal_basis, CMatrix, CVector, C64};
use crate::state::Ket;
use crate::tol;

/// Schmidt form of a bipartite ket: `psi = sum_k sqrt(lambda_k) |a_k>|b_k>`
/// with `lambda` descending, strictly positive (exact zeros are truncated),
/// and summing to one. The stored vectors satisfy the reconstruction exactly,
/// with no residual global phase.
#[derive(Debug, Clone)]
pub struct SchmidtForm {
    coefficients: Vec<f64>,
    vectors_a: Vec<CVector>,
    vectors_b: Vec<CVector>,
    dims: (usize, usize),
}

impl SchmidtForm {
    /// The probabilities lambda_k, descending.
    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    pub fn vectors_a(&self) -> &[CVector] {
        &self.vectors_a
    }

    pub fn vectors_b(&self) -> &[CVector] {
        &self.vectors_b
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn reconstruct(&self) -> Ket {
        let (da, db) = self.dims;
        let mut amplitudes = CVector::zeros(da * db);
        for (k, &lambda) in self.coefficients.iter().enumerate() {
            let weight = C64::from(lambda.sqrt());
            for i in 0..da {
                for j in 0..db {
                    amplitudes[i * db + j] += weight * self.vectors_a[k][i] * self.vectors_b[k][j];
                }
            }
        }
        Ket::new_unchecked(amplitudes, vec![da, db])
    }

    /// Completes the Schmidt vectors on each side to full orthonormal local
    /// bases. The completion is deterministic and does not affect any
    /// coherence value evaluated in the pair.
    pub fn local_basis_pair(&self) -> Result<LocalBasisPair> {
        let basis_a = complete_orthonormal_basis(&self.vectors_a, self.dims.0);
        let basis_b = complete_orthonormal_basis(&self.vectors_b, self.dims.1);
        LocalBasisPair::new(basis_a, basis_b)
    }
}

/// Schmidt decomposition via SVD of the coefficient matrix.
pub fn schmidt_decompose(psi: &Ket) -> Result<SchmidtForm> {
    let (da, db) = psi.bipartite_dims()?;
    let mut m = CMatrix::zeros(da, db);
    for i in 0..da {
        for j in 0..db {
            m[(i, j)] = psi.amplitudes()[i * db + j];
        }
    }
    let svd = m.svd(true, true);
    let u = svd.u.as_ref().expect("svd with u");
    let v_t = svd.v_t.as_ref().expect("svd with v_t");
    let r = svd.singular_values.len();

    let mut order: Vec<usize> = (0..r).collect();
    order.sort_by(|&a, &b| {
        svd.singular_values[b]
            .partial_cmp(&svd.singular_values[a])
            .expect("singular values are finite")
    });

    let mut coefficients = Vec::new();
    let mut vectors_a = Vec::new();
    let mut vectors_b = Vec::new();
    for &k in &order {
        let sigma = svd.singular_values[k];
        let lambda = sigma * sigma;
        if lambda <= tol::SCHMIDT_TRUNCATION {
            continue;
        }
        let mut a_k = CVector::from_column_slice(u.column(k).as_slice());
        // v_t row k is v_k^dag; b_k = conj(v_k) = transpose of that row.
        let mut b_k = CVector::from_iterator(db, v_t.row(k).iter().copied());
        // Phase-fix a_k and move the compensating phase onto b_k so the
        // reconstruction stays exact.
        let first = a_k.iter().copied().find(|z| z.norm() > 1e-12).unwrap_or(C64::ONE);
        let phase = first / first.norm();
        a_k *= phase.conj();
        b_k *= phase;
        coefficients.push(lambda);
        vectors_a.push(a_k);
        vectors_b.push(b_k);
    }

    let form = SchmidtForm {
        coefficients,
        vectors_a,
        vectors_b,
        dims: (da, db),
    };
    let residual = form.reconstruct().distance_up_to_phase(psi);
    if residual > tol::SCHMIDT_RECONSTRUCTION {
        return Err(QcorrError::InvalidArgument {
            context: format!("schmidt reconstruction residual {residual:.3e}"),
        });
    }
    Ok(form)
}

/// The ket `sum_k sqrt(lambda_k) |kk>` with the given spectrum, padded into
/// dims `(d, d)` where `d = lambda.len()`.
pub fn ket_from_spectrum(lambda: &[f64]) -> Result<Ket> {
    let d = lambda.len();
    if d == 0 {
        return Err(QcorrError::InvalidArgument {
            context: "spectrum must be nonempty".into(),
        });
    }
    let sum: f64 = lambda.iter().sum();
    if lambda.iter().any(|&x| x < -1e-12) || (sum - 1.0).abs() > 1e-10 {
        return Err(QcorrError::InvalidArgument {
            context: format!("spectrum must be a probability vector, sum = {sum}"),
        });
    }
    let mut amplitudes = CVector::zeros(d * d);
    for (k, &l) in lambda.iter().enumerate() {
        amplitudes[k * d + k] = C64::from(l.max(0.0).sqrt());
    }
    amplitudes /= C64::from(amplitudes.norm());
    Ok(Ket::new_unchecked(amplitudes, vec![d, d]))
}
