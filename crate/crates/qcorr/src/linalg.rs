//! Thin helpers over nalgebra for dense complex linear algebra.

use nalgebra::{Complex, DMatrix, DVector};

use crate::tol;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// Largest entry magnitude of `m`.
pub fn max_abs_entry(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Largest entry magnitude of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    debug_assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .fold(0.0, |acc, (x, y)| acc.max((x - y).norm()))
}

/// Largest entry magnitude of `m - m^dag`.
pub fn hermiticity_deviation(m: &CMatrix) -> f64 {
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            dev = dev.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    dev
}

/// Largest entry magnitude of `U^dag U - I`.
pub fn unitarity_deviation(u: &CMatrix) -> f64 {
    let gram = u.adjoint() * u;
    let mut dev: f64 = 0.0;
    for i in 0..gram.nrows() {
        for j in 0..gram.ncols() {
            let target = if i == j { C64::ONE } else { C64::ZERO };
            dev = dev.max((gram[(i, j)] - target).norm());
        }
    }
    dev
}

/// Clips eigenvalues in `[-PSD_FLOOR, 0)` to zero; leaves everything else alone.
pub fn clip_small_negative(x: f64) -> f64 {
    if x < 0.0 && x >= -tol::PSD_FLOOR {
        0.0
    } else {
        x
    }
}

/// Multiplies `v` by a phase making its first entry of magnitude above 1e-12
/// real and nonnegative. Fixes the gauge of eigenvectors and basis columns.
pub fn phase_fix(v: &mut CVector) {
    for k in 0..v.len() {
        let z = v[k];
        if z.norm() > 1e-12 {
            let phase = z / z.norm();
            let correction = phase.conj();
            for entry in v.iter_mut() {
                *entry *= correction;
            }
            return;
        }
    }
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues sorted in
/// descending order and phase-fixed eigenvector columns. Ties keep the
/// backend's relative order.
pub fn hermitian_eigen_desc(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[b]
            .partial_cmp(&eig.eigenvalues[a])
            .expect("eigenvalues are finite")
    });
    let mut values = Vec::with_capacity(n);
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        values.push(eig.eigenvalues[src]);
        let mut col = CVector::from_column_slice(eig.eigenvectors.column(src).as_slice());
        phase_fix(&mut col);
        vectors.set_column(dst, &col);
    }
    (values, vectors)
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues_desc(m: &CMatrix) -> Vec<f64> {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
    values
}

/// exp(iH) for Hermitian `h`, via eigendecomposition.
pub fn exp_i_hermitian(h: &CMatrix) -> CMatrix {
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let n = h.nrows();
    let mut phases = CMatrix::zeros(n, n);
    for k in 0..n {
        phases[(k, k)] = Complex::from_polar(1.0, eig.eigenvalues[k]);
    }
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

/// Hermitian square root of a PSD matrix; small negative eigenvalues are clipped.
pub fn sqrt_psd(m: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen_desc(m);
    let n = m.nrows();
    let mut roots = CMatrix::zeros(n, n);
    for k in 0..n {
        roots[(k, k)] = C64::from(clip_small_negative(values[k]).max(0.0).sqrt());
    }
    &vectors * roots * vectors.adjoint()
}

/// Extends the orthonormal columns in `cols` to a full orthonormal basis of
/// dimension `dim`. Completion vectors are chosen greedily from the
/// computational basis (largest residual first, lowest index on ties), so the
/// result is deterministic.
pub fn complete_orthonormal_basis(cols: &[CVector], dim: usize) -> CMatrix {
    let mut basis: Vec<CVector> = cols.to_vec();
    while basis.len() < dim {
        let mut best: Option<(usize, f64, CVector)> = None;
        for k in 0..dim {
            let mut candidate = CVector::zeros(dim);
            candidate[k] = C64::ONE;
            for b in &basis {
                let overlap = b.dotc(&candidate);
                candidate -= b * overlap;
            }
            let norm = candidate.norm();
            if best.as_ref().is_none_or(|(_, n, _)| norm > *n) {
                best = Some((k, norm, candidate));
            }
        }
        let (_, norm, mut vector) = best.expect("dim > 0");
        assert!(
            norm > 1e-8,
            "orthonormal completion stalled: residual {norm:.3e}"
        );
        vector /= C64::from(norm);
        // One re-orthogonalization pass keeps the completion orthonormal to
        // machine precision even when the residual was small.
        for b in &basis {
            let overlap = b.dotc(&vector);
            vector -= b * overlap;
        }
        vector /= C64::from(vector.norm());
        phase_fix(&mut vector);
        basis.push(vector);
    }
    CMatrix::from_columns(&basis)
}

/// Orthonormalizes the columns of `m` in column order by modified
/// Gram-Schmidt with one re-orthogonalization pass. Columns that collapse
/// (numerically dependent input) are replaced by the computational candidate
/// with the largest residual. Already-orthonormal input is returned
/// unchanged up to machine precision — in particular no column is re-phased.
pub fn orthonormalize_columns(m: &CMatrix) -> CMatrix {
    let rows = m.nrows();
    let mut basis: Vec<CVector> = Vec::with_capacity(m.ncols());
    for j in 0..m.ncols() {
        let mut v: CVector = m.column(j).into_owned();
        for _ in 0..2 {
            for b in &basis {
                let overlap = b.dotc(&v);
                v -= b * overlap;
            }
        }
        let norm = v.norm();
        if norm > 1e-10 {
            basis.push(v / C64::from(norm));
        } else {
            let completed = complete_orthonormal_basis(&basis, rows);
            basis.push(completed.column(basis.len()).into_owned());
        }
    }
    CMatrix::from_columns(&basis)
}

/// A deterministic unitary mapping unit vector `from` to unit vector `to`:
/// both vectors are completed to orthonormal bases and matched column-wise.
pub fn unitary_mapping(from: &CVector, to: &CVector) -> CMatrix {
    debug_assert_eq!(from.len(), to.len());
    let dim = from.len();
    let basis_from = complete_orthonormal_basis(std::slice::from_ref(from), dim);
    let basis_to = complete_orthonormal_basis(std::slice::from_ref(to), dim);
    basis_to * basis_from.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn sample_hermitian() -> CMatrix {
        CMatrix::from_row_slice(
            3,
            3,
            &[
                c64(0.5, 0.0),
                c64(0.1, 0.2),
                c64(0.0, -0.3),
                c64(0.1, -0.2),
                c64(0.3, 0.0),
                c64(0.05, 0.0),
                c64(0.0, 0.3),
                c64(0.05, 0.0),
                c64(0.2, 0.0),
            ],
        )
    }

    #[test]
    fn eigen_desc_reconstructs_and_sorts() {
        let m = sample_hermitian();
        let (values, vectors) = hermitian_eigen_desc(&m);
        for w in values.windows(2) {
            assert!(w[0] >= w[1]);
        }
        let mut lambda = CMatrix::zeros(3, 3);
        for k in 0..3 {
            lambda[(k, k)] = C64::from(values[k]);
        }
        let recon = &vectors * lambda * vectors.adjoint();
        assert!(max_abs_diff(&recon, &m) < 1e-12);
        assert!(unitarity_deviation(&vectors) < 1e-12);
    }

    #[test]
    fn eigenvector_phase_is_fixed() {
        let m = sample_hermitian();
        let (_, vectors) = hermitian_eigen_desc(&m);
        for j in 0..3 {
            let col = vectors.column(j);
            let first = col.iter().find(|z| z.norm() > 1e-12).unwrap();
            assert!(first.im.abs() < 1e-12 && first.re > 0.0);
        }
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let u = exp_i_hermitian(&CMatrix::zeros(4, 4));
        assert!(max_abs_diff(&u, &CMatrix::identity(4, 4)) < 1e-14);
    }

    #[test]
    fn exp_i_hermitian_is_unitary_with_expected_phases() {
        let h = sample_hermitian();
        let u = exp_i_hermitian(&h);
        assert!(unitarity_deviation(&u) < 1e-12);
        // exp(i * diag(a, b)) has the explicit closed form.
        let d = CMatrix::from_row_slice(2, 2, &[c64(0.7, 0.0), C64::ZERO, C64::ZERO, c64(-1.2, 0.0)]);
        let u = exp_i_hermitian(&d);
        assert_relative_eq!(u[(0, 0)].re, 0.7f64.cos(), epsilon = 1e-14);
        assert_relative_eq!(u[(0, 0)].im, 0.7f64.sin(), epsilon = 1e-14);
        assert_relative_eq!(u[(1, 1)].re, 1.2f64.cos(), epsilon = 1e-14);
        assert_relative_eq!(u[(1, 1)].im, -(1.2f64.sin()), epsilon = 1e-14);
    }

    #[test]
    fn sqrt_psd_squares_back() {
        let m = sample_hermitian();
        let psd = &m * m.adjoint();
        let root = sqrt_psd(&psd);
        assert!(max_abs_diff(&(&root * &root), &psd) < 1e-12);
    }

    #[test]
    fn completion_is_orthonormal_and_deterministic() {
        let v = CVector::from_vec(vec![c64(0.6, 0.0), c64(0.0, 0.8), C64::ZERO]);
        let basis = complete_orthonormal_basis(std::slice::from_ref(&v), 3);
        assert!(unitarity_deviation(&basis) < 1e-12);
        let again = complete_orthonormal_basis(std::slice::from_ref(&v), 3);
        assert_eq!(basis, again);
    }

    #[test]
    fn unitary_mapping_sends_from_to_to() {
        let from = CVector::from_vec(vec![C64::ONE, C64::ZERO]);
        let to = CVector::from_vec(vec![c64(0.6, 0.0), c64(0.0, 0.8)]);
        let u = unitary_mapping(&from, &to);
        assert!(unitarity_deviation(&u) < 1e-12);
        assert!((&u * &from - &to).norm() < 1e-12);
    }

    #[test]
    fn gram_schmidt_leaves_orthonormal_columns_untouched() {
        // Columns with deliberate complex phases: a QR-based route would be
        // free to re-phase them, this one must not.
        let m = CMatrix::from_row_slice(
            3,
            2,
            &[
                c64(0.0, 0.6),
                C64::ZERO,
                c64(0.8, 0.0),
                C64::ZERO,
                C64::ZERO,
                c64(0.0, -1.0),
            ],
        );
        let q = orthonormalize_columns(&m);
        assert!(max_abs_diff(&q, &m) < 1e-14);
    }

    #[test]
    fn gram_schmidt_recovers_from_dependent_columns() {
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                C64::ONE,
                c64(2.0, 0.0),
                c64(0.5, 0.1),
                C64::ONE,
                c64(2.0, 0.0),
                c64(-0.3, 0.0),
                C64::ZERO,
                C64::ZERO,
                c64(0.2, 0.0),
            ],
        );
        let q = orthonormalize_columns(&m);
        assert!(unitarity_deviation(&q) < 1e-10);
    }
}
