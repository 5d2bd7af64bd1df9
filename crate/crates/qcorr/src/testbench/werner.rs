//! The Werner family on two qubits and its product decompositions.
//!
//! `werner(p) = p |Ψ−⟩⟨Ψ−| + (1−p) I/4` is separable exactly for `p ≤ 1/3`.
//! In that range an explicit product decomposition exists over pairs of
//! single-qubit axis states; the weights are recovered numerically by
//! nonnegative least squares against that fixed dictionary, so the output is
//! a certified ensemble rather than an abstract separability verdict.

use nalgebra::{DMatrix, DVector};

use crate::ensemble::{Ensemble, EnsembleMember};
use crate::error::{QcorrError, Result};
use crate::linalg::{c64, CMatrix, CVector};
use crate::state::{DensityMatrix, Ket};
use crate::tol;

/// `p |Ψ−⟩⟨Ψ−| + (1−p) I/4` on qubits labeled A, B.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(QcorrError::InvalidArgument {
            context: format!("werner mixing parameter must be in [0, 1], got {p}"),
        });
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut singlet = CVector::zeros(4);
    singlet[1] = c64(s, 0.0);
    singlet[2] = c64(-s, 0.0);
    let mut data = &singlet * singlet.adjoint() * c64(p, 0.0);
    for i in 0..4 {
        data[(i, i)] += c64((1.0 - p) / 4.0, 0.0);
    }
    DensityMatrix::new(data, vec![2, 2], vec!["A".into(), "B".into()])
}

/// The six single-qubit axis states: ±z, ±x, ±y.
fn axis_kets() -> Vec<CVector> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![
        CVector::from_vec(vec![c64(1.0, 0.0), c64(0.0, 0.0)]),
        CVector::from_vec(vec![c64(0.0, 0.0), c64(1.0, 0.0)]),
        CVector::from_vec(vec![c64(s, 0.0), c64(s, 0.0)]),
        CVector::from_vec(vec![c64(s, 0.0), c64(-s, 0.0)]),
        CVector::from_vec(vec![c64(s, 0.0), c64(0.0, s)]),
        CVector::from_vec(vec![c64(s, 0.0), c64(0.0, -s)]),
    ]
}

/// Antipodal partner index within `axis_kets` ordering.
fn antipode(i: usize) -> usize {
    i ^ 1
}

fn product_ket(a: &CVector, b: &CVector) -> Ket {
    let mut amps = CVector::zeros(4);
    for i in 0..2 {
        for j in 0..2 {
            amps[2 * i + j] = a[i] * b[j];
        }
    }
    Ket::new(amps, vec![2, 2]).expect("axis products are normalized")
}

/// Stacks the real and imaginary parts of a 4x4 Hermitian matrix into a
/// 32-entry real vector.
fn vectorize(m: &CMatrix) -> DVector<f64> {
    let mut v = DVector::zeros(32);
    for (k, entry) in m.iter().enumerate() {
        v[2 * k] = entry.re;
        v[2 * k + 1] = entry.im;
    }
    v
}

fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    a.clone()
        .svd(true, true)
        .solve(b, 1e-12)
        .expect("svd solve on a computed decomposition")
}

/// Lawson-Hanson nonnegative least squares: minimizes `|A w - b|` over
/// `w >= 0` by growing a passive set of unconstrained coordinates.
fn nnls(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let mut w = DVector::<f64>::zeros(n);
    let mut passive = vec![false; n];
    for _ in 0..3 * n {
        let residual = b - a * &w;
        let gradient = a.transpose() * &residual;
        let candidate = (0..n)
            .filter(|&i| !passive[i])
            .max_by(|&i, &j| gradient[i].partial_cmp(&gradient[j]).unwrap());
        match candidate {
            Some(i) if gradient[i] > 1e-10 => passive[i] = true,
            _ => break,
        }
        loop {
            let idx: Vec<usize> = (0..n).filter(|&i| passive[i]).collect();
            let sub = a.select_columns(idx.iter());
            let z = lstsq(&sub, b);
            if z.iter().all(|&x| x > 0.0) {
                w.fill(0.0);
                for (k, &i) in idx.iter().enumerate() {
                    w[i] = z[k];
                }
                break;
            }
            // Step from w toward z just far enough to zero one coordinate,
            // then drop it from the passive set.
            let mut alpha = 1.0_f64;
            for (k, &i) in idx.iter().enumerate() {
                if z[k] <= 0.0 {
                    let denom = w[i] - z[k];
                    if denom > 0.0 {
                        alpha = alpha.min(w[i] / denom);
                    }
                }
            }
            for (k, &i) in idx.iter().enumerate() {
                w[i] += alpha * (z[k] - w[i]);
                if w[i] <= 1e-12 {
                    w[i] = 0.0;
                    passive[i] = false;
                }
            }
        }
    }
    w
}

/// Finds a product-state decomposition of `werner(p)` over the axis-pair
/// dictionary `{|u⟩⊗|v⟩ : v = ±u}`. Fails with the achieved residual when
/// the dictionary cannot represent the state, which is exactly the
/// entangled range `p > 1/3`.
pub fn werner_product_decomposition(p: f64) -> Result<Ensemble> {
    let rho = werner(p)?;
    let axes = axis_kets();
    let mut kets = Vec::new();
    for i in 0..6 {
        kets.push(product_ket(&axes[i], &axes[i]));
        kets.push(product_ket(&axes[i], &axes[antipode(i)]));
    }
    let mut a = DMatrix::zeros(32, kets.len());
    for (k, ket) in kets.iter().enumerate() {
        let proj = ket.amplitudes() * ket.amplitudes().adjoint();
        a.set_column(k, &vectorize(&proj));
    }
    let b = vectorize(rho.data());
    let w = nnls(&a, &b);

    let mut weights = Vec::new();
    let mut members = Vec::new();
    for (k, ket) in kets.into_iter().enumerate() {
        if w[k] > 1e-10 {
            weights.push(w[k]);
            members.push(EnsembleMember::Pure(ket));
        }
    }
    if weights.is_empty() {
        return Err(QcorrError::DecompositionMismatch {
            residual: 1.0,
            tolerance: tol::DECOMPOSITION_RESIDUAL,
        });
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    let ensemble = Ensemble::new(weights, members)?;
    let residual = ensemble.reconstruction_residual(&rho)?;
    if residual > tol::DECOMPOSITION_RESIDUAL {
        return Err(QcorrError::DecompositionMismatch {
            residual,
            tolerance: tol::DECOMPOSITION_RESIDUAL,
        });
    }
    Ok(ensemble)
}
