//! Seeded random sampling of states, bases, and ensembles.
//!
//! Everything is driven by explicit ChaCha generators so that any sampled
//! object is reproducible from `(seed, stream)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::basis::LocalBasisPair;
use crate::ensemble::{Ensemble, EnsembleMember};
use crate::error::Result;
use crate::linalg::{c64, CMatrix, CVector, C64};
use crate::schmidt::schmidt_decompose;
use crate::state::{DensityMatrix, Ket};

pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Independent generator for substream `stream` of `seed`; used to make
/// trials and restarts replayable in isolation.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn standard_complex(rng: &mut impl Rng) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im)
}

/// Ginibre matrix with iid standard complex Gaussian entries.
pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| standard_complex(rng))
}

/// Haar-random ket on the given dims.
pub fn haar_ket(dims: &[usize], rng: &mut impl Rng) -> Ket {
    let total: usize = dims.iter().product();
    let mut amplitudes = CVector::from_fn(total, |_, _| standard_complex(rng));
    amplitudes /= C64::from(amplitudes.norm());
    Ket::new_unchecked(amplitudes, dims.to_vec())
}

/// Haar-random unitary via QR of a Ginibre matrix with the R-diagonal phase
/// fix.
pub fn haar_unitary(dim: usize, rng: &mut impl Rng) -> CMatrix {
    let g = ginibre(dim, dim, rng);
    let qr = g.qr();
    let q = qr.q();
    let r = qr.r();
    let mut phases = CMatrix::zeros(dim, dim);
    for k in 0..dim {
        let d = r[(k, k)];
        phases[(k, k)] = if d.norm() > 0.0 { d / d.norm() } else { C64::ONE };
    }
    q * phases
}

/// GUE-distributed Hermitian matrix scaled by `scale`; used for randomized
/// optimizer restarts.
pub fn gue_hermitian(dim: usize, scale: f64, rng: &mut impl Rng) -> CMatrix {
    let g = ginibre(dim, dim, rng);
    (&g + g.adjoint()) * C64::from(scale / 2.0)
}

/// Mixed state from the Ginibre ensemble: `G G^dag / tr` with `G` of shape
/// `d x rank`.
pub fn ginibre_mixed(
    dims: &[usize],
    rank: usize,
    labels: Vec<String>,
    rng: &mut impl Rng,
) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    let g = ginibre(total, rank.max(1), rng);
    let mut data = &g * g.adjoint();
    let trace = data.trace();
    data /= trace;
    DensityMatrix::new(data, dims.to_vec(), labels)
}

/// Full-rank Ginibre mixed state with default labels.
pub fn ginibre_mixed_full(dims: &[usize], rng: &mut impl Rng) -> Result<DensityMatrix> {
    let total: usize = dims.iter().product();
    let labels = crate::state::default_labels(dims.len())?;
    ginibre_mixed(dims, total, labels, rng)
}

/// Independent Haar-random local bases.
pub fn random_product_basis(dim_a: usize, dim_b: usize, rng: &mut impl Rng) -> LocalBasisPair {
    let basis_a = haar_unitary(dim_a, rng);
    let basis_b = haar_unitary(dim_b, rng);
    LocalBasisPair::new(basis_a, basis_b).expect("haar unitaries are orthonormal")
}

/// Probability vector from normalized Exp(1) samples (flat Dirichlet).
pub fn random_probability_vector(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let mut weights: Vec<f64> = (0..n)
        .map(|_| -(1.0 - rng.random::<f64>()).ln())
        .collect();
    let sum: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= sum;
    }
    weights
}

/// Random separable state as an explicit mixture of Haar product pure states.
/// Returns the ensemble; `mixture()` gives the density matrix.
pub fn random_separable(
    dim_a: usize,
    dim_b: usize,
    n_terms: usize,
    rng: &mut impl Rng,
) -> Result<Ensemble> {
    let weights = random_probability_vector(n_terms.max(1), rng);
    let mut members = Vec::with_capacity(weights.len());
    for _ in 0..weights.len() {
        let a = haar_ket(&[dim_a], rng);
        let b = haar_ket(&[dim_b], rng);
        let mut amplitudes = CVector::zeros(dim_a * dim_b);
        for i in 0..dim_a {
            for j in 0..dim_b {
                amplitudes[i * dim_b + j] = a.amplitudes()[i] * b.amplitudes()[j];
            }
        }
        members.push(EnsembleMember::Pure(Ket::new_unchecked(
            amplitudes,
            vec![dim_a, dim_b],
        )));
    }
    Ensemble::new(weights, members)
}

/// Haar ket resampled until its Schmidt spectrum has no near-degenerate pair
/// (relative gap at least `min_rel_gap`) and no near-zero coefficient.
pub fn haar_ket_gapped(dims: &[usize; 2], min_rel_gap: f64, rng: &mut impl Rng) -> Ket {
    loop {
        let psi = haar_ket(dims, rng);
        let form = schmidt_decompose(&psi).expect("haar ket is bipartite");
        let full_rank = form.rank() == dims[0].min(dims[1]);
        let gapped = form.coefficients().windows(2).all(|w| {
            (w[0] - w[1]) >= min_rel_gap * (w[0] + w[1])
        });
        let bounded_away = form
            .coefficients()
            .last()
            .is_some_and(|&l| l > 1e-3);
        if full_rank && gapped && bounded_away {
            return psi;
        }
    }
}
