//! Correlated coherence and its minimization over admissible local bases.

mod degeneracy;
mod simplex;

pub use degeneracy::{admissible_bases, cluster_spectrum, AdmissibleBases, DegeneracyProfile, EigenCluster};
pub(crate) use simplex::{nelder_mead, NmOptions, NmOutcome};

use rand::Rng;

use crate::basis::LocalBasisPair;
use crate::coherence::CoherenceMeasure;
use crate::error::{QcorrError, Result};
use crate::linalg::{exp_i_hermitian, CMatrix, C64};
use crate::ops::party_marginal;
use crate::sample::rng_stream;
use crate::state::{DensityMatrix, Party};
use crate::tol;

/// Correlated coherence: the joint coherence minus both marginal coherences,
/// all in the same local basis pair.
pub fn correlated_coherence(
    measure: &dyn CoherenceMeasure,
    rho: &DensityMatrix,
    pair: &LocalBasisPair,
) -> Result<f64> {
    let total = measure.evaluate_in_pair(rho, pair)?;
    let rho_a = party_marginal(rho, Party::Alice)?;
    let rho_b = party_marginal(rho, Party::Bob)?;
    let ca = measure.evaluate(&rho_a, pair.basis_a())?;
    let cb = measure.evaluate(&rho_b, pair.basis_b())?;
    Ok(total - ca - cb)
}

#[derive(Debug, Clone)]
pub struct CminOptions {
    /// Relative eigenvalue-gap threshold for degeneracy clustering.
    pub eps_deg: f64,
    /// Total optimizer starts when degenerate clusters exist; the first start
    /// is always the marginal eigenbasis itself.
    pub restarts: usize,
    /// Simplex iteration budget per start.
    pub max_iters: usize,
    /// Optimizer stall tolerance; values at or below it short-circuit the
    /// remaining starts since the objective is nonnegative at its floor.
    pub tol: f64,
    /// Seed for the randomized starts.
    pub seed: u64,
}

impl Default for CminOptions {
    fn default() -> Self {
        Self {
            eps_deg: tol::EPS_DEG_DEFAULT,
            restarts: 16,
            max_iters: 800,
            tol: tol::OPT_TOL_DEFAULT,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CminResult {
    pub value: f64,
    pub argmin_basis: LocalBasisPair,
    pub restarts_used: usize,
    pub converged: bool,
    /// Real parameters of residual basis freedom ranged over by the search.
    pub free_parameters: usize,
}

/// Maps optimizer coordinates to an admissible basis: the marginal eigenbasis
/// times a block-diagonal unitary `exp(iH_c)` per degenerate cluster.
pub(crate) struct ClusterParametrization {
    base: CMatrix,
    blocks: Vec<(usize, usize)>,
    n_params: usize,
}

impl ClusterParametrization {
    pub(crate) fn new(adm: &AdmissibleBases) -> Self {
        let blocks: Vec<(usize, usize)> = adm
            .profile
            .clusters
            .iter()
            .filter(|c| c.multiplicity > 1)
            .map(|c| (c.start, c.multiplicity))
            .collect();
        let n_params = blocks.iter().map(|&(_, m)| m * m).sum();
        Self {
            base: adm.eigenbasis.clone(),
            blocks,
            n_params,
        }
    }

    pub(crate) fn n_params(&self) -> usize {
        self.n_params
    }

    /// Hermitian generator of one cluster from its parameter slice:
    /// `m` diagonal entries then `(re, im)` pairs for `i < j`.
    fn hermitian_from_params(m: usize, theta: &[f64]) -> CMatrix {
        let mut h = CMatrix::zeros(m, m);
        for k in 0..m {
            h[(k, k)] = C64::from(theta[k]);
        }
        let mut pos = m;
        for i in 0..m {
            for j in (i + 1)..m {
                let z = crate::linalg::c64(theta[pos], theta[pos + 1]);
                h[(i, j)] = z;
                h[(j, i)] = z.conj();
                pos += 2;
            }
        }
        h
    }

    pub(crate) fn basis_at(&self, theta: &[f64]) -> CMatrix {
        debug_assert_eq!(theta.len(), self.n_params);
        let mut basis = self.base.clone();
        let mut offset = 0usize;
        for &(start, m) in &self.blocks {
            let h = Self::hermitian_from_params(m, &theta[offset..offset + m * m]);
            offset += m * m;
            let w = exp_i_hermitian(&h);
            // Right-multiplying mixes only the columns of this cluster.
            let cluster_cols = basis.columns(start, m) * w;
            basis.columns_mut(start, m).copy_from(&cluster_cols);
        }
        basis
    }

    pub(crate) fn random_theta(&self, rng: &mut impl Rng) -> Vec<f64> {
        use rand_distr::StandardNormal;
        (0..self.n_params)
            .map(|_| {
                let x: f64 = rng.sample(StandardNormal);
                x * std::f64::consts::FRAC_PI_2
            })
            .collect()
    }
}

/// Minimizes correlated coherence over the admissible local bases (the
/// marginal eigenbases, including all residual rotations inside degenerate
/// eigenvalue clusters).
///
/// Nondegenerate marginals pin the bases completely, so the value is returned
/// directly from one evaluation. Degenerate clusters are searched with
/// multi-start Nelder-Mead over their unitary freedom.
pub fn c_min(
    measure: &dyn CoherenceMeasure,
    rho: &DensityMatrix,
    opts: &CminOptions,
) -> Result<CminResult> {
    if rho.party_dim(Party::Alice) == 0 || rho.party_dim(Party::Bob) == 0 {
        return Err(QcorrError::InvalidArgument {
            context: "c_min needs at least one factor per party".into(),
        });
    }
    let rho_a = party_marginal(rho, Party::Alice)?;
    let rho_b = party_marginal(rho, Party::Bob)?;
    let adm_a = admissible_bases(&rho_a, opts.eps_deg);
    let adm_b = admissible_bases(&rho_b, opts.eps_deg);

    let param_a = ClusterParametrization::new(&adm_a);
    let param_b = ClusterParametrization::new(&adm_b);
    let n_params = param_a.n_params() + param_b.n_params();

    let pair_at = |theta: &[f64]| -> LocalBasisPair {
        let (ta, tb) = theta.split_at(param_a.n_params());
        LocalBasisPair::new(param_a.basis_at(ta), param_b.basis_at(tb))
            .expect("admissible bases stay orthonormal")
    };

    if n_params == 0 {
        let pair = pair_at(&[]);
        let value = correlated_coherence(measure, rho, &pair)?;
        return Ok(CminResult {
            value,
            argmin_basis: pair,
            restarts_used: 0,
            converged: true,
            free_parameters: 0,
        });
    }

    let mut objective = |theta: &[f64]| -> f64 {
        let pair = pair_at(theta);
        correlated_coherence(measure, rho, &pair).expect("dims fixed by construction")
    };

    let nm_opts = NmOptions {
        max_iters: opts.max_iters,
        ftol: opts.tol,
        initial_step: 0.4,
    };

    let starts = opts.restarts.max(1);
    let mut best_theta = vec![0.0; n_params];
    let mut best_value = objective(&best_theta);
    let mut converged = best_value <= opts.tol;
    let mut restarts_used = 0usize;

    if best_value > opts.tol {
        for start in 0..starts {
            restarts_used = start + 1;
            let theta0 = if start == 0 {
                vec![0.0; n_params]
            } else {
                let mut rng = rng_stream(opts.seed, start as u64);
                let mut theta = param_a.random_theta(&mut rng);
                theta.extend(param_b.random_theta(&mut rng));
                theta
            };
            let outcome: NmOutcome = nelder_mead(&mut objective, &theta0, &nm_opts);
            if outcome.fx < best_value {
                best_value = outcome.fx;
                best_theta = outcome.x;
                converged = outcome.converged;
            } else if outcome.converged && (outcome.fx - best_value).abs() <= opts.tol {
                converged = true;
            }
            if best_value <= opts.tol {
                converged = true;
                break;
            }
        }
    }

    let pair = pair_at(&best_theta);
    let value = correlated_coherence(measure, rho, &pair)?;
    Ok(CminResult {
        value,
        argmin_basis: pair,
        restarts_used,
        converged,
        free_parameters: n_params,
    })
}
