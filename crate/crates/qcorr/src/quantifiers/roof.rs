//! Heuristic convex-roof minimization over parametrized pure-state
//! ensembles.
//!
//! Every size-`n` pure decomposition of `rho = sum_j mu_j |e_j><e_j|` (rank
//! `r`) is `phi_i = sum_j T_ij sqrt(mu_j) |e_j>` for an `n x r` matrix with
//! orthonormal columns, so minimizing over ensembles is a search over such
//! isometries — equivalently over measurement bases on the purifying system.
//! The search parametrizes a raw complex matrix and orthonormalizes it by
//! Gram-Schmidt, which is surjective onto the isometries and exact (not just
//! up to phases) on already-orthonormal input, so warm starts reproduce their
//! ensemble's objective value at the starting point.

use crate::coherence::CoherenceMeasure;
use crate::correlated::{nelder_mead, NmOptions};
use crate::ensemble::{Ensemble, EnsembleMember};
use crate::error::{QcorrError, Result};
use crate::linalg::{c64, orthonormalize_columns, CMatrix};
use crate::quantifiers::pure::e_pure;
use crate::quantifiers::{BoundDiagnostics, BoundKind, BoundReport, BoundWitness};
use crate::sample::rng_stream;
use crate::state::{DensityMatrix, Ket};
use crate::tol;
use rand::Rng;
use rand_distr::StandardNormal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MeasureKind {
    L1,
    Relent,
}

pub struct RoofOptions {
    /// Largest ensemble size to search; defaults to `rank^2`.
    pub ensemble_size: Option<usize>,
    /// Optimizer starts per ensemble size (deterministic starts included).
    pub restarts: usize,
    /// Simplex iteration budget per start.
    pub max_iters: usize,
    /// Early-exit threshold: the objective is nonnegative, so values at or
    /// below it end the search.
    pub tol: f64,
    pub seed: u64,
}

impl Default for RoofOptions {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 16,
            max_iters: 800,
            tol: tol::OPT_TOL_DEFAULT,
            seed: 0,
        }
    }
}

/// The fixed data of a roof search: spectral decomposition of the target
/// state and the measure to evaluate member-wise.
pub(crate) struct RoofProblem {
    eigvecs: CMatrix,
    mu: Vec<f64>,
    scaled: CMatrix,
    rank: usize,
    da: usize,
    db: usize,
    dims: Vec<usize>,
    kind: MeasureKind,
}

impl RoofProblem {
    pub(crate) fn new(measure: &dyn CoherenceMeasure, rho: &DensityMatrix) -> Result<Self> {
        if rho.n_factors() != 2 {
            return Err(QcorrError::NotBipartite {
                factors: rho.n_factors(),
            });
        }
        let kind = match measure.id() {
            "l1" => MeasureKind::L1,
            "relent" => MeasureKind::Relent,
            other => {
                return Err(QcorrError::UnknownMeasure {
                    id: other.to_string(),
                })
            }
        };
        let (values, vectors) = rho.eigen();
        let rank = values.iter().filter(|&&v| v > tol::RANK_CUTOFF).count();
        let mu: Vec<f64> = values[..rank].to_vec();
        let eigvecs = vectors.columns(0, rank).into_owned();
        let mut scaled = eigvecs.clone();
        for (j, &m) in mu.iter().enumerate() {
            let root = c64(m.sqrt(), 0.0);
            for z in scaled.column_mut(j).iter_mut() {
                *z *= root;
            }
        }
        Ok(Self {
            eigvecs,
            mu,
            scaled,
            rank,
            da: rho.dims()[0],
            db: rho.dims()[1],
            dims: rho.dims().to_vec(),
            kind,
        })
    }

    pub(crate) fn rank(&self) -> usize {
        self.rank
    }

    fn n_params(&self, n: usize) -> usize {
        2 * n * self.rank
    }

    /// Unnormalized member columns `phi_i` for the isometry encoded by
    /// `theta` (length `2 n rank`, row-major re/im pairs).
    fn member_columns(&self, n: usize, theta: &[f64]) -> CMatrix {
        let mut m = CMatrix::zeros(n, self.rank);
        for i in 0..n {
            for j in 0..self.rank {
                let k = 2 * (i * self.rank + j);
                m[(i, j)] = c64(theta[k], theta[k + 1]);
            }
        }
        let t = orthonormalize_columns(&m);
        &self.scaled * t.transpose()
    }

    /// `sum_i p_i * value(psi_i)` over the encoded ensemble.
    pub(crate) fn objective(&self, n: usize, theta: &[f64]) -> f64 {
        let phi = self.member_columns(n, theta);
        let mut total = 0.0;
        let mut member = CMatrix::zeros(self.da, self.db);
        for i in 0..n {
            let col = phi.column(i);
            let p = col.norm_squared();
            if p < 1e-14 {
                continue;
            }
            for a in 0..self.da {
                for b in 0..self.db {
                    member[(a, b)] = col[a * self.db + b];
                }
            }
            let sigmas = member.singular_values();
            match self.kind {
                MeasureKind::L1 => {
                    // p * ((sum sigma / sqrt(p))^2 - 1) for the normalized member.
                    let s: f64 = sigmas.iter().sum();
                    total += (s * s - p).max(0.0);
                }
                MeasureKind::Relent => {
                    let mut h = 0.0;
                    for s in sigmas.iter() {
                        let l = s * s / p;
                        if l > 1e-300 {
                            h -= l * l.log2();
                        }
                    }
                    total += p * h.max(0.0);
                }
            }
        }
        total
    }

    pub(crate) fn ensemble_at(&self, n: usize, theta: &[f64]) -> Result<Ensemble> {
        let phi = self.member_columns(n, theta);
        let mut weights = Vec::new();
        let mut members = Vec::new();
        for i in 0..n {
            let col = phi.column(i).into_owned();
            let p = col.norm_squared();
            if p < 1e-12 {
                continue;
            }
            let ket = Ket::new(col / c64(p.sqrt(), 0.0), self.dims.clone())?;
            weights.push(p);
            members.push(EnsembleMember::Pure(ket));
        }
        Ensemble::new(weights, members)
    }

    /// Start point whose isometry is the identity embedding, i.e. the
    /// eigenvector ensemble itself.
    pub(crate) fn identity_theta_at(&self, n: usize) -> Vec<f64> {
        let mut theta = vec![0.0; self.n_params(n)];
        for j in 0..self.rank {
            theta[2 * (j * self.rank + j)] = 1.0;
        }
        theta
    }

    /// Embeds a known decomposition of the state as a start point. The
    /// encoded objective equals the ensemble's own average exactly.
    pub(crate) fn theta_from_ensemble_at(&self, n: usize, ensemble: &Ensemble) -> Result<Vec<f64>> {
        if ensemble.dims() != self.dims.as_slice() {
            return Err(QcorrError::DimensionMismatch {
                context: format!(
                    "warm-start dims {:?} vs state dims {:?}",
                    ensemble.dims(),
                    self.dims
                ),
            });
        }
        let kets = ensemble.pure_kets()?;
        if kets.len() > n {
            return Err(QcorrError::InvalidArgument {
                context: format!(
                    "warm-start ensemble has {} members for size-{n} search",
                    kets.len()
                ),
            });
        }
        let mut m = CMatrix::zeros(n, self.rank);
        for (i, (q, ket)) in kets.iter().enumerate() {
            let phi = ket.amplitudes() * c64(q.sqrt(), 0.0);
            for j in 0..self.rank {
                let overlap = self.eigvecs.column(j).dotc(&phi);
                m[(i, j)] = overlap / c64(self.mu[j].sqrt(), 0.0);
            }
        }
        // A valid decomposition embeds as an exact isometry; anything else
        // does not reproduce the state.
        let gram = m.adjoint() * &m;
        let residual = crate::linalg::max_abs_diff(&gram, &CMatrix::identity(self.rank, self.rank));
        if residual > 1e-6 {
            return Err(QcorrError::DecompositionMismatch {
                residual,
                tolerance: 1e-6,
            });
        }
        let mut theta = vec![0.0; self.n_params(n)];
        for i in 0..n {
            for j in 0..self.rank {
                let k = 2 * (i * self.rank + j);
                theta[k] = m[(i, j)].re;
                theta[k + 1] = m[(i, j)].im;
            }
        }
        Ok(theta)
    }
}

pub(crate) struct RoofSearchOutcome {
    pub value: f64,
    pub ensemble: Ensemble,
    pub converged: bool,
    pub restarts_used: usize,
}

/// Minimizes the ensemble average at a fixed ensemble size `n >= rank`.
/// Deterministic starts (identity embedding, then any warm starts) come
/// first, followed by Gaussian random starts up to the restart budget.
pub(crate) fn roof_search_size(
    measure: &dyn CoherenceMeasure,
    rho: &DensityMatrix,
    n: usize,
    warm_starts: &[Ensemble],
    opts: &RoofOptions,
) -> Result<RoofSearchOutcome> {
    let problem = RoofProblem::new(measure, rho)?;
    if n < problem.rank {
        return Err(QcorrError::InvalidArgument {
            context: format!(
                "ensemble size {n} below state rank {}",
                problem.rank
            ),
        });
    }
    let mut starts: Vec<Vec<f64>> = vec![problem.identity_theta_at(n)];
    for w in warm_starts {
        starts.push(problem.theta_from_ensemble_at(n, w)?);
    }
    let deterministic = starts.len();
    let total_starts = opts.restarts.max(deterministic);
    let nm_opts = NmOptions {
        max_iters: opts.max_iters,
        ftol: (opts.tol * 0.1).max(1e-12),
        initial_step: 0.3,
    };

    let mut objective = |theta: &[f64]| problem.objective(n, theta);
    let mut best_theta = starts[0].clone();
    let mut best = objective(&best_theta);
    let mut converged = true;
    let mut used = 0usize;
    for k in 0..total_starts {
        if best <= opts.tol {
            break;
        }
        let theta0 = if k < deterministic {
            starts[k].clone()
        } else {
            let mut rng = rng_stream(opts.seed, 0x726f_6f66 ^ ((n as u64) << 24) ^ k as u64);
            (0..problem.n_params(n))
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect()
        };
        let out = nelder_mead(&mut objective, &theta0, &nm_opts);
        used += 1;
        if out.fx < best {
            best = out.fx;
            best_theta = out.x;
            converged = out.converged;
        }
    }
    // Polish: restart the simplex at the incumbent with shrinking steps so a
    // near-miss settles into its basin floor.
    for step in [0.05, 0.01] {
        if best <= opts.tol {
            break;
        }
        let polish = NmOptions {
            initial_step: step,
            ..nm_opts.clone()
        };
        let out = nelder_mead(&mut objective, &best_theta, &polish);
        if out.fx < best {
            best = out.fx;
            best_theta = out.x;
            converged = out.converged;
        }
    }
    let ensemble = problem.ensemble_at(n, &best_theta)?;
    Ok(RoofSearchOutcome {
        value: best.max(0.0),
        ensemble,
        converged,
        restarts_used: used,
    })
}

/// Ensemble sizes searched for a rank-`r` state under a member cap: the rank
/// itself, one doubling, and the cap.
fn size_ladder(rank: usize, cap: usize) -> Vec<usize> {
    let mut sizes = vec![rank, (2 * rank).min(cap), cap];
    sizes.sort_unstable();
    sizes.dedup();
    sizes
}

/// Upper-bounds the convex-roof extension of the pure-state value by direct
/// minimization over decompositions of `rho`.
pub fn e_convex_roof_estimate(
    measure: &dyn CoherenceMeasure,
    rho: &DensityMatrix,
    opts: &RoofOptions,
) -> Result<BoundReport> {
    let problem = RoofProblem::new(measure, rho)?;
    if rho.is_pure() {
        return e_pure(measure, &rho.principal_ket());
    }
    let rank = problem.rank();
    let cap = opts
        .ensemble_size
        .unwrap_or(rank * rank)
        .max(rank)
        .min(64);
    let sizes = size_ladder(rank, cap);

    let mut best: Option<(usize, RoofSearchOutcome)> = None;
    let mut restarts_used = 0;
    let mut tried = Vec::new();
    for &n in &sizes {
        tried.push((n, n));
        let outcome = roof_search_size(measure, rho, n, &[], opts)?;
        restarts_used += outcome.restarts_used;
        let better = match &best {
            None => true,
            Some((_, prev)) => outcome.value < prev.value,
        };
        if better {
            best = Some((n, outcome));
        }
        if best.as_ref().is_some_and(|(_, b)| b.value <= opts.tol) {
            break;
        }
    }
    let (n_best, outcome) = best.expect("size ladder is never empty");
    Ok(BoundReport {
        value: outcome.value,
        kind: BoundKind::UpperBound,
        ancilla_dims: (n_best, n_best),
        witness: BoundWitness::Ensemble(outcome.ensemble),
        diagnostics: BoundDiagnostics {
            restarts: restarts_used,
            ancilla_dims_tried: tried,
            seed: opts.seed,
            converged: outcome.converged,
            candidates_evaluated: restarts_used,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherence::{L1, RELENT};
    use crate::linalg::CVector;
    use crate::linalg::C64;
    use crate::sample::{random_separable, rng_from_seed};
    use approx::assert_relative_eq;

    fn cheap_opts() -> RoofOptions {
        RoofOptions {
            ensemble_size: None,
            restarts: 8,
            max_iters: 400,
            tol: 1e-9,
            seed: 0,
        }
    }

    #[test]
    fn pure_input_reports_exact_value() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = Ket::new(
            CVector::from_vec(vec![c64(s, 0.0), C64::ZERO, C64::ZERO, c64(s, 0.0)]),
            vec![2, 2],
        )
        .unwrap()
        .to_density_default()
        .unwrap();
        let report = e_convex_roof_estimate(&L1, &bell, &cheap_opts()).unwrap();
        assert!(matches!(report.kind, BoundKind::Exact));
        assert_relative_eq!(report.value, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn maximally_mixed_state_reaches_zero_from_identity_start() {
        let rho =
            DensityMatrix::maximally_mixed(vec![2, 2], vec!["A".into(), "B".into()]).unwrap();
        for m in crate::coherence::all_measures() {
            let report = e_convex_roof_estimate(m, &rho, &cheap_opts()).unwrap();
            assert!(report.value <= 1e-10, "{} roof {}", m.id(), report.value);
        }
    }

    #[test]
    fn classical_mixture_reaches_zero() {
        let ens = Ensemble::new(
            vec![0.5, 0.5],
            vec![
                EnsembleMember::Pure(Ket::basis_state(vec![2, 2], 0).unwrap()),
                EnsembleMember::Pure(Ket::basis_state(vec![2, 2], 3).unwrap()),
            ],
        )
        .unwrap();
        let rho = ens.mixture(vec!["A".into(), "B".into()]).unwrap();
        let report = e_convex_roof_estimate(&L1, &rho, &cheap_opts()).unwrap();
        assert!(report.value <= 1e-10, "roof {}", report.value);
    }

    #[test]
    fn warm_start_value_is_reproduced_exactly() {
        // The average pure-state value of a known decomposition must be an
        // upper bound for the search started from it.
        let mut rng = rng_from_seed(41);
        let ens = random_separable(2, 2, 4, &mut rng).unwrap();
        let rho = ens.mixture(vec!["A".into(), "B".into()]).unwrap();
        let problem = RoofProblem::new(&L1, &rho).unwrap();
        let theta = problem.theta_from_ensemble_at(4, &ens).unwrap();
        let value = problem.objective(4, &theta);
        // Product members have a single singular value, so the average is 0.
        assert!(value <= 1e-12, "warm objective {value}");
    }

    #[test]
    fn separable_state_with_entangled_eigenbasis_reaches_near_zero() {
        // Mixture of four random product states: the eigenvectors are
        // entangled, so the identity start is strictly positive and random
        // restarts must find near-zero.
        let mut rng = rng_from_seed(7);
        let ens = random_separable(2, 2, 4, &mut rng).unwrap();
        let rho = ens.mixture(vec!["A".into(), "B".into()]).unwrap();
        assert!(crate::quantifiers::is_separable_ppt(&rho).unwrap());
        let opts = RoofOptions {
            restarts: 24,
            ..RoofOptions::default()
        };
        let report = e_convex_roof_estimate(&L1, &rho, &opts).unwrap();
        assert!(report.value <= 1e-4, "roof value {}", report.value);
    }

    #[test]
    fn roof_upper_bounds_wootters_concurrence() {
        // For two qubits the exact l1 roof is the Wootters concurrence.
        let mut rng = rng_from_seed(19);
        for _ in 0..6 {
            let rho = crate::sample::ginibre_mixed(
                &[2, 2],
                2,
                vec!["A".into(), "B".into()],
                &mut rng,
            )
            .unwrap();
            let conc = crate::quantifiers::concurrence_2q(&rho).unwrap();
            let report = e_convex_roof_estimate(&L1, &rho, &cheap_opts()).unwrap();
            assert!(
                report.value >= conc - 1e-7,
                "roof {} below concurrence {conc}",
                report.value
            );
        }
    }

    #[test]
    fn relent_roof_on_degenerate_bell_mixture() {
        // 0.5 |phi+> + 0.5 |phi->  mixes to a separable CC state, so both
        // roofs must reach zero.
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = Ket::new(
            CVector::from_vec(vec![c64(s, 0.0), C64::ZERO, C64::ZERO, c64(s, 0.0)]),
            vec![2, 2],
        )
        .unwrap();
        let minus = Ket::new(
            CVector::from_vec(vec![c64(s, 0.0), C64::ZERO, C64::ZERO, c64(-s, 0.0)]),
            vec![2, 2],
        )
        .unwrap();
        let ens = Ensemble::new(
            vec![0.5, 0.5],
            vec![EnsembleMember::Pure(plus), EnsembleMember::Pure(minus)],
        )
        .unwrap();
        let rho = ens.mixture(vec!["A".into(), "B".into()]).unwrap();
        let report = e_convex_roof_estimate(&RELENT, &rho, &cheap_opts()).unwrap();
        assert!(report.value <= 1e-6, "relent roof {}", report.value);
    }
}
