//! Bounded candidate searches for the extension-based quantifiers.
//!
//! Exact minimization over all extensions is out of reach (no ancilla bound
//! exists), so both searches assemble a finite family of feasible candidates
//! and report the best as an upper bound with full diagnostics. Every
//! candidate is a genuine extension, so any reported value — converged or
//! not — bounds the true quantifier from above.

use crate::basis::LocalBasisPair;
use crate::coherence::CoherenceMeasure;
use crate::correlated::{c_min, correlated_coherence, CminOptions};
use crate::ensemble::Ensemble;
use crate::error::{QcorrError, Result};
use crate::linalg::{complete_orthonormal_basis, CVector};
use crate::quantifiers::classify::is_classical_quantum;
use crate::quantifiers::extension::{
    bob_flagged_extension, bob_trivial_extension, cq_extension, extension_from_separable_decomposition,
    flagged_extension, refine_alignment, trivial_extension, CqDecomposition,
};
use crate::quantifiers::pure::e_pure;
use crate::quantifiers::roof::{roof_search_size, RoofOptions};
use crate::quantifiers::{BoundDiagnostics, BoundKind, BoundReport, BoundWitness};
use crate::schmidt::schmidt_decompose;
use crate::state::DensityMatrix;
use crate::tol;

#[derive(Debug, Clone)]
pub struct ExtensionSearchOptions {
    /// Largest ancilla factor dimension searched.
    pub max_ancilla_dim: usize,
    /// Optimizer starts for each internal search.
    pub restarts: usize,
    /// Simplex iteration budget per start.
    pub max_iters: usize,
    /// Early-exit threshold on the (nonnegative) objective.
    pub tol: f64,
    /// Relative eigenvalue-gap threshold for degeneracy clustering.
    pub eps_deg: f64,
    pub seed: u64,
    /// Known decompositions of the input used as additional optimizer
    /// starts during the ensemble search.
    pub warm_starts: Vec<Ensemble>,
}

impl Default for ExtensionSearchOptions {
    fn default() -> Self {
        Self {
            max_ancilla_dim: 4,
            restarts: 16,
            max_iters: 800,
            tol: tol::OPT_TOL_DEFAULT,
            eps_deg: tol::EPS_DEG_DEFAULT,
            seed: 0,
            warm_starts: Vec::new(),
        }
    }
}

impl ExtensionSearchOptions {
    fn cmin_full(&self) -> CminOptions {
        CminOptions {
            eps_deg: self.eps_deg,
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol: self.tol,
            seed: self.seed,
        }
    }

    /// Trimmed budget for candidates whose flag structure inflates the basis
    /// search space; values stay valid upper bounds regardless of budget.
    fn cmin_trimmed(&self) -> CminOptions {
        CminOptions {
            eps_deg: self.eps_deg,
            restarts: self.restarts.clamp(1, 6),
            max_iters: self.max_iters.min(400),
            tol: self.tol,
            seed: self.seed,
        }
    }

    fn roof(&self) -> RoofOptions {
        RoofOptions {
            ensemble_size: None,
            restarts: self.restarts,
            max_iters: self.max_iters,
            tol: self.tol,
            seed: self.seed,
        }
    }
}

struct Evaluated {
    value: f64,
    ancilla_dims: (usize, usize),
    witness: BoundWitness,
    converged: bool,
    restarts_used: usize,
}

fn require_bipartite(rho: &DensityMatrix) -> Result<(usize, usize)> {
    if rho.n_factors() != 2 {
        return Err(QcorrError::NotBipartite {
            factors: rho.n_factors(),
        });
    }
    Ok((rho.dims()[0], rho.dims()[1]))
}

fn report_from(
    mut candidates: Vec<Evaluated>,
    kind: BoundKind,
    tried: Vec<(usize, usize)>,
    seed: u64,
) -> BoundReport {
    candidates.sort_by(|a, b| a.value.total_cmp(&b.value));
    let total_restarts: usize = candidates.iter().map(|c| c.restarts_used).sum();
    let evaluated = candidates.len();
    let best = candidates.into_iter().next().expect("nonempty candidates");
    BoundReport {
        value: best.value.max(0.0),
        kind,
        ancilla_dims: best.ancilla_dims,
        witness: best.witness,
        diagnostics: BoundDiagnostics {
            restarts: total_restarts,
            ancilla_dims_tried: tried,
            seed,
            converged: best.converged,
            candidates_evaluated: evaluated,
        },
    }
}

/// Upper bound on the symmetric-extension quantifier.
///
/// Candidate family: the input itself when it is (or can be locally aligned
/// to be) swap-symmetric; flag extensions built over searched pure-state
/// decompositions with ancilla dimension up to `max_ancilla_dim`; and, when
/// `decomposition` is supplied, the classical-flag construction over it,
/// which makes the result exact (value 0 for valid product decompositions).
pub fn e_upper_bound(
    measure: &dyn CoherenceMeasure,
    rho: &DensityMatrix,
    opts: &ExtensionSearchOptions,
    decomposition: Option<&Ensemble>,
) -> Result<BoundReport> {
    let (da, db) = require_bipartite(rho)?;

    if let Some(dec) = decomposition {
        let candidate = extension_from_separable_decomposition(rho, dec)?;
        let n = candidate.ancilla_dims.0;
        // The construction is diagonal in an explicit product eigenbasis.
        // Evaluating there avoids the basis search entirely and is robust
        // against eigenvalue ties among the decomposition weights, which
        // would otherwise scramble the marginal eigenbasis.
        let pair = separable_witness_pair(dec, da, db)?;
        let direct = correlated_coherence(measure, &candidate.state, &pair)?;
        let evaluated = if direct.abs() <= opts.tol {
            Evaluated {
                value: direct,
                ancilla_dims: candidate.ancilla_dims,
                witness: BoundWitness::Extension(candidate),
                converged: true,
                restarts_used: 0,
            }
        } else {
            let result = c_min(measure, &candidate.state, &opts.cmin_trimmed())?;
            Evaluated {
                value: result.value.min(direct),
                ancilla_dims: candidate.ancilla_dims,
                witness: BoundWitness::Extension(candidate),
                converged: result.converged,
                restarts_used: result.restarts_used,
            }
        };
        return Ok(report_from(
            vec![evaluated],
            BoundKind::Exact,
            vec![(n, n)],
            opts.seed,
        ));
    }

    if rho.is_pure() {
        let mut report = e_pure(measure, &rho.principal_ket())?;
        report.diagnostics.seed = opts.seed;
        return Ok(report);
    }

    let mut candidates: Vec<Evaluated> = Vec::new();
    let mut tried: Vec<(usize, usize)> = Vec::new();

    if da == db {
        // The input itself, aligned if necessary.
        tried.push((1, 1));
        let mut candidate = trivial_extension(rho)?;
        if !candidate.is_accepted() {
            candidate = refine_alignment(&candidate, opts.restarts.clamp(1, 8), opts.seed)?;
        }
        if candidate.is_accepted() {
            let result = c_min(measure, &candidate.state, &opts.cmin_full())?;
            candidates.push(Evaluated {
                value: result.value,
                ancilla_dims: (1, 1),
                witness: BoundWitness::Extension(candidate),
                converged: result.converged,
                restarts_used: result.restarts_used,
            });
        }

        // Flag extensions over searched decompositions of the input.
        let rank = rho.numerical_rank();
        let max_flags = opts
            .max_ancilla_dim
            .min(tol::MAX_FACTOR_DIM)
            .min(integer_sqrt(tol::MAX_TOTAL_DIM / (da * db)));
        let roof_opts = opts.roof();
        let mut n = rank.max(2);
        while n <= max_flags {
            if candidates.iter().any(|c| c.value <= opts.tol) {
                break;
            }
            tried.push((n, n));
            let warms: Vec<Ensemble> = opts
                .warm_starts
                .iter()
                .filter(|w| w.len() <= n)
                .cloned()
                .collect();
            let outcome = roof_search_size(measure, rho, n, &warms, &roof_opts)?;
            let candidate = flagged_extension(rho, &outcome.ensemble)?;
            if candidate.is_accepted() {
                let result = c_min(measure, &candidate.state, &opts.cmin_trimmed())?;
                candidates.push(Evaluated {
                    value: result.value,
                    ancilla_dims: (n, n),
                    witness: BoundWitness::Extension(candidate),
                    converged: result.converged && outcome.converged,
                    restarts_used: result.restarts_used + outcome.restarts_used,
                });
            }
            n += 1;
        }
    }

    if candidates.is_empty() {
        return Err(QcorrError::SearchInfeasible {
            dim_a: da,
            dim_b: db,
            max_ancilla_dim: opts.max_ancilla_dim,
            tried,
        });
    }
    Ok(report_from(candidates, BoundKind::UpperBound, tried, opts.seed))
}

fn integer_sqrt(n: usize) -> usize {
    let mut k = (n as f64).sqrt().floor() as usize;
    while (k + 1) * (k + 1) <= n {
        k += 1;
    }
    while k > 0 && k * k > n {
        k -= 1;
    }
    k
}

/// Upper bound on the Bob-side-extension quantifier (the discord-like
/// asymmetric variant).
///
/// Candidate family: the input itself (a one-dimensional Bob ancilla is
/// always feasible); the classical-flag construction when a
/// classical-quantum decomposition is supplied (exact, value 0) or when the
/// classifier detects classical-quantum structure; and Bob-flag extensions
/// over searched pure-state decompositions.
pub fn d_c_upper_bound(
    measure: &dyn CoherenceMeasure,
    rho: &DensityMatrix,
    opts: &ExtensionSearchOptions,
    decomposition: Option<&Ensemble>,
) -> Result<BoundReport> {
    let (da, db) = require_bipartite(rho)?;

    if let Some(dec) = decomposition {
        let cq = CqDecomposition::from_ensemble(rho, dec)?;
        let candidate = cq_extension(rho, &cq)?;
        let n = candidate.ancilla_dim;
        let evaluated = evaluate_cq_candidate(measure, candidate, &cq, da, db, opts)?;
        return Ok(report_from(
            vec![evaluated],
            BoundKind::Exact,
            vec![(1, n)],
            opts.seed,
        ));
    }

    if rho.is_pure() {
        let mut report = e_pure(measure, &rho.principal_ket())?;
        report.diagnostics.seed = opts.seed;
        return Ok(report);
    }

    let mut candidates: Vec<Evaluated> = Vec::new();
    let mut tried: Vec<(usize, usize)> = Vec::new();

    // The input itself.
    tried.push((1, 1));
    let base = bob_trivial_extension(rho)?;
    let result = c_min(measure, &base.state, &opts.cmin_full())?;
    candidates.push(Evaluated {
        value: result.value,
        ancilla_dims: (1, 1),
        witness: BoundWitness::BobExtension(base),
        converged: result.converged,
        restarts_used: result.restarts_used,
    });

    // Classical-quantum shortcut: a detected dephasing-invariant Alice basis
    // yields the classical-flag extension directly.
    if candidates[0].value > opts.tol {
        let verdict = is_classical_quantum(rho, tol::EXTENSION_RESIDUAL)?;
        if verdict.is_cq {
            let cq = cq_from_witness(rho, &verdict.witness_basis)?;
            let candidate = cq_extension(rho, &cq)?;
            if candidate.is_accepted() {
                let n = candidate.ancilla_dim;
                tried.push((1, n));
                candidates.push(evaluate_cq_candidate(measure, candidate, &cq, da, db, opts)?);
            }
        }
    }

    // Bob-flag extensions over searched decompositions of the input.
    let rank = rho.numerical_rank();
    let max_flags = opts
        .max_ancilla_dim
        .min(tol::MAX_FACTOR_DIM / db)
        .min(tol::MAX_TOTAL_DIM / (da * db));
    let roof_opts = RoofOptions {
        restarts: opts.restarts.clamp(1, 6),
        max_iters: opts.max_iters.min(400),
        ..opts.roof()
    };
    let mut n = rank.max(2);
    while n <= max_flags {
        if candidates.iter().any(|c| c.value <= opts.tol) {
            break;
        }
        tried.push((1, n));
        let warms: Vec<Ensemble> = opts
            .warm_starts
            .iter()
            .filter(|w| w.len() <= n)
            .cloned()
            .collect();
        let outcome = bob_flag_search(measure, rho, n, &warms, &roof_opts, opts)?;
        if let Some((value, candidate, converged, restarts_used)) = outcome {
            candidates.push(Evaluated {
                value,
                ancilla_dims: (1, n),
                witness: BoundWitness::BobExtension(candidate),
                converged,
                restarts_used,
            });
        }
        n += 1;
    }

    Ok(report_from(candidates, BoundKind::UpperBound, tried, opts.seed))
}

/// The product eigenbasis diagonalizing a separable flag construction:
/// `{alpha_k (x) e_k}` on AA' and `{beta_k (x) e_k}` on BB', completed to
/// full orthonormal bases. Always admissible for the flag state regardless
/// of weight ties.
fn separable_witness_pair(dec: &Ensemble, da: usize, db: usize) -> Result<LocalBasisPair> {
    let members = dec.pure_kets()?;
    let n = members.len();
    let mut cols_a = Vec::with_capacity(n);
    let mut cols_b = Vec::with_capacity(n);
    for (k, (_, psi)) in members.iter().enumerate() {
        let form = schmidt_decompose(psi)?;
        let alpha = &form.vectors_a()[0];
        let beta = &form.vectors_b()[0];
        let mut col_a = CVector::zeros(da * n);
        let mut col_b = CVector::zeros(db * n);
        for a in 0..da {
            col_a[a * n + k] = alpha[a];
        }
        for b in 0..db {
            col_b[b * n + k] = beta[b];
        }
        cols_a.push(col_a);
        cols_b.push(col_b);
    }
    LocalBasisPair::new(
        complete_orthonormal_basis(&cols_a, da * n),
        complete_orthonormal_basis(&cols_b, db * n),
    )
}

/// The product eigenbasis diagonalizing a classical-quantum flag
/// construction: the Alice kets on A and `{beta_j^i (x) e_{i d_B + j}}` on
/// BB', completed.
fn cq_witness_pair(cq: &CqDecomposition, da: usize, db: usize) -> Result<LocalBasisPair> {
    let n = cq.weights.len() * db;
    let mut cols_b = Vec::with_capacity(n);
    for (i, b_state) in cq.bob_states.iter().enumerate() {
        let (_, betas) = b_state.eigen();
        for j in 0..db {
            let mut col = CVector::zeros(db * n);
            for b in 0..db {
                col[b * n + i * db + j] = betas[(b, j)];
            }
            cols_b.push(col);
        }
    }
    LocalBasisPair::new(
        complete_orthonormal_basis(&cq.alice_kets, da),
        complete_orthonormal_basis(&cols_b, db * n),
    )
}

/// Values a classical-quantum flag candidate: direct evaluation in its
/// construction basis first (exact zero for valid decompositions, immune to
/// weight ties), falling back to the basis search only when that fails.
fn evaluate_cq_candidate(
    measure: &dyn CoherenceMeasure,
    candidate: crate::quantifiers::extension::BobExtensionCandidate,
    cq: &CqDecomposition,
    da: usize,
    db: usize,
    opts: &ExtensionSearchOptions,
) -> Result<Evaluated> {
    let pair = cq_witness_pair(cq, da, db)?;
    let direct = correlated_coherence(measure, &candidate.state, &pair)?;
    if direct.abs() <= opts.tol {
        return Ok(Evaluated {
            value: direct,
            ancilla_dims: (1, candidate.ancilla_dim),
            witness: BoundWitness::BobExtension(candidate),
            converged: true,
            restarts_used: 0,
        });
    }
    let result = c_min(measure, &candidate.state, &opts.cmin_trimmed())?;
    Ok(Evaluated {
        value: result.value.min(direct),
        ancilla_dims: (1, candidate.ancilla_dim),
        witness: BoundWitness::BobExtension(candidate),
        converged: result.converged,
        restarts_used: result.restarts_used,
    })
}

/// Reads the conditional decomposition off a dephasing-invariant Alice basis:
/// weights and Bob blocks of `sum_i (P_i (x) 1) rho (P_i (x) 1)`.
fn cq_from_witness(
    rho: &DensityMatrix,
    basis_a: &crate::linalg::CMatrix,
) -> Result<CqDecomposition> {
    use crate::linalg::{CMatrix, CVector};
    let (da, db) = require_bipartite(rho)?;
    let mut weights = Vec::new();
    let mut alice_kets = Vec::new();
    let mut bob_states = Vec::new();
    for i in 0..da {
        let a_ket: CVector = basis_a.column(i).into_owned();
        // Conditional (unnormalized) Bob block <a_i| rho |a_i>.
        let mut block = CMatrix::zeros(db, db);
        for b in 0..db {
            for bp in 0..db {
                let mut z = crate::linalg::C64::ZERO;
                for a in 0..da {
                    for ap in 0..da {
                        z += a_ket[a].conj()
                            * rho.data()[(a * db + b, ap * db + bp)]
                            * a_ket[ap];
                    }
                }
                block[(b, bp)] = z;
            }
        }
        let w = block.trace().re;
        if w <= tol::RANK_CUTOFF {
            continue;
        }
        block /= crate::linalg::c64(w, 0.0);
        weights.push(w);
        alice_kets.push(a_ket);
        bob_states.push(DensityMatrix::new(
            block,
            vec![db],
            vec!["B".to_string()],
        )?);
    }
    Ok(CqDecomposition {
        weights,
        alice_kets,
        bob_states,
    })
}

type BobSearchHit = Option<(
    f64,
    crate::quantifiers::extension::BobExtensionCandidate,
    bool,
    usize,
)>;

/// Searches size-`n` decompositions of the input for the one whose Bob-flag
/// lift has the smallest constrained minimum. The inner minimum is evaluated
/// with a one-start probe during the search and re-evaluated honestly on the
/// winner.
fn bob_flag_search(
    measure: &dyn CoherenceMeasure,
    rho: &DensityMatrix,
    n: usize,
    warm_starts: &[Ensemble],
    roof_opts: &RoofOptions,
    opts: &ExtensionSearchOptions,
) -> Result<BobSearchHit> {
    use crate::correlated::{nelder_mead, NmOptions};
    use crate::quantifiers::roof::RoofProblem;
    use crate::sample::rng_stream;
    use rand::Rng;
    use rand_distr::StandardNormal;

    let problem = RoofProblem::new(measure, rho)?;
    if n < problem.rank() {
        return Ok(None);
    }
    let probe_opts = CminOptions {
        eps_deg: opts.eps_deg,
        restarts: 1,
        max_iters: 0,
        tol: opts.tol,
        seed: opts.seed,
    };
    let mut probe = |theta: &[f64]| -> f64 {
        let ensemble = match problem.ensemble_at(n, theta) {
            Ok(e) => e,
            Err(_) => return f64::INFINITY,
        };
        let candidate = match bob_flagged_extension(rho, &ensemble) {
            Ok(c) => c,
            Err(_) => return f64::INFINITY,
        };
        match c_min(measure, &candidate.state, &probe_opts) {
            Ok(r) => r.value,
            Err(_) => f64::INFINITY,
        }
    };

    let mut starts: Vec<Vec<f64>> = vec![problem.identity_theta_at(n)];
    for w in warm_starts {
        starts.push(problem.theta_from_ensemble_at(n, w)?);
    }
    let deterministic = starts.len();
    let total_starts = roof_opts.restarts.max(deterministic);
    let nm_opts = NmOptions {
        max_iters: roof_opts.max_iters,
        ftol: (roof_opts.tol * 0.1).max(1e-12),
        initial_step: 0.3,
    };
    let mut best_theta = starts[0].clone();
    let mut best = probe(&best_theta);
    let mut used = 0usize;
    let mut converged = true;
    for k in 0..total_starts {
        if best <= roof_opts.tol {
            break;
        }
        let theta0 = if k < deterministic {
            starts[k].clone()
        } else {
            let mut rng = rng_stream(opts.seed, 0x626f_6221 ^ ((n as u64) << 24) ^ k as u64);
            (0..2 * n * problem.rank())
                .map(|_| rng.sample::<f64, _>(StandardNormal))
                .collect()
        };
        let out = nelder_mead(&mut probe, &theta0, &nm_opts);
        used += 1;
        if out.fx < best {
            best = out.fx;
            best_theta = out.x;
            converged = out.converged;
        }
    }
    if !best.is_finite() {
        return Ok(None);
    }
    let ensemble = problem.ensemble_at(n, &best_theta)?;
    let candidate = bob_flagged_extension(rho, &ensemble)?;
    if !candidate.is_accepted() {
        return Ok(None);
    }
    let result = c_min(measure, &candidate.state, &opts.cmin_trimmed())?;
    Ok(Some((
        result.value,
        candidate,
        result.converged && converged,
        used + result.restarts_used,
    )))
}
