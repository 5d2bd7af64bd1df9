//! Structure classification with replayable witnesses.
//!
//! Classical-quantum detection searches the admissible Alice bases (marginal
//! eigenbases, with free rotations inside degenerate clusters) for one whose
//! dephasing leaves the state invariant. Classical-classical detection is a
//! direct corollary of the constrained minimum being zero.

use crate::basis::LocalBasisPair;
use crate::coherence::L1;
use crate::correlated::{
    admissible_bases, c_min, nelder_mead, CminOptions, ClusterParametrization, NmOptions,
};
use crate::error::{QcorrError, Result};
use crate::linalg::CMatrix;
use crate::ops::{dephase_alice, party_marginal};
use crate::sample::rng_stream;
use crate::state::{DensityMatrix, Party};
use crate::tol;

/// Outcome of classical-quantum detection. The witness basis replays: when
/// `is_cq` holds, dephasing Alice in `witness_basis` reproduces the state
/// within `residual`.
#[derive(Debug, Clone)]
pub struct CqVerdict {
    pub is_cq: bool,
    /// Max-entry distance between the state and its best found Alice
    /// dephasing.
    pub residual: f64,
    pub witness_basis: CMatrix,
    pub converged: bool,
    pub restarts_used: usize,
}

/// Outcome of classical-classical detection. The witness pair replays: the
/// correlated coherence evaluated there equals `c_min_value`.
#[derive(Debug, Clone)]
pub struct CcVerdict {
    pub is_cc: bool,
    pub c_min_value: f64,
    pub witness: LocalBasisPair,
    pub converged: bool,
}

/// Overall structural label for a bipartite state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateClass {
    ClassicalClassical,
    ClassicalQuantum,
    Neither,
}

impl StateClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            StateClass::ClassicalClassical => "CC",
            StateClass::ClassicalQuantum => "CQ",
            StateClass::Neither => "neither",
        }
    }
}

/// True iff some orthonormal Alice basis dephases the state onto itself
/// within `tol`. Searches the admissible bases of the Alice marginal with
/// simplex descent inside degenerate clusters.
pub fn is_classical_quantum(rho: &DensityMatrix, tol: f64) -> Result<CqVerdict> {
    if rho.n_factors() != 2 {
        return Err(QcorrError::NotBipartite {
            factors: rho.n_factors(),
        });
    }
    let marginal = party_marginal(rho, Party::Alice)?;
    let adm = admissible_bases(&marginal, tol::EPS_DEG_DEFAULT);
    let parametrization = ClusterParametrization::new(&adm);

    let residual_at = |basis: &CMatrix| -> f64 {
        dephase_alice(rho, basis)
            .map(|d| d.max_abs_diff(rho))
            .unwrap_or(f64::INFINITY)
    };

    if parametrization.n_params() == 0 {
        let residual = residual_at(&adm.eigenbasis);
        return Ok(CqVerdict {
            is_cq: residual <= tol,
            residual,
            witness_basis: adm.eigenbasis,
            converged: true,
            restarts_used: 0,
        });
    }

    let mut objective = |theta: &[f64]| residual_at(&parametrization.basis_at(theta));
    let nm_opts = NmOptions {
        max_iters: 400,
        ftol: (tol * 1e-3).max(1e-13),
        initial_step: 0.4,
    };
    let mut best_theta = vec![0.0; parametrization.n_params()];
    let mut best = objective(&best_theta);
    let mut converged = true;
    let mut used = 0usize;
    let restarts = 8usize;
    for k in 0..restarts {
        if best <= tol * 1e-3 {
            break;
        }
        let theta0 = if k == 0 {
            best_theta.clone()
        } else {
            let mut rng = rng_stream(0, 0x6371_6371 ^ k as u64);
            parametrization.random_theta(&mut rng)
        };
        let out = nelder_mead(&mut objective, &theta0, &nm_opts);
        used += 1;
        if out.fx < best {
            best = out.fx;
            best_theta = out.x;
            converged = out.converged;
        }
    }
    Ok(CqVerdict {
        is_cq: best <= tol,
        residual: best,
        witness_basis: parametrization.basis_at(&best_theta),
        converged,
        restarts_used: used,
    })
}

/// True iff the constrained minimum vanishes within `tol`; the argmin basis
/// pair is the witness. The l1 measure is used internally since both
/// measures share the zero set.
pub fn is_classical_classical(rho: &DensityMatrix, tol: f64) -> Result<CcVerdict> {
    let result = c_min(&L1, rho, &CminOptions::default())?;
    Ok(CcVerdict {
        is_cc: result.value <= tol,
        c_min_value: result.value,
        witness: result.argmin_basis,
        converged: result.converged,
    })
}

/// Three-way label: classical-classical, classical-quantum, or neither.
pub fn classify(rho: &DensityMatrix, tol: f64) -> Result<(StateClass, CcVerdict, CqVerdict)> {
    let cc = is_classical_classical(rho, tol)?;
    let cq = is_classical_quantum(rho, tol)?;
    let class = if cc.is_cc {
        StateClass::ClassicalClassical
    } else if cq.is_cq {
        StateClass::ClassicalQuantum
    } else {
        StateClass::Neither
    };
    Ok((class, cc, cq))
}
