//! Extension-based quantifiers of quantum correlations.
//!
//! The entanglement quantifier is the constrained minimum evaluated on a
//! symmetric extension of the state, minimized over extensions; the
//! discord-like variant extends Bob's side only. Pure states reduce to the
//! Schmidt basis exactly; mixed states get a bounded candidate search whose
//! result is reported with an explicit `exact`/`upper_bound` tag, the
//! witness that produced it, and the search diagnostics.

mod bounds;
mod classify;
mod extension;
mod oracles;
mod pure;
mod roof;

pub use bounds::{d_c_upper_bound, e_upper_bound, ExtensionSearchOptions};
pub use classify::{
    classify, is_classical_classical, is_classical_quantum, CcVerdict, CqVerdict, StateClass,
};
pub use extension::{
    bob_flagged_extension, bob_trivial_extension, cq_extension,
    extension_from_separable_decomposition, flagged_extension, refine_alignment,
    trivial_extension, BobExtensionCandidate, CqDecomposition, ExtensionCandidate,
};
pub use oracles::{
    concurrence_2q, entropy_of_entanglement, is_separable_ppt, min_ppt_eigenvalue,
    partial_transpose,
};
pub use pure::{e_l1_pure_closed_form, e_pure, e_pure_density, e_relent_pure_closed_form};
pub use roof::{e_convex_roof_estimate, RoofOptions};

use crate::ensemble::Ensemble;
use crate::schmidt::SchmidtForm;

/// Whether a reported value is the quantifier itself or only bounds it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// The value equals the quantifier: pure inputs, or separable /
    /// classical-quantum inputs with a supplied decomposition.
    Exact,
    /// The best value over the searched candidate family.
    UpperBound,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::Exact => "exact",
            BoundKind::UpperBound => "upper_bound",
        }
    }
}

/// The object that produced a reported value; every report is replayable
/// from its witness.
#[derive(Debug, Clone)]
pub enum BoundWitness {
    /// Pure-state path: the Schmidt decomposition defining the basis.
    Schmidt(SchmidtForm),
    /// A symmetric extension on (A, A', B, B').
    Extension(ExtensionCandidate),
    /// A Bob-side extension on (A, B, B').
    BobExtension(BobExtensionCandidate),
    /// A pure-state decomposition (convex-roof search).
    Ensemble(Ensemble),
}

#[derive(Debug, Clone)]
pub struct BoundDiagnostics {
    /// Total optimizer starts spent across all internal searches.
    pub restarts: usize,
    /// Ancilla dimension pairs attempted, in order.
    pub ancilla_dims_tried: Vec<(usize, usize)>,
    pub seed: u64,
    /// False when the winning candidate's optimizer hit its iteration
    /// budget without stalling.
    pub converged: bool,
    /// Number of candidate extensions (or ensembles) whose value was
    /// computed.
    pub candidates_evaluated: usize,
}

/// A quantifier value together with its meaning, provenance, and the search
/// trace that produced it.
#[derive(Debug, Clone)]
pub struct BoundReport {
    pub value: f64,
    pub kind: BoundKind,
    /// Ancilla dimensions `(d_A', d_B')` of the winning candidate; `(1, 1)`
    /// for the pure path and the bare input.
    pub ancilla_dims: (usize, usize),
    pub witness: BoundWitness,
    pub diagnostics: BoundDiagnostics,
}
