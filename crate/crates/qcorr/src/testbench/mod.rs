//! Statistical verification of the structural claims on constructed state
//! families: convexity, LOCC monotonicity on the Nielsen slice, local
//! unitary invariance, degenerate-spectrum behavior, and faithfulness
//! against the PPT oracle.

mod majorization;
mod report;
mod suites;
mod werner;

pub use majorization::{is_majorized_by, nielsen_pair_sampler, MajorizationPair};
pub use report::{render_csv, render_table, FailureRecord, PropertySuiteReport};
pub use suites::{
    run_suite, suite_convexity, suite_degenerate_schmidt, suite_faithfulness,
    suite_local_unitary_invariance, suite_monotonicity_pure, SUITE_IDS,
};
pub use werner::{werner, werner_product_decomposition};
