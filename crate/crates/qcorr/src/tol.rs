//! Centralized numerical tolerances.
//!
//! Validation tolerances gate what counts as a well-formed state or basis;
//! certification tolerances gate what a search accepts as a feasible witness.

/// Max allowed entry of |M - M^dag| for a density matrix.
pub const HERMITICITY: f64 = 1e-10;

/// Max allowed |trace - 1| for a density matrix.
pub const TRACE: f64 = 1e-10;

/// Most negative eigenvalue tolerated before a matrix is rejected as not PSD.
/// Eigenvalues in [-PSD_FLOOR, 0) are clipped to zero by consumers.
pub const PSD_FLOOR: f64 = 1e-10;

/// Max allowed |norm - 1| for a ket.
pub const KET_NORM: f64 = 1e-10;

/// Max allowed entry of |B^dag B - I| for bases and unitaries.
pub const ORTHONORMALITY: f64 = 1e-10;

/// Schmidt reconstruction must match the input ket up to global phase within this.
/// Truncating a coefficient lambda <= SCHMIDT_TRUNCATION drops amplitude
/// sqrt(lambda), so this must dominate sqrt(rank * SCHMIDT_TRUNCATION).
pub const SCHMIDT_RECONSTRUCTION: f64 = 1e-5;

/// Schmidt coefficients with lambda below this are truncated as exact zeros.
pub const SCHMIDT_TRUNCATION: f64 = 1e-12;

/// Max marginal / symmetry residual entry for an accepted extension candidate.
pub const EXTENSION_RESIDUAL: f64 = 1e-8;

/// Max reconstruction residual entry for a caller-supplied decomposition.
pub const DECOMPOSITION_RESIDUAL: f64 = 1e-7;

/// Default relative eigenvalue-gap threshold for degeneracy clustering.
pub const EPS_DEG_DEFAULT: f64 = 1e-7;

/// Default optimizer stall tolerance.
pub const OPT_TOL_DEFAULT: f64 = 1e-9;

/// Purity above 1 - PURE_PURITY certifies a pure input.
pub const PURE_PURITY: f64 = 1e-10;

/// Eigenvalues above this count toward the rank used to size extension searches.
pub const RANK_CUTOFF: f64 = 1e-12;

/// Max total Hilbert-space dimension for dense states.
pub const MAX_TOTAL_DIM: usize = 256;

/// Max dimension of a single tensor factor.
pub const MAX_FACTOR_DIM: usize = 16;
