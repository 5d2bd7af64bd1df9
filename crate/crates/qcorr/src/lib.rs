//! Coherence-based quantifiers of quantum correlations on small bipartite
//! systems.
//!
//! The crate builds up from validated density matrices and kets
//! ([`state`]), through basis-dependent coherence measures ([`coherence`])
//! and the basis-minimized correlated coherence ([`correlated`]), to
//! extension-based entanglement and discord quantifiers with explicit
//! exact/upper-bound reporting ([`quantifiers`]), plus statistical property
//! suites over constructed state families ([`testbench`]) and JSON
//! encodings for all inputs and outputs ([`io`]).
//!
//! Everything is deterministic under a fixed seed: sampling uses counted
//! ChaCha streams, optimizers take explicit seeds, and suite reports
//! replay byte-identically.

pub mod basis;
pub mod coherence;
pub mod correlated;
pub mod ensemble;
pub mod error;
pub mod io;
pub mod linalg;
pub mod ops;
pub mod quantifiers;
pub mod sample;
pub mod schmidt;
pub mod state;
pub mod testbench;
pub mod tol;

pub use error::{QcorrError, Result};
