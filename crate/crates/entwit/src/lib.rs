//! Detection of bipartite entanglement through a family of linear maps
//! `Φ_{α,β}(A) = α·A^{T_B} + β·A^R` built from the partial transpose and the
//! realignment rearrangement, the witness operator derived from the map's
//! Choi matrix, and four comparison separability criteria (PPT, CCNR, dV, CT).
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] — dense complex matrices, Hermitian eigenvalues, singular
//!   values, norms, Kronecker products.
//! * [`bipartite`] — bipartite density matrices, partial transpose,
//!   realignment, operator bases and correlation matrices.
//! * [`posmap`] — the map `Φ_{α,β}`, per-state positivity analysis, the Choi
//!   matrix and the complete-positivity verdict.
//! * [`witness`] — the operator `O = C·C†`, the shift `W = O − γI`, the γ
//!   rule and witness evaluation.
//! * [`criteria`] — PPT, CCNR, dV and CT criteria with scalar diagnostics.
//! * [`statezoo`] — constructors for the state families used throughout.
//!
//! All values are immutable once constructed and all operations are pure
//! functions of their inputs, so everything here is safe to share across
//! threads.

pub mod bipartite;
pub mod criteria;
mod error;
pub mod linalg;
pub mod posmap;
pub mod statezoo;
pub mod witness;

pub use bipartite::BipartiteState;
pub use error::{Error, Result};
pub use linalg::{CMatrix, C64};
pub use posmap::MapParams;

/// Default absolute tolerance for Hermiticity checks, PSD floors and
/// detection thresholds.
pub const DEFAULT_TOL: f64 = 1e-9;
