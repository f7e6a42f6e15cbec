//! Spectral analysis of linear maps on d×d complex matrices.
//!
//! The crate represents a map Φ by its d²×d² transfer matrix under
//! column-stacking vectorization and provides:
//!
//! - construction from Kraus operators or Choi matrices, application,
//!   composition, Hilbert-Schmidt and ω-weighted adjoints, depolarizing
//!   mixing, and fixed points ([`superop`]);
//! - eigenvalue extraction and the trace-vs-spectrum inequality checks for
//!   trace-preserving maps ([`spectral`]);
//! - transition matrices relative to orthonormal bases, the inequality
//!   tr(Φ) ≤ d·tr(T_G), Hermitian eigenvectors, and Schmidt-rank-2 witness
//!   vectors ([`transition`]);
//! - a Choi-criterion CP test, seesaw falsifiers for 1- and 2-positivity,
//!   and seeded random ensembles (CPTP, decomposable, unitary)
//!   ([`positivity`]);
//! - named example maps with closed-form reference data and a verification
//!   manifest ([`zoo`]);
//! - GKSL generators, semigroup exponentiation, relaxation-rate bounds, and
//!   small-time limit checks ([`generators`]);
//! - reproducible, seeded ensemble scans with CSV/JSON reporting
//!   ([`scan`]).
//!
//! All operations are pure functions of their inputs; values are immutable
//! after construction and safe to share across threads.

pub mod config;
pub mod error;
pub mod generators;
pub mod linalg;
pub mod positivity;
pub mod report;
pub mod rng;
pub mod scan;
pub mod spectral;
pub mod superop;
pub mod transition;
pub mod zoo;

pub use config::Tolerances;
pub use error::{MapError, Result};
pub use report::{BoundReport, InequalityId};
pub use spectral::SpectrumReport;
pub use superop::{ChoiMatrix, HermitianMatrix, Superoperator};
pub use transition::{OrthonormalBasis, Rank2Witness, TransitionMatrix};
