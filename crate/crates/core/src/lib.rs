//! Geometry of the symmetric space of unit-determinant positive definite
//! matrices, aimed at Dirichlet-Selberg domains and their certification.
//!
//! The crate is organized in layers:
//!
//! - [`scalar`] / [`exact`]: a two-tier scalar tower (arbitrary-precision
//!   rationals and `f64`) plus exact rational linear algebra. Incidence,
//!   pairing, and relator decisions are made in exact arithmetic; spectral
//!   quantities (eigenvalues, distances, angles) live in `f64`.
//! - [`space`]: points of the symmetric space, the congruence action of
//!   unit-determinant matrices, and the Riemannian distance.
//! - [`satake`]: the compactification by projective classes of positive
//!   semidefinite matrices, boundary components, and their projections.
//! - [`busemann`]: the Selberg invariant, Busemann-Selberg functions of
//!   type 0 and type k, horoballs, and boundary asymptotics.
//! - [`polytope`]: projective polytopes in the trace-one chart, exact
//!   double-description vertex enumeration, face posets, and the
//!   finite-volume test.
//! - [`poincare`]: Dirichlet-Selberg domain construction, facet pairings,
//!   ridge cycles with dihedral-angle sums, and cycle fixed points.
//! - [`harness`]: a bundled worked example (a lattice in SL(3,R) whose
//!   domain is a projective 5-simplex), end-to-end verification, seeded
//!   property sweeps, and CSV slice emission.

pub mod busemann;
pub mod exact;
pub mod harness;
pub mod laurent;
pub mod mat;
pub mod poincare;
pub mod polytope;
pub mod rng;
pub mod satake;
pub mod scalar;
pub mod space;

pub use scalar::Scalar;

use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symmetric at ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("matrix is singular")]
    Singular,
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("matrix is not positive semidefinite")]
    NotPositiveSemidefinite,
    #[error("determinant is not 1: {0}")]
    NotUnimodular(String),
    #[error("zero matrix where a nonzero one is required")]
    ZeroMatrix,
    #[error("expected exact rational data: {0}")]
    InexactInput(String),
    #[error("eigenvalue solve failed: residual {0}")]
    NonConvergence(f64),
    #[error("not a boundary point: {0}")]
    NotBoundary(String),
    #[error("invalid spec: {0}")]
    InvalidSpec(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("iteration budget exhausted: {0}")]
    BudgetExhausted(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Tolerances for the floating-point side of the tower.
///
/// Exact-mode decisions never consult these.
#[derive(Debug, Clone, Copy, serde::Serialize, serde::Deserialize)]
pub struct Tolerances {
    /// Absolute tolerance on dihedral-angle sums (radians).
    #[serde(default = "default_angle")]
    pub angle: f64,
    /// Slack for metric inequalities (distances, Lipschitz margins).
    #[serde(default = "default_metric")]
    pub metric: f64,
    /// Relative eigenvalue residual threshold.
    #[serde(default = "default_spectral")]
    pub spectral: f64,
}

fn default_angle() -> f64 {
    1e-6
}
fn default_metric() -> f64 {
    1e-9
}
fn default_spectral() -> f64 {
    1e-10
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            angle: 1e-6,
            metric: 1e-9,
            spectral: 1e-10,
        }
    }
}
