//! Numerical laboratory for the energy density of the critical planar Ising model.
//!
//! The central object is a discrete fermionic spinor `f(a, z)` living on the
//! medial vertices of a square-grid domain. Its value at the source, compared
//! with a full-plane counterpart built from the dimer coupling function,
//! encodes the average energy density `E[σ_x σ_y] - √2/2` of the critical
//! Ising model with `+` or free boundary conditions. As the mesh shrinks, the
//! rescaled energy density converges to `±ℓ_Ω(a)/(2π) · δ`, where `ℓ_Ω` is the
//! hyperbolic metric element of the domain.
//!
//! The crate provides four independent routes to the same quantities, which
//! cross-validate each other:
//!
//! * [`contours`] — exact (exponential-time) enumeration of contour
//!   configurations on tiny domains: partition functions, spinor values and
//!   winding numbers, in floating point and in exact `ℚ(√2)` arithmetic.
//! * [`spinor`] — a sparse linear solver for the discrete Riemann boundary
//!   value problem that characterizes the spinor on domains of any size.
//! * [`mc`] — Monte Carlo sampling (cluster and single-flip) of the critical
//!   Ising model with `+` and free boundary conditions.
//! * [`continuum`] — closed-form conformal maps, continuous spinors and the
//!   hyperbolic metric element the discrete quantities converge to.
//!
//! See the `examples/` directory for runnable entry points covering each
//! capability, and the `acceptance` integration test for the full
//! verification suite.

pub mod cli;
pub mod continuum;
pub mod contours;
pub mod coupling;
pub mod lattice;
pub mod mc;
pub mod spinor;

use thiserror::Error;

/// Contour weight `α = √2 - 1 = tanh(β_c) = e^{-2β_c}`.
pub const ALPHA: f64 = std::f64::consts::SQRT_2 - 1.0;

/// Critical inverse temperature `β_c = ½ ln(√2 + 1)` of the square-lattice
/// Ising model.
pub fn beta_critical() -> f64 {
    0.5 * (std::f64::consts::SQRT_2 + 1.0).ln()
}

/// Infinite-volume expectation of the product of two adjacent spins, `√2/2`.
pub const MEAN_FIELD_ENERGY: f64 = std::f64::consts::SQRT_2 / 2.0;

/// Value of the full-plane spinor at its source, `(2 + √2)/4`.
pub const FULL_PLANE_DIAGONAL: f64 = (2.0 + std::f64::consts::SQRT_2) / 4.0;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no grid vertex lies inside the region at mesh {mesh}")]
    EmptyDomain { mesh: f64 },
    #[error("domain has no horizontal edge")]
    NoHorizontalEdge,
    #[error("point {0} is not the midpoint of an interior horizontal edge")]
    NotInteriorHorizontalMidpoint(String),
    #[error("enumeration cap exceeded: {edges} edges > cap {cap}")]
    EnumerationCap { edges: usize, cap: usize },
    #[error("winding numbers of admissible walks disagree mod 4π: {0:?}")]
    WindingInconsistent(Vec<i64>),
    #[error("quadrature did not converge: last refinement changed by {delta:e}")]
    QuadratureNonConvergence { delta: f64 },
    #[error("asymptotic formula requested off the odd sublattice at ({x}, {y})")]
    AsymptoticParity { x: i64, y: i64 },
    #[error("solver residual {residual:e} exceeds tolerance {tolerance:e}")]
    SolverDegenerate { residual: f64, tolerance: f64 },
    #[error("missing neighbor value at {0}")]
    MissingNeighbor(String),
    #[error("contour is not a closed loop of medial edges")]
    NotClosedContour,
    #[error("discrete integral increments are inconsistent: spread {0:e}")]
    IntegralInconsistent(f64),
    #[error("branch tracking detected a square-root discontinuity at {0}")]
    BranchDiscontinuity(String),
    #[error("point {0} lies outside the domain")]
    PointOutsideDomain(String),
    #[error("domain is not cellular: {0} bounded faces vs {1} unit squares")]
    NotCellular(usize, usize),
    #[error("linear algebra failure: {0}")]
    Linalg(String),
    #[error("invalid sweep spec: {0}")]
    InvalidSpec(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("unsupported domain file: {0}")]
    BadDomainFile(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
