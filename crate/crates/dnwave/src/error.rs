//! Error type shared across the library.
//!
//! Every fallible operation returns [`Result`]. Variants are grouped by the
//! stage that raises them: parameter admissibility, special-function domains,
//! grid/operator plumbing, and numerical back-ends (quadrature, eigensolves,
//! constrained solves). Messages name the violated condition and carry the
//! offending values so a caller can report a precise diagnostic without
//! re-deriving context.

use thiserror::Error;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// Unified error type for wave construction, discretization, and spectral
/// verification.
#[derive(Debug, Clone, Error)]
pub enum Error {
    // ---- special-function domains -------------------------------------
    /// Elliptic modulus outside the closed unit interval.
    #[error("elliptic modulus must satisfy 0 <= kappa <= 1 (got kappa = {kappa})")]
    ModulusOutOfRange { kappa: f64 },

    /// A quantity that diverges at the requested argument (e.g. the complete
    /// integral of the first kind at modulus 1).
    #[error("{what} diverges at kappa = 1")]
    Divergent { what: &'static str },

    // ---- wave-family admissibility ------------------------------------
    /// Wave speed must exceed 1.
    #[error("wave speed must satisfy c > 1 (got c = {c})")]
    SpeedNotAboveOne { c: f64 },

    /// Frequency must exceed c²/4 so that sigma = omega − c²/4 is positive.
    #[error("frequency must satisfy omega > c^2/4 (got omega = {omega}, c^2/4 = {bound})")]
    FrequencyNotAboveQuarterSpeedSquared { omega: f64, bound: f64 },

    /// Dispersion coefficient must lie strictly inside (0, (c−1)/(4·sigma)).
    #[error(
        "dispersion coefficient must satisfy 0 < alpha < (c-1)/(4*sigma) \
         (got alpha = {alpha}, upper bound = {bound})"
    )]
    DispersionOutOfRange { alpha: f64, bound: f64 },

    /// The two-parameter family needs a modulus strictly inside (0, 1).
    #[error("wave modulus must satisfy 0 < kappa < 1 strictly (got kappa = {kappa})")]
    ModulusNotInterior { kappa: f64 },

    // ---- grid / operator plumbing -------------------------------------
    /// Grid sizes must be even and large enough to carry a Nyquist split.
    #[error("grid size must be even and >= 4 (got N = {n})")]
    BadGridSize { n: usize },

    /// Grid half-period must be positive.
    #[error("grid half-period must satisfy T > 0 (got T = {t})")]
    BadHalfPeriod { t: f64 },

    /// Wave sampling needs enough nodes to resolve the profile.
    #[error("wave sampling requires an even grid size N >= 32 (got N = {n})")]
    WaveGridTooSmall { n: usize },

    /// Two objects were built on different grids.
    #[error("grids are incompatible: {what}")]
    GridMismatch { what: &'static str },

    /// Differentiation order outside {1, 2, 3}.
    #[error("derivative order must be 1, 2, or 3 (got {order})")]
    UnsupportedOrder { order: usize },

    /// Vector/matrix size disagreement.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A symmetry tag claimed at construction is violated by the matrix.
    #[error(
        "operator violates its {tag} tag: defect {defect:.3e} exceeds bound {bound:.3e}"
    )]
    SymmetryTagViolated {
        tag: &'static str,
        defect: f64,
        bound: f64,
    },

    /// Attempt to project onto (or normalize) a numerically zero vector.
    #[error("cannot normalize a zero vector ({what})")]
    ZeroVector { what: &'static str },

    /// An operation required a specific symmetry tag.
    #[error("operation requires a {expected}-tagged operator (got {got})")]
    WrongSymmetryTag {
        expected: &'static str,
        got: &'static str,
    },

    /// The closed-form elliptic expression is evaluated only away from the
    /// endpoint singularities (κ² division at 0, K divergence at 1).
    #[error("modulus must lie in [0.02, 0.98] for the closed-form evaluation (got kappa = {kappa})")]
    ModulusOutsideClosedFormRange { kappa: f64 },

    // ---- numerical back-ends ------------------------------------------
    /// Adaptive quadrature exhausted its subdivision budget.
    #[error(
        "quadrature did not reach tolerance on [{a}, {b}]: \
         error estimate {estimate:.3e} > {tol:.3e}"
    )]
    QuadratureDidNotConverge {
        a: f64,
        b: f64,
        estimate: f64,
        tol: f64,
    },

    /// The dense eigensolver failed to converge.
    #[error("eigendecomposition did not converge ({what})")]
    EigenFailed { what: &'static str },

    /// An eigenpair failed its residual spot-check after the solve.
    #[error(
        "eigenpair residual check failed: ||A v - lambda v|| = {residual:.3e} \
         exceeds {bound:.3e}"
    )]
    EigenResidual { residual: f64, bound: f64 },

    /// Right-hand side of a constrained solve is not orthogonal to the
    /// supplied kernel.
    #[error(
        "right-hand side is not orthogonal to the kernel: \
         projection coefficient {defect:.3e} exceeds {tol:.3e}"
    )]
    RhsNotOrthogonal { defect: f64, tol: f64 },

    /// Linear solve failed (singular shifted system).
    #[error("linear solve failed: {what}")]
    SolveFailed { what: &'static str },
}
