//! Numerical verification of spectral stability for periodic dnoidal
//! traveling waves of a coupled Schrödinger–KdV system.
//!
//! The crate is organized bottom-up:
//!
//! * [`elliptic`] — Jacobi elliptic functions `sn`, `cn`, `dn` and the
//!   complete integrals `K(κ)`, `E(κ)`, parameterized by the modulus κ.
//! * [`quad`] — adaptive Gauss–Legendre quadrature for the closed-form
//!   cross-checks.
//! * [`wavefamily`] — the two-parameter dnoidal wave family `(φ, ψ)` with
//!   its admissibility constraints and defining-equation residuals.
//! * [`discretize`] — periodic Fourier collocation grids, spectral
//!   differentiation matrices, and symmetry-tagged operators.
//! * [`operators`] — the linearized operators: the scalar pair `L₁`, `L₂`,
//!   the KdV-side operator `Q`, the block operator, the symplectic matrix
//!   `J`, the projected Hamiltonian `𝓗 = P 𝓛 P`, and `J𝓗`.
//! * [`spectra`] — symmetric and general eigensolves with classification,
//!   constrained solves for Weinstein-type quantities `⟨T⁻¹v, v⟩`, the
//!   scaled Lamé operator, and Green's-function closed forms used as
//!   independent oracles.
//! * [`stability`] — check records for each spectral claim, the aggregate
//!   stability verdict, and deterministic parameter sweeps.
//!
//! Floating-point claims are always checked against explicit, named
//! tolerances; every check record keeps the measured value next to the
//! threshold so that failures stay diagnosable.

pub mod discretize;
pub mod elliptic;
pub mod error;
pub mod operators;
pub mod quad;
pub mod spectra;
pub mod stability;
pub mod wavefamily;

pub use error::{Error, Result};
