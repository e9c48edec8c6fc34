//! Periodic Fourier collocation: grids, differentiation matrices, and the
//! tagged dense-operator type used by every assembled linearization.
//!
//! The domain is one period [−T, T) sampled at N uniform nodes with the
//! right endpoint excluded (periodic identification). Differentiation is
//! exact on the resolved trigonometric basis: the matrices are circulants
//! whose first column is the inverse transform of the Fourier symbol (ik)ᵖ.
//! For odd orders the Nyquist mode n = −N/2 is zeroed, which makes D₁ and
//! D₃ *exactly* antisymmetric — the anti-self-adjointness of the symplectic
//! factor downstream depends on this, so the stencil is additionally
//! mirrored entry-by-entry to keep the (anti)symmetry bit-exact rather than
//! merely rounding-level.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::error::{Error, Result};

/// Uniform periodic collocation grid on [−T, T).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralGrid {
    /// Number of nodes (even).
    pub n: usize,
    /// Half-period T; the domain is [−T, T).
    pub half_period: f64,
    /// Nodes xⱼ = −T + 2Tj/N for j = 0..N−1.
    pub nodes: Vec<f64>,
    /// Wavenumbers kₙ = nπ/T for n = −N/2 .. N/2−1, stored ascending
    /// (index j holds n = j − N/2).
    pub wavenumbers: Vec<f64>,
}

impl SpectralGrid {
    /// Uniform quadrature weight 2T/N (trapezoid = spectral accuracy for
    /// periodic analytic integrands).
    pub fn weight(&self) -> f64 {
        2.0 * self.half_period / self.n as f64
    }

    /// Whether two grids describe the same discretization (same N and the
    /// same half-period bit pattern; grids built from identical parameters
    /// compare equal).
    pub fn compatible(&self, other: &SpectralGrid) -> bool {
        self.n == other.n && self.half_period == other.half_period
    }

    /// Discrete L² inner product Σ u_j v_j · (2T/N) of two node vectors.
    pub fn inner(&self, u: &[f64], v: &[f64]) -> f64 {
        debug_assert_eq!(u.len(), self.n);
        debug_assert_eq!(v.len(), self.n);
        let dot: f64 = u.iter().zip(v).map(|(a, b)| a * b).sum();
        dot * self.weight()
    }
}

/// Symmetry class of an assembled operator matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Symmetry {
    Symmetric,
    Antisymmetric,
    General,
}

/// Relative bound a tagged matrix must satisfy at construction:
/// ‖M ∓ Mᵀ‖ ≤ TAG_DEFECT_BOUND · ‖M‖ (Frobenius norms).
pub const TAG_DEFECT_BOUND: f64 = 1e-10;

/// Dense real operator matrix tagged with its symmetry class and the grid it
/// was assembled on. The constructor *verifies* the tag, so any operator
/// that circulates in the crate carries a checked structural guarantee.
#[derive(Debug, Clone)]
pub struct LinOp {
    /// N′×N′ matrix, N′ = N or 3N for block operators.
    pub matrix: DMatrix<f64>,
    pub symmetry: Symmetry,
    pub grid: SpectralGrid,
}

/// Frobenius-norm symmetry defect of `m` against a claimed tag
/// (‖M − Mᵀ‖ for symmetric, ‖M + Mᵀ‖ for antisymmetric, 0 for general).
pub fn symmetry_defect(m: &DMatrix<f64>, symmetry: Symmetry) -> f64 {
    match symmetry {
        Symmetry::Symmetric => (m - m.transpose()).norm(),
        Symmetry::Antisymmetric => (m + m.transpose()).norm(),
        Symmetry::General => 0.0,
    }
}

impl LinOp {
    /// Wraps a matrix after verifying its symmetry tag to
    /// [`TAG_DEFECT_BOUND`] (relative, Frobenius). The matrix must be square
    /// with side N or 3N of the grid.
    pub fn new(matrix: DMatrix<f64>, symmetry: Symmetry, grid: SpectralGrid) -> Result<Self> {
        let side = matrix.nrows();
        if matrix.ncols() != side || (side != grid.n && side != 3 * grid.n) {
            return Err(Error::DimensionMismatch {
                expected: grid.n,
                got: side,
            });
        }
        let defect = symmetry_defect(&matrix, symmetry);
        let bound = TAG_DEFECT_BOUND * matrix.norm();
        if defect > bound {
            let tag = match symmetry {
                Symmetry::Symmetric => "symmetric",
                Symmetry::Antisymmetric => "antisymmetric",
                Symmetry::General => "general",
            };
            return Err(Error::SymmetryTagViolated { tag, defect, bound });
        }
        Ok(LinOp {
            matrix,
            symmetry,
            grid,
        })
    }

    /// Side length of the matrix.
    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Applies the operator to a node vector.
    pub fn apply(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.matrix * v
    }
}

/// Builds the uniform periodic grid on [−T, T) with N nodes.
///
/// N must be even (the wavenumber range −N/2..N/2−1 needs a Nyquist split)
/// and at least 4. Production call sites use N ≥ 256; small sizes are
/// permitted so the documented toy examples remain constructible.
pub fn make_grid(t: f64, n: usize) -> Result<SpectralGrid> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::BadHalfPeriod { t });
    }
    if n < 4 || n % 2 != 0 {
        return Err(Error::BadGridSize { n });
    }
    let nodes = (0..n)
        .map(|j| -t + 2.0 * t * j as f64 / n as f64)
        .collect();
    let half = (n / 2) as isize;
    let wavenumbers = (0..n)
        .map(|j| (j as isize - half) as f64 * std::f64::consts::PI / t)
        .collect();
    Ok(SpectralGrid {
        n,
        half_period: t,
        nodes,
        wavenumbers,
    })
}

/// Fourier differentiation matrix of the given order (1, 2, or 3).
///
/// The matrix is the circulant with stencil
/// r\[d\] = (1/N) Σₙ (i kₙ)ᵖ exp(2πi n d / N), realified. Odd orders have
/// the Nyquist mode zeroed (so the result is exactly antisymmetric); even
/// orders include it and are exactly symmetric. The stencil is mirrored
/// explicitly (r\[N−d\] = ±r\[d\]) so the structural property holds
/// bit-for-bit, not merely to rounding.
pub fn diff_matrix(grid: &SpectralGrid, order: usize) -> Result<LinOp> {
    if !(1..=3).contains(&order) {
        return Err(Error::UnsupportedOrder { order });
    }
    let n = grid.n;
    let nf = n as f64;
    let half = n / 2;
    let odd = order % 2 == 1;

    // First half of the stencil from the realified symbol sum; the modes
    // n = ±1 .. ±(N/2−1) pair up into pure cosine (even p) or sine (odd p)
    // contributions, and the unpaired Nyquist mode n = −N/2 contributes a
    // (−1)^d term for even p only.
    let mut r = vec![0.0_f64; n];
    let k_nyq = grid.wavenumbers[0].abs();
    for d in 0..=half {
        let theta = 2.0 * std::f64::consts::PI * d as f64 / nf;
        let mut acc = 0.0;
        for m in 1..half {
            let k = grid.wavenumbers[half + m];
            let term = match order {
                1 => -k * (theta * m as f64).sin(),
                2 => -k * k * (theta * m as f64).cos(),
                3 => k * k * k * (theta * m as f64).sin(),
                _ => unreachable!(),
            };
            acc += 2.0 * term;
        }
        if order == 2 {
            let sign = if d % 2 == 0 { 1.0 } else { -1.0 };
            acc -= k_nyq * k_nyq * sign;
        }
        r[d] = acc / nf;
    }
    if odd {
        // Analytically exact zeros of the sine sums; forcing them removes
        // the rounding residue of sin(πn).
        r[0] = 0.0;
        r[half] = 0.0;
    }
    // Mirror the second half so the circulant is (anti)symmetric bit-exactly.
    for d in 1..half {
        r[n - d] = if odd { -r[d] } else { r[d] };
    }

    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = r[(i + n - j) % n];
        }
    }
    let symmetry = if odd {
        Symmetry::Antisymmetric
    } else {
        Symmetry::Symmetric
    };
    LinOp::new(m, symmetry, grid.clone())
}

/// Diagonal multiplication operator from nodal samples.
pub fn mult_op(samples: &[f64], grid: &SpectralGrid) -> Result<LinOp> {
    if samples.len() != grid.n {
        return Err(Error::DimensionMismatch {
            expected: grid.n,
            got: samples.len(),
        });
    }
    let m = DMatrix::from_diagonal(&DVector::from_row_slice(samples));
    LinOp::new(m, Symmetry::Symmetric, grid.clone())
}
