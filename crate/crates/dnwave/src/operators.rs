//! Assembly of every linearized operator attached to the wave: the scalar
//! operators L₁, L₂, their shifts Q and L, the 3×3 block linearization 𝓛,
//! the symplectic factor J, orthogonal projections, the projected
//! Hamiltonian 𝓗, and the spectral-problem matrix J𝓗.
//!
//! Conventions:
//!
//! * L₁ = −α∂ₓ² + (c−1) − 2βψ and L₂ = −∂ₓ² + σ − ψ act on one component;
//!   Q = L₁ − 1/(2A) and L = L₂ − 2Aφ² are their exact shifts.
//! * 𝓛 is the symmetric 3N×3N block matrix [[L₁, −φ, 0], [−φ, L₂, 0],
//!   [0, 0, L₂]] with −φ acting by multiplication.
//! * J = [[∂ₓ, 0, 0], [0, 0, I], [0, −I, 0]] is exactly antisymmetric
//!   because the first-order differentiation matrix is (Nyquist-zeroed,
//!   mirrored stencil).
//! * 𝓗 = diag(P₁⊥, Pφ⊥, Pφ⊥) · 𝓛 · diag(P₁⊥, Pφ⊥, Pφ⊥) removes the
//!   directions made degenerate by the conservation laws; J𝓗 is the matrix
//!   whose spectrum decides linear stability.
//!
//! Inner products throughout use the uniform quadrature weight 2T/N so that
//! discrete orthogonality matches the continuum L² pairing (for the rank-one
//! projections the uniform weight cancels algebraically, which the
//! implementation exploits).

use nalgebra::{DMatrix, DVector};

use crate::discretize::{diff_matrix, mult_op, LinOp, SpectralGrid, Symmetry};
use crate::error::{Error, Result};
use crate::wavefamily::DnoidalWave;

/// All assembled operators for one wave/grid pair.
///
/// Assembling them together shares the differentiation matrices and the
/// block product work; the fields satisfy (and are tested to satisfy)
/// Q = L₁ − I/(2A), L = L₂ − 2A·mult(φ²), 𝓗 = P·𝓛·P, J𝓗 = J·𝓗.
#[derive(Debug, Clone)]
pub struct OperatorSet {
    pub l1: LinOp,
    pub l2: LinOp,
    pub q: LinOp,
    pub lplus: LinOp,
    pub block_l: LinOp,
    pub j: LinOp,
    pub h: LinOp,
    pub jh: LinOp,
}

fn check_wave_grid(wave: &DnoidalWave, grid: &SpectralGrid) -> Result<()> {
    if wave.n() != grid.n {
        return Err(Error::GridMismatch {
            what: "wave and grid have different N",
        });
    }
    if wave.params.half_period != grid.half_period {
        return Err(Error::GridMismatch {
            what: "wave and grid have different half-periods",
        });
    }
    Ok(())
}

/// L₁ = −α·D₂ + (c−1)·I − 2β·mult(ψ); symmetric.
pub fn assemble_l1(wave: &DnoidalWave, grid: &SpectralGrid) -> Result<LinOp> {
    check_wave_grid(wave, grid)?;
    let d2 = diff_matrix(grid, 2)?;
    Ok(scalar_operator(
        &d2,
        -wave.params.alpha,
        wave.params.c - 1.0,
        &wave.psi,
        -2.0 * wave.params.beta,
        grid,
    ))
}

/// L₂ = −D₂ + σ·I − mult(ψ); symmetric and (for the dnoidal wave)
/// nonnegative with kernel spanned by φ.
pub fn assemble_l2(wave: &DnoidalWave, grid: &SpectralGrid) -> Result<LinOp> {
    check_wave_grid(wave, grid)?;
    let d2 = diff_matrix(grid, 2)?;
    Ok(scalar_operator(
        &d2,
        -1.0,
        wave.params.sigma,
        &wave.psi,
        -1.0,
        grid,
    ))
}

/// Builds `diff_coeff·D₂ + shift·I + pot_coeff·mult(pot)` — the common shape
/// of every scalar operator here. The inputs are already validated.
fn scalar_operator(
    d2: &LinOp,
    diff_coeff: f64,
    shift: f64,
    pot: &[f64],
    pot_coeff: f64,
    grid: &SpectralGrid,
) -> LinOp {
    let n = grid.n;
    let mut m = &d2.matrix * diff_coeff;
    for j in 0..n {
        m[(j, j)] += shift + pot_coeff * pot[j];
    }
    LinOp::new(m, Symmetry::Symmetric, grid.clone())
        .expect("scaling and diagonal shifts preserve exact symmetry")
}

/// Q = L₁ − I/(2A); the scalar operator whose inverse drives the
/// Weinstein-type quantities.
pub fn assemble_q(wave: &DnoidalWave, grid: &SpectralGrid) -> Result<LinOp> {
    let l1 = assemble_l1(wave, grid)?;
    let mut m = l1.matrix;
    let shift = 1.0 / (2.0 * wave.params.a);
    for j in 0..grid.n {
        m[(j, j)] -= shift;
    }
    LinOp::new(m, Symmetry::Symmetric, grid.clone())
}

/// L = L₂ − 2A·mult(φ²); kernel spanned by φ′.
pub fn assemble_lplus(wave: &DnoidalWave, grid: &SpectralGrid) -> Result<LinOp> {
    let l2 = assemble_l2(wave, grid)?;
    let mut m = l2.matrix;
    let two_a = 2.0 * wave.params.a;
    for j in 0..grid.n {
        m[(j, j)] -= two_a * wave.phi[j] * wave.phi[j];
    }
    LinOp::new(m, Symmetry::Symmetric, grid.clone())
}

/// The 3N×3N symmetric block linearization
/// 𝓛 = [[L₁, −φ, 0], [−φ, L₂, 0], [0, 0, L₂]].
pub fn assemble_block_l(wave: &DnoidalWave, grid: &SpectralGrid) -> Result<LinOp> {
    let l1 = assemble_l1(wave, grid)?;
    let l2 = assemble_l2(wave, grid)?;
    block_l_from_parts(&l1, &l2, wave, grid, BlockCoupling::Standard)
}

/// Off-diagonal coupling variants of the block assembly.
enum BlockCoupling {
    /// The operator as defined: −φ in both off-diagonal (1,2)/(2,1) blocks.
    Standard,
    /// Deliberately broken control for detector-sensitivity tests: the
    /// (1,2) block becomes +2φ while (2,1) stays −φ, so the block matrix is
    /// no longer symmetric and the composed spectral problem loses its
    /// Hamiltonian structure.
    BrokenCoupling,
}

fn block_l_from_parts(
    l1: &LinOp,
    l2: &LinOp,
    wave: &DnoidalWave,
    grid: &SpectralGrid,
    coupling: BlockCoupling,
) -> Result<LinOp> {
    let n = grid.n;
    let phi_mult = mult_op(&wave.phi, grid)?;
    let mut m = DMatrix::zeros(3 * n, 3 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&l1.matrix);
    m.view_mut((n, n), (n, n)).copy_from(&l2.matrix);
    m.view_mut((2 * n, 2 * n), (n, n)).copy_from(&l2.matrix);
    let (upper_coeff, tag) = match coupling {
        BlockCoupling::Standard => (-1.0, Symmetry::Symmetric),
        BlockCoupling::BrokenCoupling => (2.0, Symmetry::General),
    };
    m.view_mut((0, n), (n, n))
        .copy_from(&(&phi_mult.matrix * upper_coeff));
    m.view_mut((n, 0), (n, n))
        .copy_from(&(&phi_mult.matrix * -1.0));
    LinOp::new(m, tag, grid.clone())
}

/// The symplectic factor J = [[∂ₓ, 0, 0], [0, 0, I], [0, −I, 0]],
/// antisymmetric bit-exactly.
pub fn assemble_j(grid: &SpectralGrid) -> Result<LinOp> {
    let n = grid.n;
    let d1 = diff_matrix(grid, 1)?;
    let mut m = DMatrix::zeros(3 * n, 3 * n);
    m.view_mut((0, 0), (n, n)).copy_from(&d1.matrix);
    for i in 0..n {
        m[(n + i, 2 * n + i)] = 1.0;
        m[(2 * n + i, n + i)] = -1.0;
    }
    LinOp::new(m, Symmetry::Antisymmetric, grid.clone())
}

/// Orthogonal projection P onto the complement of span{v}:
/// Pf = f − (⟨f, v⟩/‖v‖²)·v with quadrature-weighted inner products.
/// For a rank-one projection on a uniform grid the weight cancels, so the
/// matrix is I − v·vᵀ/(vᵀv).
pub fn projector(v: &[f64], grid: &SpectralGrid) -> Result<LinOp> {
    if v.len() != grid.n {
        return Err(Error::DimensionMismatch {
            expected: grid.n,
            got: v.len(),
        });
    }
    let norm_sq: f64 = v.iter().map(|&x| x * x).sum();
    if norm_sq == 0.0 {
        return Err(Error::ZeroVector {
            what: "projection direction",
        });
    }
    let n = grid.n;
    let mut m = DMatrix::identity(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] -= v[i] * v[j] / norm_sq;
        }
    }
    LinOp::new(m, Symmetry::Symmetric, grid.clone())
}

/// Block-diagonal 3N×3N projection diag(P₁⊥, Pφ⊥, Pφ⊥): slot 1 loses the
/// constants, slots 2 and 3 lose the φ direction.
fn block_projection(wave: &DnoidalWave, grid: &SpectralGrid) -> Result<DMatrix<f64>> {
    let n = grid.n;
    let ones = vec![1.0; n];
    let p1 = projector(&ones, grid)?;
    let pphi = projector(&wave.phi, grid)?;
    let mut p = DMatrix::zeros(3 * n, 3 * n);
    p.view_mut((0, 0), (n, n)).copy_from(&p1.matrix);
    p.view_mut((n, n), (n, n)).copy_from(&pphi.matrix);
    p.view_mut((2 * n, 2 * n), (n, n)).copy_from(&pphi.matrix);
    Ok(p)
}

/// The projected Hamiltonian 𝓗 = P·𝓛·P with P = diag(P₁⊥, Pφ⊥, Pφ⊥).
pub fn assemble_h(wave: &DnoidalWave, grid: &SpectralGrid) -> Result<LinOp> {
    let block_l = assemble_block_l(wave, grid)?;
    h_from_parts(&block_l, wave, grid)
}

fn h_from_parts(block_l: &LinOp, wave: &DnoidalWave, grid: &SpectralGrid) -> Result<LinOp> {
    let p = block_projection(wave, grid)?;
    let m = &p * &(&block_l.matrix * &p);
    LinOp::new(m, Symmetry::Symmetric, grid.clone())
}

/// The stability matrix J𝓗 (general, not symmetric).
pub fn assemble_jh(wave: &DnoidalWave, grid: &SpectralGrid) -> Result<LinOp> {
    let j = assemble_j(grid)?;
    let h = assemble_h(wave, grid)?;
    jh_from_parts(&j, &h, grid)
}

fn jh_from_parts(j: &LinOp, h: &LinOp, grid: &SpectralGrid) -> Result<LinOp> {
    let m = &j.matrix * &h.matrix;
    LinOp::new(m, Symmetry::General, grid.clone())
}

/// Deliberately symmetry-broken variant of J𝓗 used as a detector control:
/// one off-diagonal coupling block of the block linearization is flipped
/// from −φ to +2φ before projecting and multiplying by J. The result is far
/// from Hamiltonian and must produce eigenvalues with large real part — if
/// the stability detector reports it as spectrally stable, the detector is
/// vacuous.
pub fn assemble_jh_symmetry_broken(wave: &DnoidalWave, grid: &SpectralGrid) -> Result<LinOp> {
    let l1 = assemble_l1(wave, grid)?;
    let l2 = assemble_l2(wave, grid)?;
    let broken = block_l_from_parts(&l1, &l2, wave, grid, BlockCoupling::BrokenCoupling)?;
    let p = block_projection(wave, grid)?;
    let h = &p * &(&broken.matrix * &p);
    let j = assemble_j(grid)?;
    LinOp::new(&j.matrix * &h, Symmetry::General, grid.clone())
}

impl OperatorSet {
    /// Assembles every operator for the wave on its grid, sharing the
    /// differentiation matrices and block products.
    pub fn assemble(wave: &DnoidalWave, grid: &SpectralGrid) -> Result<OperatorSet> {
        check_wave_grid(wave, grid)?;
        let l1 = assemble_l1(wave, grid)?;
        let l2 = assemble_l2(wave, grid)?;

        let q = {
            let mut m = l1.matrix.clone();
            let shift = 1.0 / (2.0 * wave.params.a);
            for j in 0..grid.n {
                m[(j, j)] -= shift;
            }
            LinOp::new(m, Symmetry::Symmetric, grid.clone())?
        };
        let lplus = {
            let mut m = l2.matrix.clone();
            let two_a = 2.0 * wave.params.a;
            for j in 0..grid.n {
                m[(j, j)] -= two_a * wave.phi[j] * wave.phi[j];
            }
            LinOp::new(m, Symmetry::Symmetric, grid.clone())?
        };

        let block_l = block_l_from_parts(&l1, &l2, wave, grid, BlockCoupling::Standard)?;
        let j = assemble_j(grid)?;
        let h = h_from_parts(&block_l, wave, grid)?;
        let jh = jh_from_parts(&j, &h, grid)?;

        Ok(OperatorSet {
            l1,
            l2,
            q,
            lplus,
            block_l,
            j,
            h,
            jh,
        })
    }
}

/// Quadrature-weighted inner product on the grid (weight 2T/N), re-exported
/// here for operator-adjacent call sites.
pub fn weighted_inner(grid: &SpectralGrid, u: &[f64], v: &[f64]) -> f64 {
    grid.inner(u, v)
}

/// Convenience: node vector as a nalgebra column.
pub fn column(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}
