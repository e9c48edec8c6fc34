//! Jacobi elliptic functions and complete elliptic integrals.
//!
//! Everything downstream — the dnoidal profile, the operator potentials, and
//! the closed-form spectral quantities — reduces to evaluations of `sn`,
//! `cn`, `dn` and of the complete integrals `K`, `E`. All of them are
//! computed with the arithmetic–geometric mean:
//!
//! * [`complete_k`] / [`complete_e`]: AGM with the classical `c`-sequence
//!   correction sum, quadratically convergent.
//! * [`jacobi`]: descending Landen transformation (AGM backward recurrence).
//!
//! # Modulus convention — read this first
//!
//! Every function here takes the **modulus** κ, wrapped in the [`Modulus`]
//! newtype. The *parameter* m = κ² is **not** used as an input anywhere in
//! this crate. Mixing the two is the single most common source of silent
//! errors in elliptic-function code: `K(κ=0.5)` ≈ 1.6857503548 while
//! `K(m=0.5)` ≈ 1.8540746773. The newtype exists so the compiler rules the
//! confusion out at call sites; use [`Modulus::m`] when a formula genuinely
//! needs κ².

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Elliptic modulus κ ∈ [0, 1].
///
/// This is the **modulus**, not the parameter m = κ². The closed interval is
/// accepted so the degenerate trigonometric (κ=0) and hyperbolic (κ=1)
/// limits stay reachable; wave construction separately restricts to the open
/// interval.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Modulus(f64);

impl Modulus {
    /// Validates κ ∈ [0, 1] (finite).
    pub fn new(kappa: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&kappa) || !kappa.is_finite() {
            return Err(Error::ModulusOutOfRange { kappa });
        }
        Ok(Modulus(kappa))
    }

    /// The modulus κ itself.
    pub fn kappa(self) -> f64 {
        self.0
    }

    /// The parameter m = κ².
    pub fn m(self) -> f64 {
        self.0 * self.0
    }

    /// Squared complementary modulus κ′² = 1 − κ², computed as
    /// (1−κ)(1+κ) to avoid cancellation near κ = 1.
    pub fn complement_sq(self) -> f64 {
        (1.0 - self.0) * (1.0 + self.0)
    }

    /// Complementary modulus κ′ = √(1 − κ²).
    pub fn complement(self) -> Modulus {
        Modulus(self.complement_sq().sqrt())
    }
}

/// Values of the three Jacobi functions at a common argument.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticTriple {
    pub sn: f64,
    pub cn: f64,
    pub dn: f64,
}

/// Relative AGM termination threshold: iterate until |aₙ − bₙ| ≤ AGM_TOL·aₙ.
const AGM_TOL: f64 = 1e-15;

/// Hard cap on AGM iterations (quadratic convergence reaches the double
/// floor in < 10 for any κ in [0,1); the cap only guards degenerate input).
const AGM_MAX_ITER: usize = 64;

/// Below this squared complementary modulus, `jacobi` switches to the
/// hyperbolic closed forms tanh/sech to avoid cancellation near κ = 1.
const HYPERBOLIC_CUTOFF: f64 = 1e-14;

/// One AGM pass computing both complete integrals.
///
/// With a₀=1, b₀=κ′, c₀=κ and the usual updates aₙ₊₁=(aₙ+bₙ)/2,
/// bₙ₊₁=√(aₙbₙ), cₙ₊₁=(aₙ−bₙ)/2:
/// K = π/(2·aₙ) and E = K·(1 − Σₙ 2ⁿ⁻¹cₙ²).
fn agm_pair(m: Modulus) -> (f64, f64) {
    let mut a = 1.0_f64;
    let mut b = m.complement_sq().sqrt();
    let mut c = m.kappa();
    // Σ 2^{n-1} c_n², starting with the n = 0 term c₀²/2.
    let mut sum = 0.5 * c * c;
    let mut pow2 = 1.0;
    for _ in 0..AGM_MAX_ITER {
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
        let an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = an;
        sum += pow2 * c * c;
        pow2 *= 2.0;
    }
    let k = std::f64::consts::FRAC_PI_2 / a;
    let e = k * (1.0 - sum);
    (k, e)
}

/// Complete elliptic integral of the first kind K(κ).
///
/// Monotone increasing in κ, K(0) = π/2, and K(κ) → ∞ logarithmically as
/// κ → 1; the divergent endpoint is rejected.
pub fn complete_k(m: Modulus) -> Result<f64> {
    if m.kappa() == 1.0 {
        return Err(Error::Divergent {
            what: "complete elliptic integral of the first kind",
        });
    }
    Ok(agm_pair(m).0)
}

/// Complete elliptic integral of the second kind E(κ).
///
/// E(0) = π/2 and E(1) = 1; finite on the whole closed interval.
pub fn complete_e(m: Modulus) -> f64 {
    if m.kappa() == 1.0 {
        return 1.0;
    }
    agm_pair(m).1
}

/// Both complete integrals (K(κ), E(κ)) from a single AGM pass.
pub fn complete_pair(m: Modulus) -> Result<(f64, f64)> {
    if m.kappa() == 1.0 {
        return Err(Error::Divergent {
            what: "complete elliptic integral of the first kind",
        });
    }
    Ok(agm_pair(m))
}

/// Jacobi elliptic functions (sn, cn, dn) at argument `y`.
///
/// Uses the descending Landen transformation: a forward AGM sweep stores the
/// scale pairs, the argument is mapped to the trigonometric limit, and a
/// backward recurrence lifts sin/cos back up to modulus κ. Degenerate moduli
/// short-circuit to the exact limits: κ = 0 gives (sin y, cos y, 1), and
/// κ′² < 1e−14 gives the hyperbolic forms (tanh y, sech y, sech y), which
/// avoids cancellation in the AGM chain near κ = 1.
pub fn jacobi(y: f64, m: Modulus) -> EllipticTriple {
    if m.kappa() == 0.0 {
        return EllipticTriple {
            sn: y.sin(),
            cn: y.cos(),
            dn: 1.0,
        };
    }
    let emc = m.complement_sq();
    if emc < HYPERBOLIC_CUTOFF {
        let sech = 1.0 / y.cosh();
        return EllipticTriple {
            sn: y.tanh(),
            cn: sech,
            dn: sech,
        };
    }
    sncndn_agm(y, emc)
}

/// Accuracy knob for the Landen recurrence: the result error is O(CA²),
/// so 1e−8 saturates double precision.
const LANDEN_TOL: f64 = 1e-8;
const LANDEN_STAGES: usize = 16;

/// Backward AGM recurrence for sn/cn/dn with κ′² = `emc` ∈ (0, 1).
fn sncndn_agm(y: f64, emc: f64) -> EllipticTriple {
    let mut em = [0.0_f64; LANDEN_STAGES];
    let mut en = [0.0_f64; LANDEN_STAGES];
    let mut a = 1.0_f64;
    let mut c = 0.5 * (1.0 + emc);
    let mut dn = 1.0_f64;
    let mut emc = emc;
    let mut levels = 0;

    // Forward sweep: AGM of (1, κ′), recording the scale pairs.
    for i in 0..LANDEN_STAGES {
        levels = i;
        em[i] = a;
        emc = emc.sqrt();
        en[i] = emc;
        c = 0.5 * (a + emc);
        if (a - emc).abs() <= LANDEN_TOL * a {
            break;
        }
        emc *= a;
        a = c;
    }

    // Trigonometric seed at the bottom of the chain.
    let u = y * c;
    let mut sn = u.sin();
    let mut cn = u.cos();

    // Backward sweep lifting the seed through the recorded stages. When
    // sn = 0 exactly the lift is the identity (cn = ±1, dn = 1 there).
    if sn != 0.0 {
        a = cn / sn;
        c *= a;
        for i in (0..=levels).rev() {
            let b = em[i];
            a *= c;
            c *= dn;
            dn = (en[i] + a) / (b + a);
            a = c / b;
        }
        let inv = 1.0 / (c * c + 1.0).sqrt();
        sn = if sn < 0.0 { -inv } else { inv };
        cn = c * sn;
    }

    EllipticTriple { sn, cn, dn }
}

/// Legendre-relation defect E(κ)K(κ′) + E(κ′)K(κ) − K(κ)K(κ′) − π/2.
///
/// The relation is an exact identity for 0 < κ < 1, so the returned value is
/// a direct cross-validation of `complete_k` and `complete_e`; anything
/// above a few ulps of π/2 indicates a bug.
pub fn legendre_check(m: Modulus) -> Result<f64> {
    let kappa = m.kappa();
    if kappa <= 0.0 || kappa >= 1.0 {
        return Err(Error::ModulusNotInterior { kappa });
    }
    let mc = m.complement();
    let (k, e) = complete_pair(m)?;
    let (kc, ec) = complete_pair(mc)?;
    Ok(e * kc + ec * k - k * kc - std::f64::consts::FRAC_PI_2)
}
