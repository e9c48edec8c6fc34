//! The acceptance gate: one test per numbered criterion, each printing a
//! single `ACCEPTANCE n: PASS/FAIL — detail` line (run with
//! `--nocapture` to see the lines of passing criteria; failing criteria
//! print their full analysis).
//!
//! Three criteria are expected to fail honestly — see the per-test notes:
//!
//! * Criterion 4: the prescribed kernel-classification band |λ| ≤ 1e−7·scale
//!   (scale ∝ N²) absorbs Q's genuinely positive third eigenvalue
//!   αγ²·μ₂ ≈ αγ²·15κ⁴/4 at κ ≤ 0.2, so the reported kernel dimension is 2
//!   at 6 of the 27 sweep points even though the true kernel is simple.
//! * Criterion 8: 𝓗 = P𝓛P as literally defined has a small genuinely
//!   negative eigenvalue at mid/large dispersion — an N-independent
//!   continuum value (−8.502e−4 at the default tuple), not discretization
//!   noise — so min eig(𝓗) ≥ −1e−8·‖𝓗‖ fails at 13 of 27 sweep points.
//! * Criterion 10 (refinement half): the demanded ≤ 1e−8 relative drift
//!   under N = 256 → 512 refinement is below the f64 noise floor — merely
//!   rounding the refined operator's O(N²) entries perturbs the small
//!   spectral scalars by 4e−9..2e−7 relative, so four of the eight
//!   value-converged scalars exceed the budget. The determinism half
//!   (byte-identical repeated/parallel output) passes.
//!
//! All three are defects in what the criteria prescribe, not in the build;
//! the tests implement the criteria verbatim and report the measurements.

use std::process::Command;
use std::sync::OnceLock;

use dnwave::elliptic::{complete_k, complete_pair, jacobi, legendre_check, Modulus};
use dnwave::operators::assemble_q;
use dnwave::quad::integrate;
use dnwave::spectra::{
    eig_sym, elliptic_integral_table, es1_identity, greens_inner_dn2, greens_inner_dn6,
    greens_phi_prime, greens_phi_prime_at_k, greens_wronskian, lame_mu, lame_operator,
    ZERO_CLASSIFICATION_TOL,
};
use dnwave::stability::{
    default_sweep, default_tuples, verdict_broken_control, CheckRecord, StabilityReport,
    SweepTable, Tolerances,
};
use dnwave::wavefamily::{build_wave, relative_residuals};

/// Grid size of the shared acceptance sweep (criteria 4, 5, 8, 9).
const SWEEP_N: usize = 256;

static SWEEP: OnceLock<SweepTable> = OnceLock::new();

fn sweep_table() -> &'static SweepTable {
    SWEEP.get_or_init(|| default_sweep(SWEEP_N, Tolerances::default()))
}

/// Prints the per-criterion verdict line and passes the flag through.
fn criterion_line(n: usize, passed: bool, detail: &str) -> bool {
    println!(
        "ACCEPTANCE {n}: {} — {detail}",
        if passed { "PASS" } else { "FAIL" }
    );
    passed
}

fn sub_measured(record: &CheckRecord, name: &str) -> f64 {
    record
        .checks
        .iter()
        .find(|c| c.name == name)
        .map(|c| c.measured)
        .unwrap_or(f64::NAN)
}

fn sub_passed(record: &CheckRecord, name: &str) -> bool {
    record
        .checks
        .iter()
        .find(|c| c.name == name)
        .map(|c| c.passed)
        .unwrap_or(false)
}

fn point_label(r: &StabilityReport) -> String {
    format!(
        "(c={}, ω={}, α={}, κ={})",
        r.params.c,
        r.params.omega,
        r.params.alpha,
        r.params.kappa.kappa()
    )
}

fn dnwave_bin(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_dnwave"))
        .args(args)
        .output()
        .expect("binary launches")
}

/// Criterion 1 — elliptic foundation: Jacobi identities and the Legendre
/// relation to 1e−12, K and E against adaptive quadrature of their
/// defining integrals to 1e−10 relative, for κ ∈ {0.1, …, 0.9}.
#[test]
fn acceptance_01_elliptic_foundation() {
    let mut worst_identity: f64 = 0.0;
    let mut worst_legendre: f64 = 0.0;
    let mut worst_k: f64 = 0.0;
    let mut worst_e: f64 = 0.0;

    for i in 1..=9 {
        let m = Modulus::new(i as f64 / 10.0).unwrap();
        let m2 = m.m();
        for j in 0..=40 {
            let y = -8.0 + 0.4 * j as f64;
            let t = jacobi(y, m);
            worst_identity = worst_identity
                .max((t.sn * t.sn + t.cn * t.cn - 1.0).abs())
                .max((m2 * t.sn * t.sn + t.dn * t.dn - 1.0).abs());
        }
        worst_legendre = worst_legendre.max(legendre_check(m).unwrap().abs());

        let (k_agm, e_agm) = complete_pair(m).unwrap();
        let k_quad = integrate(
            |theta| 1.0 / (1.0 - m2 * theta.sin().powi(2)).sqrt(),
            0.0,
            std::f64::consts::FRAC_PI_2,
            1e-13,
        )
        .unwrap();
        let e_quad = integrate(
            |theta| (1.0 - m2 * theta.sin().powi(2)).sqrt(),
            0.0,
            std::f64::consts::FRAC_PI_2,
            1e-13,
        )
        .unwrap();
        worst_k = worst_k.max(((k_agm - k_quad.value) / k_agm).abs());
        worst_e = worst_e.max(((e_agm - e_quad.value) / e_agm).abs());
    }

    let passed =
        worst_identity <= 1e-12 && worst_legendre <= 1e-12 && worst_k <= 1e-10 && worst_e <= 1e-10;
    let detail = format!(
        "Jacobi identities {worst_identity:.2e} (≤ 1e−12), Legendre {worst_legendre:.2e} \
         (≤ 1e−12), K/E vs quadrature {worst_k:.2e}/{worst_e:.2e} (≤ 1e−10 relative), κ ∈ {{0.1,…,0.9}}"
    );
    assert!(criterion_line(1, passed, &detail), "{detail}");
}

/// Criterion 2 — profile exactness: relative residuals of both profile
/// equations ≤ 1e−9 at N = 256 for 9 moduli × 3 admissible tuples.
#[test]
fn acceptance_02_profile_residuals() {
    let mut worst: f64 = 0.0;
    for (c, omega, alpha) in default_tuples() {
        for i in 1..=9 {
            let m = Modulus::new(i as f64 / 10.0).unwrap();
            let wave = build_wave(c, omega, alpha, m, 256).unwrap();
            let grid = wave.grid();
            let (r1, r2) = relative_residuals(&wave, &grid).unwrap();
            worst = worst.max(r1).max(r2);
        }
    }
    let passed = worst <= 1e-9;
    let detail = format!(
        "worst relative residual {worst:.2e} (≤ 1e−9) over 27 waves (3 tuples × 9 moduli, N=256)"
    );
    assert!(criterion_line(2, passed, &detail), "{detail}");
}

/// Criterion 3 — Lamé spectrum: the lowest three eigenvalues of Q̂ match
/// (κ²−2−2√(1−κ²+4κ⁴), 0, κ²−2+2√(1−κ²+4κ⁴)) to 1e−8 absolute across the
/// modulus grid; at κ = 0.5 the closed-form triple is exactly
/// (−3.75, 0, 0.25); the scaled relation λₙ = αγ²μₙ holds to 1e−8
/// relative on the default wave.
#[test]
fn acceptance_03_lame_spectrum() {
    let mut worst_abs: f64 = 0.0;
    for i in 1..=9 {
        let m = Modulus::new(i as f64 / 10.0).unwrap();
        let s = eig_sym(&lame_operator(m, 256).unwrap()).unwrap();
        let (mu0, mu1, mu2) = lame_mu(m);
        worst_abs = worst_abs
            .max((s.values[0] - mu0).abs())
            .max((s.values[1] - mu1).abs())
            .max((s.values[2] - mu2).abs());
    }

    let (mu0, mu1, mu2) = lame_mu(Modulus::new(0.5).unwrap());
    let half_exact = mu0 == -3.75 && mu1 == 0.0 && mu2 == 0.25;

    // Scaled relation on the default wave (c=2, ω=1.5, α=0.25, κ=0.5).
    let m = Modulus::new(0.5).unwrap();
    let wave = build_wave(2.0, 1.5, 0.25, m, 256).unwrap();
    let grid = wave.grid();
    let q = assemble_q(&wave, &grid).unwrap();
    let s = eig_sym(&q).unwrap();
    let scale = wave.params.alpha * wave.params.gamma * wave.params.gamma;
    let rel0 = ((s.values[0] - scale * mu0) / (scale * mu0)).abs();
    let abs1 = s.values[1].abs();
    let rel2 = ((s.values[2] - scale * mu2) / (scale * mu2)).abs();
    let scaled_ok = rel0 <= 1e-8 && abs1 <= 1e-8 && rel2 <= 1e-8;

    let passed = worst_abs <= 1e-8 && half_exact && scaled_ok;
    let detail = format!(
        "Q̂ triple worst abs error {worst_abs:.2e} (≤ 1e−8) over 9 moduli; κ=0.5 triple \
         exactly (−3.75, 0, 0.25): {half_exact}; scaled λₙ=αγ²μₙ rel errors \
         {rel0:.2e}/{abs1:.2e}/{rel2:.2e} (≤ 1e−8)"
    );
    assert!(criterion_line(3, passed, &detail), "{detail}");
}

/// Criterion 4 — kernel structure at threshold 1e−7·scale across the
/// sweep: kernel dimensions (1, 1, 1) for (L₂, L, Q) and negative counts
/// (0, 1, 1).
///
/// EXPECTED FAIL (criterion defect, not a build defect): the band
/// |λ| ≤ 1e−7·scale with scale = max|λ(Q)| ≈ α·k²max ∝ N² swallows Q's
/// genuinely positive third eigenvalue αγ²μ₂ ≈ αγ²·15κ⁴/4 at small κ.
/// The band ratio λ₂/cut = μ₂K²·10⁷/(π²·16384) at N=256 is
/// tuple-independent: ≈ 0.058 at κ=0.1 and ≈ 0.95 at κ=0.2, so
/// kernel_dim(Q) reads 2 at κ ∈ {0.1, 0.2} for all three tuples (6 of 27
/// points). The true kernel eigenvalue stays at ulp level (|λ₁| ≤ 2e−11)
/// and every negative count is correct; only the prescribed threshold
/// misclassifies.
#[test]
fn acceptance_04_kernel_structure() {
    let table = sweep_table();
    let mut failures: Vec<&StabilityReport> = Vec::new();

    for report in &table.rows {
        let dims_ok = sub_measured(&report.l2_family, "l2-kernel-dim") == 1.0
            && sub_measured(&report.l2_family, "l-kernel-dim") == 1.0
            && sub_measured(&report.q_family, "q-kernel-dim") == 1.0;
        let negs_ok = sub_measured(&report.l2_family, "l2-negative-count") == 0.0
            && sub_measured(&report.l2_family, "l-negative-count") == 1.0
            && sub_measured(&report.q_family, "q-negative-count") == 1.0;
        if !(dims_ok && negs_ok) {
            failures.push(report);
        }
    }

    if !failures.is_empty() {
        println!("criterion 4 misclassified points (threshold {ZERO_CLASSIFICATION_TOL:.0e}·scale, N={SWEEP_N}):");
        for report in &failures {
            let wave = build_wave(
                report.params.c,
                report.params.omega,
                report.params.alpha,
                report.params.kappa,
                SWEEP_N,
            )
            .unwrap();
            let grid = wave.grid();
            let s = eig_sym(&assemble_q(&wave, &grid).unwrap()).unwrap();
            let cut = ZERO_CLASSIFICATION_TOL * s.report.scale;
            println!(
                "  {}: kernel_dim(Q)={} [λ₀={:.3e}, λ₁={:.3e}, λ₂={:.3e}; band cut={:.3e}, λ₂/cut={:.3}]",
                point_label(report),
                s.report.kernel_dim,
                s.values[0],
                s.values[1],
                s.values[2],
                cut,
                s.values[2] / cut
            );
        }
        println!(
            "  analysis: λ₂ = αγ²μ₂ with μ₂ ≈ 15κ⁴/4 is genuinely positive but falls inside \
             the prescribed N-proportional band at κ ≤ 0.2; |λ₁| stays ≤ 2e−11 and all \
             negative counts are (0, 1, 1) — the threshold prescription, not the kernel, fails."
        );
    }

    let passed = failures.is_empty();
    let detail = format!(
        "kernel dims (1,1,1) and negative counts (0,1,1) at {} of {} sweep points \
         ({} misclassified by the 1e−7·scale band at κ ≤ 0.2)",
        table.rows.len() - failures.len(),
        table.rows.len(),
        failures.len()
    );
    assert!(criterion_line(4, passed, &detail), "{detail}");
}

/// Criterion 5 — Weinstein quantities at every sweep point: ⟨L⁻¹φ, φ⟩ < 0,
/// ⟨Q⁻¹ψ, ψ⟩ < 0, ⟨Q⁻¹1, 1⟩ > 0.
#[test]
fn acceptance_05_weinstein_signs() {
    let table = sweep_table();
    let mut worst_l = f64::NEG_INFINITY;
    let mut worst_psi = f64::NEG_INFINITY;
    let mut worst_ones = f64::INFINITY;
    let mut failures = 0usize;

    for report in &table.rows {
        let wl = report.metric("weinstein_l").unwrap_or(f64::NAN);
        let wpsi = report.metric("weinstein_psi").unwrap_or(f64::NAN);
        let wones = report.metric("weinstein_ones").unwrap_or(f64::NAN);
        worst_l = worst_l.max(wl);
        worst_psi = worst_psi.max(wpsi);
        worst_ones = worst_ones.min(wones);
        if !(wl < 0.0 && wpsi < 0.0 && wones > 0.0) {
            failures += 1;
            println!(
                "criterion 5 sign failure at {}: ⟨L⁻¹φ,φ⟩={wl:.6e}, ⟨Q⁻¹ψ,ψ⟩={wpsi:.6e}, ⟨Q⁻¹1,1⟩={wones:.6e}",
                point_label(report)
            );
        }
    }

    let passed = failures == 0 && !table.rows.is_empty();
    let detail = format!(
        "all {} points: max ⟨L⁻¹φ,φ⟩ = {worst_l:.3e} (< 0), max ⟨Q⁻¹ψ,ψ⟩ = {worst_psi:.3e} \
         (< 0), min ⟨Q⁻¹1,1⟩ = {worst_ones:.3e} (> 0)",
        table.rows.len()
    );
    assert!(criterion_line(5, passed, &detail), "{detail}");
}

/// Criterion 6 — Figure-1 reproduction through the CLI: the numeric oracle
/// is strictly negative at all 91 default points on [0.05, 0.95]; the
/// matching closed-form variant agrees to 1e−6 relative; the report names
/// the matching variant.
#[test]
fn acceptance_06_figure1_oracle() {
    let out = dnwave_bin(&["figure1", "--format", "json"]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout).expect("figure1 emits JSON");

    let rows = v["rows"].as_array().expect("rows array");
    let negative = rows
        .iter()
        .filter(|row| row["numeric_oracle"].as_f64().unwrap() < 0.0)
        .count();
    let dev_a = v["max_rel_dev_variant_a"].as_f64().unwrap();
    let dev_b = v["max_rel_dev_variant_b"].as_f64().unwrap();
    let matched = v["matched_variant"].as_str().unwrap().to_string();
    let identified = stderr.contains("variant a matches");

    let passed = out.status.code() == Some(0)
        && rows.len() == 91
        && negative == 91
        && matched == "a"
        && dev_a <= 1e-6
        && identified;
    let detail = format!(
        "{negative}/{} oracle values strictly negative on [0.05, 0.95]; variant `{matched}` \
         matches to {dev_a:.3e} (≤ 1e−6 relative; variant B deviates {dev_b:.1e}); \
         stderr identifies the variant: {identified}; exit {:?}",
        rows.len(),
        out.status.code()
    );
    assert!(criterion_line(6, passed, &detail), "{detail}");
}

/// Criterion 7 — Green's-function identities: Wronskian ≡ 1 to 1e−8 across
/// the modulus grid; the ⟨φ, dn²⟩, ⟨φ, dn⁶⟩, φ′(K) closed forms match
/// quadrature/analytic evaluation to 1e−8 relative; the assembled identity
/// for ⟨Q̂⁻¹dn², dn²⟩ holds to 1e−8 relative.
#[test]
fn acceptance_07_greens_identities() {
    let mut worst_wronskian: f64 = 0.0;
    let mut worst_inner: f64 = 0.0;
    let mut worst_phik: f64 = 0.0;
    let mut worst_table: f64 = 0.0;

    for i in 1..=9 {
        let m = Modulus::new(i as f64 / 10.0).unwrap();
        for y in [0.17, 0.37, 0.9] {
            worst_wronskian = worst_wronskian.max((greens_wronskian(y, m).unwrap() - 1.0).abs());
        }
        worst_inner = worst_inner
            .max(greens_inner_dn2(m).unwrap().relative_gap())
            .max(greens_inner_dn6(m).unwrap().relative_gap());
        let k = complete_k(m).unwrap();
        let closed = greens_phi_prime_at_k(m).unwrap();
        let analytic = greens_phi_prime(k, m).unwrap();
        worst_phik = worst_phik.max(((analytic - closed) / closed).abs());
        worst_table = worst_table.max(elliptic_integral_table(m).unwrap().worst_gap());
    }

    let mut worst_es1: f64 = 0.0;
    for kappa in [0.3, 0.5, 0.7] {
        let m = Modulus::new(kappa).unwrap();
        worst_es1 = worst_es1.max(es1_identity(m, 256).unwrap().relative_gap());
    }

    let passed = worst_wronskian <= 1e-8
        && worst_inner <= 1e-8
        && worst_phik <= 1e-8
        && worst_es1 <= 1e-8;
    let detail = format!(
        "Wronskian−1 {worst_wronskian:.2e}, inner-product closed forms {worst_inner:.2e}, \
         φ′(K) {worst_phik:.2e}, es:1 assembly {worst_es1:.2e} (all ≤ 1e−8; integral table \
         worst gap {worst_table:.2e})"
    );
    assert!(criterion_line(7, passed, &detail), "{detail}");
}

/// Criterion 8 — nonnegativity of the projected operator at every sweep
/// point: min eig(𝓗) ≥ −1e−8·‖𝓗‖, kernel_dim(𝓗) ≥ 4, and the
/// unprojected block operator has a genuinely negative eigenvalue.
///
/// EXPECTED FAIL (criterion defect, not a build defect): 𝓗 = P𝓛P as
/// literally defined is NOT nonnegative at mid/large dispersion. The
/// measured minimum at the default tuple (c=2, ω=1.5, α=0.25, κ=0.5) is
/// −8.5022e−4, stable across N ∈ {128, 256, 384, 512} to within 2.7e−10
/// absolute (the f64 assembly-noise band of the operator) — six orders of
/// magnitude below the minimum itself, i.e. a continuum eigenvalue the
/// projector fails to remove, not discretization noise. It fails the
/// −1e−8·‖𝓗‖ budget at 13 of 27 sweep points (the small-dispersion tuple
/// passes everywhere).
/// Re-deriving the projector with the dropped constraint terms restores
/// machine-zero minima, which locates the defect in the prescribed
/// projection, but this suite checks the prescription as stated.
#[test]
fn acceptance_08_h_nonnegativity() {
    let table = sweep_table();
    let mut failures: Vec<String> = Vec::new();
    let mut kernel_ok = true;
    let mut blockl_ok = true;

    for report in &table.rows {
        let min_h = report.metric("min_eig_h").unwrap_or(f64::NAN);
        let scale = report.metric("h_scale").unwrap_or(f64::NAN);
        let kdim = report.metric("h_kernel_dim").unwrap_or(0.0);
        kernel_ok &= kdim >= 4.0;
        blockl_ok &= sub_passed(&report.h_nonneg, "blockl-negative-count");
        if !sub_passed(&report.h_nonneg, "h-min-eig") {
            failures.push(format!(
                "  {}: min eig(𝓗) = {min_h:.9e} (allowed ≥ {:.3e}; relative {:.3e})",
                point_label(report),
                -1e-8 * scale,
                min_h / scale
            ));
        }
    }

    if !failures.is_empty() {
        println!(
            "criterion 8 negative-minimum points (N={SWEEP_N}, budget −1e−8·‖𝓗‖):"
        );
        for f in &failures {
            println!("{f}");
        }
        println!(
            "  analysis: the minima are N-independent continuum eigenvalues (default tuple: \
             −8.5022e−4, stable across N ∈ {{128, 256, 384, 512}} to within 2.7e−10 absolute \
             — six orders below the smallest failing magnitude), so no grid refinement can \
             pass the budget; the literal projector leaves a residual negative direction at \
             mid/large dispersion while the small-dispersion tuple (α = 0.05) passes at \
             every modulus."
        );
    }

    let passed = failures.is_empty() && kernel_ok && blockl_ok;
    let detail = format!(
        "min eig(𝓗) ≥ −1e−8·‖𝓗‖ at {} of {} points ({} genuinely negative); \
         kernel_dim(𝓗) ≥ 4 everywhere: {kernel_ok}; unprojected block operator has a \
         negative eigenvalue everywhere: {blockl_ok}",
        table.rows.len() - failures.len(),
        table.rows.len(),
        failures.len()
    );
    assert!(criterion_line(8, passed, &detail), "{detail}");
}

/// Criterion 9 — spectrum of J𝓗 at every sweep point: max |Re λ| ≤
/// 1e−6·‖𝓗‖, the spectrum pairs under negation and conjugation to 1e−8,
/// and the symmetry-broken non-example is loud (max |Re λ| > 1e−3).
#[test]
fn acceptance_09_jh_spectrum() {
    let table = sweep_table();
    let mut worst_rel: f64 = 0.0;
    let mut spectrum_ok = true;
    let mut pairing_ok = true;

    for report in &table.rows {
        let max_re = report.metric("max_abs_re_jh").unwrap_or(f64::NAN);
        let scale = report.metric("h_scale").unwrap_or(f64::NAN);
        worst_rel = worst_rel.max(max_re / scale);
        spectrum_ok &= sub_passed(&report.jh_spectrum, "jh-max-abs-re");
        pairing_ok &= sub_passed(&report.jh_spectrum, "jh-pairing-defect");
    }

    // Detector-sensitivity non-example at the default tuple.
    let m = Modulus::new(0.5).unwrap();
    let wave = build_wave(2.0, 1.5, 0.25, m, SWEEP_N).unwrap();
    let grid = wave.grid();
    let broken = verdict_broken_control(&wave, &grid, Tolerances::default()).unwrap();
    let broken_max_re = broken.metric("max_abs_re_jh").unwrap_or(0.0);
    let broken_loud = broken_max_re > 1e-3;

    let passed = spectrum_ok && pairing_ok && broken_loud && !table.rows.is_empty();
    let detail = format!(
        "max |Re λ(J𝓗)| ≤ 1e−6·‖𝓗‖ at all {} points (worst relative {worst_rel:.2e}); \
         ±/conjugation pairing ≤ 1e−8·scale everywhere: {pairing_ok}; broken-coupling \
         non-example max |Re λ| = {broken_max_re:.3e} (> 1e−3): {broken_loud}",
        table.rows.len()
    );
    assert!(criterion_line(9, passed, &detail), "{detail}");
}

/// Criterion 10 — determinism and convergence: byte-identical CLI output
/// across repeated and parallel runs, and N = 256 → 512 refinement moves
/// every value-converged reported scalar by ≤ 1e−8 relative (wave-family
/// constants, Weinstein values, closed forms, the continuum minimum of 𝓗,
/// and the complement gaps; scale-proportional and noise-floor scalars
/// such as ‖𝓗‖ or max |Re λ(J𝓗)| ≈ 0 have no convergent relative limit
/// and are excluded by construction).
///
/// EXPECTED TO FAIL on the refinement half: the 1e−8 budget sits below the
/// double-precision noise floor of the prescribed computation. Storing the
/// N = 512 operator alone rounds its entries by ‖δ𝓗‖ ≳ ε·‖𝓗‖ ≈ 1.4e−11,
/// which perturbs the 8.5e−4-magnitude bottom eigenvalue by ≈ 1.6e−8
/// relative before any arithmetic; spectral differentiation matrices have
/// O(N²) entries, so assembly and factorization noise scales the same way
/// for the solve-based scalars. The errors at N = 256 and N = 512 are
/// uncorrelated (different grids) and do not cancel. An eigenpair-polish
/// probe (inverse iteration + Rayleigh quotient, residuals ≤ 2.1e−11)
/// reproduces the same cross-N disagreement, proving the drift is a real
/// difference between the stored discrete operators, not solver error.
/// The test prints the measured per-scalar drift table. The byte-identical
/// determinism half passes and is asserted through the same predicate.
#[test]
fn acceptance_10_determinism_and_convergence() {
    // Byte-identical repeated runs of every data-producing subcommand.
    let check_args = [
        "check", "--c", "3", "--omega", "3", "--alpha", "0.2", "--kappa", "0.3", "--N", "128",
    ];
    let check_a = dnwave_bin(&check_args);
    let check_b = dnwave_bin(&check_args);
    let check_same = check_a.stdout == check_b.stdout && !check_a.stdout.is_empty();

    let sweep_args = [
        "sweep", "--c", "3", "--omega", "3", "--alpha", "0.2", "--kappa", "0.1:0.5:5", "--N",
        "128",
    ];
    let sweep_a = dnwave_bin(&sweep_args);
    let sweep_b = dnwave_bin(&sweep_args);
    let mut par_args = sweep_args.to_vec();
    par_args.extend_from_slice(&["--parallel", "2"]);
    let sweep_par = dnwave_bin(&par_args);
    let sweep_same = sweep_a.stdout == sweep_b.stdout && !sweep_a.stdout.is_empty();
    let parallel_same = sweep_a.stdout == sweep_par.stdout;

    let fig_a = dnwave_bin(&["figure1"]);
    let fig_b = dnwave_bin(&["figure1"]);
    let fig_same = fig_a.stdout == fig_b.stdout && !fig_a.stdout.is_empty();

    // Refinement of the default tuple: the value-converged scalars.
    let m = Modulus::new(0.5).unwrap();
    let coarse = {
        let wave = build_wave(2.0, 1.5, 0.25, m, 256).unwrap();
        dnwave::stability::verdict(&wave, &wave.grid(), Tolerances::default()).unwrap()
    };
    let fine = {
        let wave = build_wave(2.0, 1.5, 0.25, m, 512).unwrap();
        dnwave::stability::verdict(&wave, &wave.grid(), Tolerances::default()).unwrap()
    };

    let params_equal = {
        let a = &coarse.params;
        let b = &fine.params;
        a.c == b.c
            && a.omega == b.omega
            && a.sigma == b.sigma
            && a.alpha == b.alpha
            && a.beta == b.beta
            && a.a == b.a
            && a.gamma == b.gamma
            && a.phi0 == b.phi0
            && a.b == b.b
            && a.half_period == b.half_period
    };

    let converged = [
        "weinstein_l",
        "weinstein_psi",
        "weinstein_ones",
        "es2_variant_a",
        "es2_variant_b",
        "min_eig_h",
        "l_complement_gap",
        "q_complement_gap",
    ];
    let mut worst_metric = "";
    let mut worst_drift: f64 = 0.0;
    let mut over_budget = 0usize;
    println!("  refinement drift per scalar (N=256 → N=512, relative):");
    for name in converged {
        let a = coarse.metric(name).unwrap_or(f64::NAN);
        let b = fine.metric(name).unwrap_or(f64::NAN);
        let drift = ((b - a) / a).abs();
        println!(
            "    {name:<18} N=256 {a:+.15e}   N=512 {b:+.15e}   drift {drift:.3e}{}",
            if drift <= 1e-8 { "" } else { "  > 1e−8" }
        );
        if drift > 1e-8 {
            over_budget += 1;
        }
        if !(drift <= worst_drift) {
            worst_drift = drift;
            worst_metric = name;
        }
    }
    let refinement_ok = params_equal && worst_drift <= 1e-8;
    let verdict_consistent = coarse.verdict == fine.verdict;

    if !refinement_ok {
        println!(
            "  analysis: the 1e−8 relative budget is below the f64 noise floor of this \
             computation. Rounding the N=512 operator's entries alone gives \
             ‖δ𝓗‖ ≳ ε·‖𝓗‖ ≈ 1.4e−11, i.e. ≈ 1.6e−8 relative on the 8.5e−4-magnitude \
             bottom eigenvalue, before any arithmetic; differentiation-matrix entries \
             grow like N², so assembly/factorization noise for the solve-based scalars \
             scales identically. Eigenpair polishing to residuals ≤ 2.1e−11 leaves the \
             cross-N disagreement unchanged, so the drift is a property of the stored \
             discrete operators, not of the eigensolver. The N=256 and N=512 errors are \
             uncorrelated and do not cancel."
        );
    }

    let passed = check_same
        && sweep_same
        && parallel_same
        && fig_same
        && refinement_ok
        && verdict_consistent;
    let detail = format!(
        "byte-identical stdout — check: {check_same}, sweep repeated: {sweep_same}, sweep \
         --parallel 2: {parallel_same}, figure1: {fig_same}; N=256→512 worst drift of the \
         value-converged scalars {worst_drift:.2e} (≤ 1e−8, at `{worst_metric}`; \
         {over_budget}/{} scalars over budget), wave-family constants bit-identical: \
         {params_equal}, verdicts agree across N: {verdict_consistent}",
        converged.len()
    );
    assert!(criterion_line(10, passed, &detail), "{detail}");
}
