//! Structural identities of the assembled operators across the modulus
//! range: exact kernel directions, the block layout, projection algebra,
//! and the spectral pairing symmetry of J𝓗.

use dnwave::elliptic::Modulus;
use dnwave::operators::{assemble_jh_symmetry_broken, column, OperatorSet};
use dnwave::spectra::{eig_general, Eigenvalues};
use dnwave::stability::default_kappas;
use dnwave::wavefamily::build_wave;
use nalgebra::DVector;

/// Relative bound for "this vector is in the kernel" at N = 128.
const KERNEL_RESIDUAL_REL: f64 = 1e-9;

fn stack3(a: &[f64], b: &[f64], c: &[f64]) -> DVector<f64> {
    let n = a.len();
    let mut v = DVector::zeros(3 * n);
    for i in 0..n {
        v[i] = a[i];
        v[n + i] = b[i];
        v[2 * n + i] = c[i];
    }
    v
}

#[test]
fn analytic_kernels_across_moduli() {
    for kappa in default_kappas() {
        let m = Modulus::new(kappa).unwrap();
        let wave = build_wave(2.0, 1.5, 0.25, m, 128).unwrap();
        let grid = wave.grid();
        let ops = OperatorSet::assemble(&wave, &grid).unwrap();
        let zeros = vec![0.0; 128];

        // L₂ φ = 0: the defining equation of the profile.
        let r = ops.l2.apply(&column(&wave.phi)).amax();
        let scale = ops.l2.matrix.norm() * column(&wave.phi).amax();
        assert!(r <= KERNEL_RESIDUAL_REL * scale, "κ={kappa}: ‖L₂φ‖ = {r:e}");

        // L φ′ = 0 and Q ψ′ = 0: translation invariance, component-wise.
        let r = ops.lplus.apply(&column(&wave.dphi)).amax();
        let scale = ops.lplus.matrix.norm() * column(&wave.dphi).amax();
        assert!(r <= KERNEL_RESIDUAL_REL * scale, "κ={kappa}: ‖Lφ′‖ = {r:e}");

        let r = ops.q.apply(&column(&wave.dpsi)).amax();
        let scale = ops.q.matrix.norm() * column(&wave.dpsi).amax();
        assert!(r <= KERNEL_RESIDUAL_REL * scale, "κ={kappa}: ‖Qψ′‖ = {r:e}");

        // The block operator annihilates the full translation mode
        // (ψ′, φ′, 0), coupling terms included.
        let v = stack3(&wave.dpsi, &wave.dphi, &zeros);
        let r = ops.block_l.apply(&v).amax();
        let scale = ops.block_l.matrix.norm() * v.amax();
        assert!(r <= KERNEL_RESIDUAL_REL * scale, "κ={kappa}: ‖𝓛(ψ′,φ′,0)‖ = {r:e}");

        // 𝓗 kills the three projected directions and keeps the
        // translation mode in its kernel.
        let ones = vec![1.0; 128];
        let h_scale = ops.h.matrix.norm();
        for (label, v) in [
            ("(1,0,0)", stack3(&ones, &zeros, &zeros)),
            ("(0,φ,0)", stack3(&zeros, &wave.phi, &zeros)),
            ("(0,0,φ)", stack3(&zeros, &zeros, &wave.phi)),
            ("(ψ′,φ′,0)", stack3(&wave.dpsi, &wave.dphi, &zeros)),
        ] {
            let r = ops.h.apply(&v).amax();
            let bound = KERNEL_RESIDUAL_REL * h_scale * v.amax().max(1.0);
            assert!(r <= bound, "κ={kappa}: ‖𝓗{label}‖ = {r:e} > {bound:e}");
        }
    }
}

#[test]
fn jh_spectrum_pairs_under_negation_and_conjugation() {
    let m = Modulus::new(0.5).unwrap();
    let wave = build_wave(2.0, 1.5, 0.25, m, 128).unwrap();
    let grid = wave.grid();
    let ops = OperatorSet::assemble(&wave, &grid).unwrap();
    let report = eig_general(&ops.jh).unwrap();

    let values: Vec<[f64; 2]> = match &report.eigenvalues {
        Eigenvalues::Complex(v) => v.clone(),
        Eigenvalues::Real(v) => v.iter().map(|&r| [r, 0.0]).collect(),
    };
    let nearest = |target: [f64; 2]| -> f64 {
        values
            .iter()
            .map(|v| (v[0] - target[0]).hypot(v[1] - target[1]))
            .fold(f64::MAX, f64::min)
    };
    let mut worst = 0.0_f64;
    for v in &values {
        worst = worst.max(nearest([-v[0], -v[1]]));
        worst = worst.max(nearest([v[0], -v[1]]));
    }
    assert!(
        worst <= 1e-8 * report.scale,
        "pairing defect {worst:e} vs scale {:e}",
        report.scale
    );
}

/// Breaking the off-diagonal coupling by hand must move eigenvalues far
/// off the imaginary axis — this is the detector-sensitivity control.
#[test]
fn broken_coupling_is_detected() {
    let m = Modulus::new(0.5).unwrap();
    let wave = build_wave(2.0, 1.5, 0.25, m, 128).unwrap();
    let grid = wave.grid();

    let honest = eig_general(&OperatorSet::assemble(&wave, &grid).unwrap().jh)
        .unwrap()
        .max_abs_real_part();
    let broken = eig_general(&assemble_jh_symmetry_broken(&wave, &grid).unwrap())
        .unwrap()
        .max_abs_real_part();

    assert!(broken > 1e-3, "broken coupling only reached {broken:e}");
    assert!(
        broken > 1e3 * honest.max(1e-12),
        "control ({broken:e}) must dwarf the honest spectrum ({honest:e})"
    );
}
