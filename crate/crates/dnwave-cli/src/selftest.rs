//! `dnwave selftest`: a cross-check battery for the numerical kernels the
//! verification pipeline rests on. Each check compares two independent
//! routes to the same quantity — special-function identities, quadrature
//! against series/AGM evaluations, spectral differentiation against exact
//! derivatives, and the elliptic integral reduction table — and records a
//! residual with its pinned bound. With `--seed` the battery is extended by
//! reproducible randomized sample points.

use dnwave::discretize::{diff_matrix, make_grid};
use dnwave::elliptic::{complete_e, complete_k, jacobi, legendre_check, Modulus};
use dnwave::quad::integrate;
use dnwave::spectra::elliptic_integral_table;
use nalgebra::DVector;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::args::{OutputFormat, Resolved};
use crate::output::{emit, float17, to_csv, to_json};
use crate::{Failure, EXIT_FAIL, EXIT_PASS};

/// Identity residual floor for the Jacobi/Legendre algebra (double
/// precision leaves a few ulps; anything above this is a real defect).
const IDENTITY_BOUND: f64 = 1e-12;

/// Relative mismatch allowed between the AGM evaluations of K, E and
/// direct adaptive quadrature of their defining integrals.
const QUADRATURE_CROSS_BOUND: f64 = 1e-10;

/// Absolute accuracy demanded of the spectral differentiation matrices on
/// a fully resolved analytic test function at N = 64.
const DIFF_ACCURACY_BOUND: f64 = 1e-8;

/// Worst-gap bound for the elliptic integral reduction table.
const INTEGRAL_TABLE_BOUND: f64 = 1e-9;

/// How many randomized sample points each seeded extension draws.
const SEEDED_SAMPLES: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct SelfCheck {
    pub name: &'static str,
    pub residual: f64,
    pub bound: f64,
    pub passed: bool,
}

impl SelfCheck {
    fn new(name: &'static str, residual: f64, bound: f64) -> SelfCheck {
        SelfCheck {
            name,
            residual,
            bound,
            passed: residual.abs() <= bound,
        }
    }
}

#[derive(Serialize)]
struct SelfTestReport {
    checks: Vec<SelfCheck>,
    seed: Option<u64>,
    passed: bool,
}

fn fixed_moduli() -> Vec<Modulus> {
    [0.05, 0.25, 0.5, 0.75, 0.95]
        .iter()
        .map(|&kappa| Modulus::new(kappa).expect("fixed moduli are admissible"))
        .collect()
}

/// Worst Pythagorean defects max |sn²+cn²−1| and max |dn²+κ²sn²−1| over a
/// point set.
fn jacobi_defects(points: &[(f64, Modulus)]) -> (f64, f64) {
    let mut sn_cn: f64 = 0.0;
    let mut dn: f64 = 0.0;
    for &(y, m) in points {
        let t = jacobi(y, m);
        sn_cn = sn_cn.max((t.sn * t.sn + t.cn * t.cn - 1.0).abs());
        dn = dn.max((t.dn * t.dn + m.m() * t.sn * t.sn - 1.0).abs());
    }
    (sn_cn, dn)
}

/// Relative gaps between AGM values of K(κ), E(κ) and adaptive quadrature
/// of ∫₀^{π/2} (1−κ²sin²θ)^{∓1/2} dθ.
fn quadrature_cross_defects(moduli: &[Modulus]) -> Result<(f64, f64), String> {
    let mut k_gap: f64 = 0.0;
    let mut e_gap: f64 = 0.0;
    for &m in moduli {
        let m2 = m.m();
        let k_agm = complete_k(m).map_err(|e| e.to_string())?;
        let e_agm = complete_e(m);
        let k_quad = integrate(
            |theta| 1.0 / (1.0 - m2 * theta.sin().powi(2)).sqrt(),
            0.0,
            std::f64::consts::FRAC_PI_2,
            1e-13,
        )
        .map_err(|e| e.to_string())?;
        let e_quad = integrate(
            |theta| (1.0 - m2 * theta.sin().powi(2)).sqrt(),
            0.0,
            std::f64::consts::FRAC_PI_2,
            1e-13,
        )
        .map_err(|e| e.to_string())?;
        k_gap = k_gap.max(((k_agm - k_quad.value) / k_agm).abs());
        e_gap = e_gap.max(((e_agm - e_quad.value) / e_agm).abs());
    }
    Ok((k_gap, e_gap))
}

/// Max-norm error of D₁ and D₂ on exp(sin x), which is analytic and
/// 2π-periodic, hence resolved to spectral accuracy at N = 64.
fn diff_matrix_defects() -> Result<(f64, f64), String> {
    let grid = make_grid(std::f64::consts::PI, 64).map_err(|e| e.to_string())?;
    let d1 = diff_matrix(&grid, 1).map_err(|e| e.to_string())?;
    let d2 = diff_matrix(&grid, 2).map_err(|e| e.to_string())?;

    let f: Vec<f64> = grid.nodes.iter().map(|&x| x.sin().exp()).collect();
    let fp: Vec<f64> = grid
        .nodes
        .iter()
        .map(|&x| x.cos() * x.sin().exp())
        .collect();
    let fpp: Vec<f64> = grid
        .nodes
        .iter()
        .map(|&x| (x.cos() * x.cos() - x.sin()) * x.sin().exp())
        .collect();

    let v = DVector::from_vec(f);
    let d1_err = (d1.apply(&v) - DVector::from_vec(fp)).amax();
    let d2_err = (d2.apply(&v) - DVector::from_vec(fpp)).amax();
    Ok((d1_err, d2_err))
}

fn table_defect(moduli: &[Modulus]) -> Result<f64, String> {
    let mut worst: f64 = 0.0;
    for &m in moduli {
        let table = elliptic_integral_table(m).map_err(|e| e.to_string())?;
        worst = worst.max(table.worst_gap());
    }
    Ok(worst)
}

fn run_battery(seed: Option<u64>) -> Result<Vec<SelfCheck>, String> {
    let mut checks = Vec::new();

    let mut points = Vec::new();
    for &m in &fixed_moduli() {
        for i in 0..=40 {
            points.push((-8.0 + 0.4 * i as f64, m));
        }
    }
    let (sn_cn, dn) = jacobi_defects(&points);
    checks.push(SelfCheck::new(
        "jacobi-pythagorean-sn-cn",
        sn_cn,
        IDENTITY_BOUND,
    ));
    checks.push(SelfCheck::new("jacobi-pythagorean-dn", dn, IDENTITY_BOUND));

    let mut legendre_worst: f64 = 0.0;
    for i in 1..=19 {
        let m = Modulus::new(i as f64 / 20.0).map_err(|e| e.to_string())?;
        legendre_worst = legendre_worst.max(legendre_check(m).map_err(|e| e.to_string())?.abs());
    }
    checks.push(SelfCheck::new(
        "legendre-relation",
        legendre_worst,
        IDENTITY_BOUND,
    ));

    let coarse: Vec<Modulus> = (1..=9)
        .map(|i| Modulus::new(i as f64 / 10.0).expect("grid moduli are admissible"))
        .collect();
    let (k_gap, e_gap) = quadrature_cross_defects(&coarse)?;
    checks.push(SelfCheck::new(
        "complete-k-vs-quadrature",
        k_gap,
        QUADRATURE_CROSS_BOUND,
    ));
    checks.push(SelfCheck::new(
        "complete-e-vs-quadrature",
        e_gap,
        QUADRATURE_CROSS_BOUND,
    ));

    let (d1_err, d2_err) = diff_matrix_defects()?;
    checks.push(SelfCheck::new(
        "d1-spectral-accuracy",
        d1_err,
        DIFF_ACCURACY_BOUND,
    ));
    checks.push(SelfCheck::new(
        "d2-spectral-accuracy",
        d2_err,
        DIFF_ACCURACY_BOUND,
    ));

    let table_moduli: Vec<Modulus> = [0.3, 0.5, 0.7]
        .iter()
        .map(|&kappa| Modulus::new(kappa).expect("table moduli are admissible"))
        .collect();
    checks.push(SelfCheck::new(
        "elliptic-integral-table",
        table_defect(&table_moduli)?,
        INTEGRAL_TABLE_BOUND,
    ));

    if let Some(seed) = seed {
        let mut rng = StdRng::seed_from_u64(seed);

        let seeded_points: Vec<(f64, Modulus)> = (0..SEEDED_SAMPLES)
            .map(|_| {
                let y = rng.random_range(-10.0..10.0);
                let m = Modulus::new(rng.random_range(0.01..0.99))
                    .expect("sampled moduli are admissible");
                (y, m)
            })
            .collect();
        let (sn_cn, dn) = jacobi_defects(&seeded_points);
        checks.push(SelfCheck::new(
            "jacobi-pythagorean-sn-cn-seeded",
            sn_cn,
            IDENTITY_BOUND,
        ));
        checks.push(SelfCheck::new(
            "jacobi-pythagorean-dn-seeded",
            dn,
            IDENTITY_BOUND,
        ));

        let mut legendre_worst: f64 = 0.0;
        let mut sampled = Vec::new();
        for _ in 0..SEEDED_SAMPLES {
            let m = Modulus::new(rng.random_range(0.05..0.95))
                .expect("sampled moduli are admissible");
            sampled.push(m);
            legendre_worst =
                legendre_worst.max(legendre_check(m).map_err(|e| e.to_string())?.abs());
        }
        checks.push(SelfCheck::new(
            "legendre-relation-seeded",
            legendre_worst,
            IDENTITY_BOUND,
        ));

        let (k_gap, e_gap) = quadrature_cross_defects(&sampled)?;
        checks.push(SelfCheck::new(
            "complete-k-vs-quadrature-seeded",
            k_gap,
            QUADRATURE_CROSS_BOUND,
        ));
        checks.push(SelfCheck::new(
            "complete-e-vs-quadrature-seeded",
            e_gap,
            QUADRATURE_CROSS_BOUND,
        ));

        let table_sampled: Vec<Modulus> = (0..2)
            .map(|_| {
                Modulus::new(rng.random_range(0.1..0.9)).expect("sampled moduli are admissible")
            })
            .collect();
        checks.push(SelfCheck::new(
            "elliptic-integral-table-seeded",
            table_defect(&table_sampled)?,
            INTEGRAL_TABLE_BOUND,
        ));
    }

    Ok(checks)
}

/// Runs the battery and reports. Human-readable lines by default; an
/// explicit `--format` chooses json/csv, and `--verbose` without a format
/// selects json. Exit 1 lists every failed check on stderr.
pub fn cmd_selftest(r: &Resolved, verbose: bool) -> Result<i32, Failure> {
    let checks = run_battery(r.seed).map_err(Failure::fail)?;
    let passed = checks.iter().all(|c| c.passed);

    let text = if r.format_given {
        match r.format {
            OutputFormat::Json => to_json(&SelfTestReport {
                checks: checks.clone(),
                seed: r.seed,
                passed,
            }),
            OutputFormat::Csv => to_csv(
                &["name", "residual", "bound", "passed"],
                &checks
                    .iter()
                    .map(|c| {
                        vec![
                            c.name.to_string(),
                            float17(c.residual),
                            float17(c.bound),
                            c.passed.to_string(),
                        ]
                    })
                    .collect::<Vec<_>>(),
            ),
        }
    } else if verbose {
        to_json(&SelfTestReport {
            checks: checks.clone(),
            seed: r.seed,
            passed,
        })
    } else {
        let mut text = String::new();
        for c in &checks {
            text.push_str(&format!(
                "{} {:<36} residual {:>10.3e}  bound {:>8.1e}\n",
                if c.passed { "ok  " } else { "FAIL" },
                c.name,
                c.residual,
                c.bound
            ));
        }
        text.push_str(&format!(
            "self-test: {}/{} checks passed\n",
            checks.iter().filter(|c| c.passed).count(),
            checks.len()
        ));
        text
    };
    emit(text, r.out.as_deref(), r.force).map_err(Failure::usage)?;

    if passed {
        Ok(EXIT_PASS)
    } else {
        for c in checks.iter().filter(|c| !c.passed) {
            eprintln!(
                "self-test failure: {} (residual {:.3e} exceeds bound {:.1e})",
                c.name, c.residual, c.bound
            );
        }
        Ok(EXIT_FAIL)
    }
}
