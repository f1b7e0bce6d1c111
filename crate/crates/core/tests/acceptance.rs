//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any
//! failure.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use pdm_spectra::analytic::BoundState;
use pdm_spectra::harness::{
    anchors, convergence_slope, degeneracy_ladder, orthonormality_matrix, pct_ratio_variance,
    residual_radii, transform_mismatch, SweepConfig, Tolerances, SWEEP_DIMS, SWEEP_ZETAS,
};
use pdm_spectra::oracle::{max_relative_residual, radial_residual, solve_pt};
use pdm_spectra::pct::u_d_general;
use pdm_spectra::{energy, pt_params, MassModel, QuantumNumbers};
use rayon::prelude::*;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Verdict {
    Verdict { pass, detail }
}

fn sweep(n_max: u32, dims: &[u32], zetas: &[f64]) -> Vec<(QuantumNumbers, f64)> {
    let config = SweepConfig {
        n_max,
        ell_max: 2,
        dims: dims.to_vec(),
        zetas: zetas.to_vec(),
        ..SweepConfig::default()
    };
    config
        .families()
        .expect("valid sweep")
        .into_iter()
        .flat_map(|(base, zeta)| (0..=n_max).map(move |n| (base.with_n(n), zeta)))
        .collect()
}

fn within(elapsed: Duration, limit_s: f64) -> bool {
    elapsed.as_secs_f64() < limit_s
}

fn transform_identities() -> Verdict {
    let start = Instant::now();
    let mut worst_closed = 0.0_f64;
    let mut worst_assembly = 0.0_f64;
    let mut worst_polynomial = 0.0_f64;
    for &zeta in &SWEEP_ZETAS {
        let model = MassModel::squared_lorentzian(zeta).unwrap();
        for &d in &SWEEP_DIMS {
            let (u, v) = transform_mismatch(zeta, d).unwrap();
            worst_closed = worst_closed.max(u);
            worst_assembly = worst_assembly.max(v);
            // In r, U_d is the quadratic zeta^2 (1/2 - d) - zeta^2 d (zeta r)^2.
            for k in 0..=200 {
                let r = 0.01 * (2000.0_f64).powf(k as f64 / 200.0);
                let rho = zeta * r;
                let expected = zeta * zeta * (0.5 - d as f64) - zeta * zeta * d as f64 * rho * rho;
                let got = u_d_general(&model, d, r).unwrap();
                worst_polynomial = worst_polynomial.max((got - expected).abs() / expected.abs());
            }
        }
    }
    let elapsed = start.elapsed();
    let worst = worst_closed.max(worst_assembly).max(worst_polynomial);
    verdict(
        worst <= 1e-10 && within(elapsed, 1.0),
        format!(
            "u_d closed/general {worst_closed:.2e}, V_eff assembly {worst_assembly:.2e}, \
             quadratic form {worst_polynomial:.2e} (tol 1e-10), {elapsed:.2?} (< 1 s)"
        ),
    )
}

fn oracle_agreement() -> Verdict {
    let start = Instant::now();
    let config = SweepConfig {
        n_max: 4,
        ell_max: 2,
        dims: SWEEP_DIMS.to_vec(),
        zetas: SWEEP_ZETAS.to_vec(),
        ..SweepConfig::default()
    };
    let families = config.families().unwrap();
    let worst = families
        .par_iter()
        .map(|(base, zeta)| {
            let p = pt_params(base, *zeta).unwrap();
            let report = solve_pt(&p, 5, 8192).unwrap();
            (0..5u32)
                .map(|n| {
                    let e = energy(&base.with_n(n), *zeta).unwrap();
                    (report.energy(n as usize).unwrap() - e).abs() / e
                })
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max);
    let mut anchor_worst = 0.0_f64;
    for (_, qn, expected) in anchors() {
        let analytic = energy(&qn, 1.0).unwrap();
        let p = pt_params(&qn, 1.0).unwrap();
        let numeric = solve_pt(&p, qn.n_r as usize + 1, 8192)
            .unwrap()
            .energy(qn.n_r as usize)
            .unwrap();
        anchor_worst = anchor_worst
            .max((analytic - expected).abs() / expected)
            .max((numeric - expected).abs() / expected);
    }
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-5 && anchor_worst <= 1e-5 && within(elapsed, 120.0),
        format!(
            "{} families x 5 levels, worst rel err {worst:.2e}; anchors 7.5/17.5/1.5/4.0 worst {anchor_worst:.2e} \
             (tol 1e-5), {elapsed:.2?} (< 120 s)",
            families.len()
        ),
    )
}

fn residual_test() -> Verdict {
    let start = Instant::now();
    let states = sweep(3, &[1, 3, 5], &SWEEP_ZETAS);
    let radii = residual_radii();
    let worst = states
        .par_iter()
        .map(|&(qn, zeta)| {
            let s = BoundState::new(qn, zeta).unwrap();
            max_relative_residual(&radial_residual(&s, &radii).unwrap())
        })
        .reduce(|| 0.0, f64::max);
    let elapsed = start.elapsed();
    verdict(
        worst <= 1e-8 && within(elapsed, 10.0),
        format!(
            "{} states on r in [0.05, 20], worst relative residual {worst:.2e} (tol 1e-8), {elapsed:.2?} (< 10 s)",
            states.len()
        ),
    )
}

fn wavefunction_structure() -> Verdict {
    let states = sweep(4, &SWEEP_DIMS, &SWEEP_ZETAS);
    let (misses, variance) = states
        .par_iter()
        .map(|&(qn, zeta)| {
            let s = BoundState::new(qn, zeta).unwrap();
            (
                (s.nodes() != qn.n_r as usize) as usize,
                pct_ratio_variance(&s).unwrap(),
            )
        })
        .reduce(|| (0, 0.0), |a, b| (a.0 + b.0, a.1.max(b.1)));
    let config = SweepConfig {
        dims: SWEEP_DIMS.to_vec(),
        zetas: SWEEP_ZETAS.to_vec(),
        ..SweepConfig::default()
    };
    let gram = config
        .families()
        .unwrap()
        .par_iter()
        .map(|(b, zeta)| {
            orthonormality_matrix(b.ell, b.d, b.parity, *zeta, 4)
                .unwrap()
                .max_deviation
        })
        .reduce(|| 0.0, f64::max);
    verdict(
        misses == 0 && gram <= 1e-8 && variance <= 1e-16,
        format!(
            "{} states: node mismatches {misses}, max |G - I| {gram:.2e} (tol 1e-8), \
             ratio variance over 50 radii {variance:.2e} (tol 1e-16)",
            states.len()
        ),
    )
}

fn scaling_law() -> Verdict {
    let mut zetas = SWEEP_ZETAS.to_vec();
    zetas.extend([0.1, 0.37, 1.9, 7.25]);
    let mut worst = 0.0_f64;
    let mut count = 0;
    for (qn, _) in sweep(4, &SWEEP_DIMS, &[1.0]) {
        let unit = energy(&qn, 1.0).unwrap();
        for &zeta in &zetas {
            let e = energy(&qn, zeta).unwrap();
            worst = worst.max((e - zeta * zeta * unit).abs() / e.abs());
            count += 1;
        }
    }
    verdict(
        worst <= 2.0 * f64::EPSILON,
        format!("{count} (state, zeta) pairs, worst |E(z) - z^2 E(1)|/E {worst:.2e} (tol 2 ulp)"),
    )
}

fn degeneracy_report() -> Verdict {
    let report = match degeneracy_ladder(0, 1, 3, 1.0, Some(8192), &Tolerances::default()) {
        Ok(r) => r,
        Err(e) => return verdict(false, format!("ladder failed: {e}")),
    };
    let energies: Vec<f64> = report.ladder.iter().map(|r| r.e_analytic).collect();
    let expected = [13.9307, 17.5];
    let anchored = energies.len() == 2
        && energies
            .iter()
            .zip(expected)
            .all(|(e, x)| (e - x).abs() <= 5e-5);
    let confirmed = report
        .ladder
        .iter()
        .all(|r| r.abs_err.is_some_and(|err| err / r.e_analytic <= 1e-5));
    let worst = report
        .ladder
        .iter()
        .map(|r| r.abs_err.unwrap_or(f64::NAN) / r.e_analytic)
        .fold(0.0, f64::max);
    verdict(
        anchored && confirmed && report.max_pairwise_spread > 0.0,
        format!(
            "rungs (1,3) (0,5): E = {:.6}, {:.6}; oracle rel err {worst:.2e} (tol 1e-5); \
             spread {:.6}; degeneracy claim satisfied: {}",
            energies[0], energies[1], report.max_pairwise_spread, report.claim_satisfied
        ),
    )
}

fn convergence_order() -> Verdict {
    let slope = convergence_slope().unwrap();
    verdict(
        (1.7..=2.3).contains(&slope),
        format!("(kappa=1, lambda=3) ground state, grids 1000/2000/4000: slope {slope:.4} (in [1.7, 2.3])"),
    )
}

fn determinism() -> Verdict {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_pdm-spectra"))
            .arg("spectrum")
            .env_remove("PDM_SPECTRA_THREADS")
            .output()
            .expect("binary runs")
    };
    let (a, b) = (run(), run());
    let ok =
        a.status.success() && b.status.success() && !a.stdout.is_empty() && a.stdout == b.stdout;
    verdict(
        ok,
        format!(
            "two `spectrum` runs: {} and {} bytes, identical: {}",
            a.stdout.len(),
            b.stdout.len(),
            a.stdout == b.stdout
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 transform identities", transform_identities),
        ("2 spectrum oracle agreement", oracle_agreement),
        ("3 radial equation residual", residual_test),
        ("4 wavefunction structure", wavefunction_structure),
        ("5 scaling law", scaling_law),
        ("6 degeneracy report", degeneracy_report),
        ("7 convergence order", convergence_order),
        ("8 determinism", determinism),
    ];
    let mut failures = 0;
    for (name, check) in criteria {
        let v = check();
        if !v.pass {
            failures += 1;
        }
        println!(
            "criterion {name}: {} ({})",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!("acceptance: {}/8 criteria passed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
