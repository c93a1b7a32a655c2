//! Acceptance gate: one test per criterion, each printing a single
//! pass/fail line (visible with `cargo test -- --nocapture`).

use std::process::Command;

use qpla::canonical::{canonical_action, momentum_from_velocity};
use qpla::classical::{integrate, lagrangian_action, ostro_hamiltonian, OstrogradskyState};
use qpla::groundstate::kernel_residual;
use qpla::locallimit::convergence_sweep;
use qpla::puoperator::{
    green_kernel_analytic, green_kernel_numeric, spectrum, trace_integral_approx, trace_inv_sqrt,
    PUParams,
};
use qpla::timegrid::{make_grid, Trajectory};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(number: u8, name: &str, pass: bool) {
    println!("acceptance {number} ({name}): {}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "acceptance criterion {number} ({name}) failed");
}

#[test]
fn criterion_1_spectrum_fidelity() {
    let grid = make_grid(1.0, 2000).unwrap();
    let params = PUParams::new(0.1, 1.0, 10).unwrap();
    let spec = spectrum(&grid, &params).unwrap();
    let mut max_rel = 0.0f64;
    for (idx, &lambda) in spec.eigenvalues.iter().enumerate() {
        let analytic = params.lambda_analytic(idx + 1);
        max_rel = max_rel.max((lambda - analytic).abs() / analytic.abs());
    }
    report(1, "spectrum fidelity", max_rel <= 1e-4);
}

#[test]
fn criterion_2_green_kernel_equivalence() {
    let grid = make_grid(1.0, 2000).unwrap();
    let params = PUParams::new(0.3, 1.0, 1).unwrap();
    let analytic = green_kernel_analytic(&grid, &params).unwrap();
    let numeric = green_kernel_numeric(&grid, &params).unwrap();
    let n = grid.n();
    let mut max_diff = 0.0f64;
    for j in 0..n {
        for i in 0..n {
            max_diff = max_diff.max((analytic.values[(i, j)] - numeric.values[(i, j)]).norm());
        }
    }
    report(2, "Green-kernel equivalence", max_diff <= 1e-4);
}

#[test]
fn criterion_3_legendre_consistency() {
    let grid = make_grid(1.0, 2000).unwrap();
    let params = PUParams::new(0.1, 1.0, 1).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut max_rel = 0.0f64;
    for _ in 0..20 {
        let coeffs: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let q0: f64 = rng.gen_range(-1.0..1.0);
        let shape = |t: f64| -> f64 {
            q0 + coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let k = (i + 1) as f64 * std::f64::consts::PI;
                    c / k * (1.0 - (k * t).cos())
                })
                .sum::<f64>()
        };
        let traj = Trajectory::from_fn(&grid, shape).with_boundary_velocities(0.0, 0.0);
        let mom = momentum_from_velocity(&traj, &params).unwrap();
        let i_lag = lagrangian_action(&traj, &params).unwrap();
        let i_can = canonical_action(&traj, &mom, &params).unwrap();
        max_rel = max_rel.max((i_can - i_lag).abs() / i_lag.abs());
    }
    report(3, "Legendre consistency", max_rel <= 1e-5);
}

#[test]
fn criterion_4_ground_state_kernel() {
    let grid = make_grid(1.0, 2000).unwrap();
    let mut quad_ok = true;
    let mut derivative_norms = Vec::new();
    for r in [0.1, 0.05, 0.01] {
        let params = PUParams::new(r, 1.0, 10).unwrap();
        let spec = spectrum(&grid, &params).unwrap();
        let m = qpla::groundstate::solve_m(&spec, &params).unwrap();
        let res = kernel_residual(&m, &spec, &params).unwrap();
        quad_ok &= res.quadratic_mode_residual <= 1e-6;
        derivative_norms.push(res.derivative_norm);
    }
    let strictly_decreasing =
        derivative_norms.windows(2).all(|w| w[1] < w[0]);
    report(4, "ground-state kernel", quad_ok && strictly_decreasing);
}

#[test]
fn criterion_5_trace_law() {
    let r = 1e-3;
    let base = PUParams::new(r, 1.0, 1).unwrap();
    let cutoff = PUParams { n_max: base.n_critical_analytic(), ..base };
    let trace = trace_inv_sqrt(&cutoff).unwrap();
    let invariant = r * trace.re / cutoff.t_total;
    let integral = trace_integral_approx(&cutoff).unwrap();
    // The printed closed form pi^2 T / r is emitted alongside as the
    // documented discrepancy check.
    println!(
        "acceptance 5 info: r*Re S/T = {invariant:.6} (limit 0.5), printed integral = {:.4e}, derived integral = {:.4e}",
        integral.quoted_value, integral.derived_value
    );
    report(5, "trace law", (invariant - 0.5).abs() / 0.5 <= 0.02);
}

#[test]
fn criterion_6_local_limit_correspondence() {
    let report6 = convergence_sweep(&[0.01, 0.005, 0.001], 1.0, 2000, 1.0, 2.0, 1.0).unwrap();
    // Rows are ordered by descending r; deviations must be non-increasing.
    let deviations: Vec<f64> = report6.entries.iter().map(|e| e.deviation).collect();
    let non_increasing = deviations.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    let last = report6.entries.last().unwrap();
    let re_ok = (last.lambda.re + 0.5).abs() / 0.5 <= 0.02;
    // Adding the boundary phase reproduces the full reference for
    // (q0, qT) = (1, 2): -0.5 + 1.5 i.
    let total_ok = (last.lambda_total.re + 0.5).abs() / 0.5 <= 0.02
        && (last.lambda_total.im - 1.5).abs() <= 1e-10;
    println!(
        "acceptance 6 info: deviations (r descending) = {:?}, Lambda(r=1e-3) = {:+.6e}{:+.6e}i",
        deviations, last.lambda_total.re, last.lambda_total.im
    );
    report(6, "local-limit correspondence", re_ok && total_ok && non_increasing);
}

#[test]
fn criterion_7_classical_ghost_and_conservation() {
    let params = PUParams::new(0.1, 1.0, 1).unwrap();
    let initial = OstrogradskyState::new(1.0, 0.5, -0.2, 0.3 * 0.01);
    let result = integrate(&initial, &params, 1e-3, 100_000).unwrap();
    let drift_ok = result.blow_up_step.is_none() && result.max_energy_drift() <= 1e-6;

    // The pure-momentum family (0, 0, 0, p_y) has energy -p_y^2 / (2 r^2),
    // unbounded below.
    let mut ghost_ok = true;
    let mut previous = f64::INFINITY;
    for p_y in [1.0, 10.0, 100.0, 1000.0] {
        let state = OstrogradskyState::new(0.0, 0.0, 0.0, p_y);
        let h = ostro_hamiltonian(&state, &params).unwrap();
        let expected = -p_y * p_y / (2.0 * params.r * params.r);
        ghost_ok &= (h - expected).abs() <= 1e-9 * expected.abs() && h < previous;
        previous = h;
    }
    ghost_ok &= previous < -1e7; // clearly unbounded below on this family
    report(7, "classical ghost and conservation", drift_ok && ghost_ok);
}

#[test]
fn criterion_8_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_qpla");
    let commands: Vec<Vec<&str>> = vec![
        vec!["kernel", "--r", "0.3", "--N", "120"],
        vec!["spectrum", "--r", "0.1", "--N", "400", "--n-max", "5"],
        vec!["classical", "--r", "0.1", "--dt", "0.001", "--steps", "2000"],
        vec!["canonical-check", "--r", "0.1", "--N", "400"],
        vec!["ground-state", "--r", "0.02", "--N", "300", "--n-max", "8", "--format", "json"],
        vec!["trace", "--r", "0.001"],
        vec!["local-limit", "--r-list", "0.02,0.015", "--N", "250", "--format", "json"],
    ];
    let mut all_ok = true;
    for args in &commands {
        let mut outputs = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir().unwrap();
            let status = Command::new(bin)
                .args(args)
                .env("QPLA_OUT_DIR", dir.path())
                .output()
                .unwrap();
            assert!(
                status.status.success(),
                "{:?} failed: {}",
                args,
                String::from_utf8_lossy(&status.stderr)
            );
            let entries: Vec<_> = std::fs::read_dir(dir.path())
                .unwrap()
                .map(|e| e.unwrap().path())
                .collect();
            assert_eq!(entries.len(), 1, "expected one output file for {args:?}");
            outputs.push(std::fs::read(&entries[0]).unwrap());
        }
        let identical = outputs[0] == outputs[1];
        if !identical {
            eprintln!("non-deterministic output for {args:?}");
        }
        all_ok &= identical;
    }
    report(8, "CLI determinism", all_ok);
}
