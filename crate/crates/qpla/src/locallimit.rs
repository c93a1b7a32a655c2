//! The r -> 0 correspondence machinery: effective Planck constant scaling,
//! calibration of the scale factor alpha against the trace series, the
//! harmonic-oscillator reference eigenvalue, the boundary phase, and
//! convergence sweeps toward the local limit.

use num_complex::Complex64;

use crate::error::{QplaError, Result};
use crate::groundstate::{action_eigenvalue, derivative_norm, solve_k, solve_m};
use crate::puoperator::{count_positive_eigenvalues, spectrum, trace_inv_sqrt, PUParams};
use crate::timegrid::make_grid;

/// Minimum number of positive modes required for a meaningful calibration.
const MIN_CALIBRATION_MODES: usize = 10;

/// hbar_tilde: the effective Planck constant of the trajectory-space
/// Gaussian, linear in each argument.
pub fn hbar_tilde(alpha: f64, r: f64, hbar: f64) -> f64 {
    alpha * r * hbar
}

/// reference_lambda_ho: the harmonic-oscillator reference eigenvalue
/// assembled from the ground-state wave function at the two endpoints
/// (the amplitude cancels): -hbar T / 2 + i (q_T^2 - q_0^2) / 2.
pub fn reference_lambda_ho(t_total: f64, q0: f64, q_t: f64, hbar: f64) -> Complex64 {
    Complex64::new(-hbar * t_total / 2.0, (q_t * q_t - q0 * q0) / 2.0)
}

/// boundary_phase: i (q_T^2 - q_0^2) / 2, antisymmetric under endpoint
/// swap.
pub fn boundary_phase(q0: f64, q_t: f64) -> Complex64 {
    Complex64::new(0.0, (q_t * q_t - q0 * q0) / 2.0)
}

/// Calibration of alpha against the trace series.
#[derive(Debug, Clone, Copy)]
pub struct AlphaCalibration {
    /// alpha* = T / (r Re S(r)) with S summed up to the critical index.
    pub alpha_star: f64,
    /// The documented alternative 1/pi^2.
    pub nominal_alpha: f64,
    /// alpha* / (1/pi^2).
    pub ratio: f64,
    /// Critical index used as the trace cutoff.
    pub n_critical: usize,
}

/// calibrate_alpha: the unique alpha for which the real part of the
/// action eigenvalue reproduces -hbar T / 2 when the trace is cut off at the
/// critical index.
pub fn calibrate_alpha(params: &PUParams) -> Result<AlphaCalibration> {
    params.validate()?;
    if params.r == 0.0 {
        return Err(QplaError::HarmonicLimit(
            "alpha calibration needs r > 0; the trace series is empty at r = 0".into(),
        ));
    }
    let n_critical = params.n_critical_analytic();
    if n_critical < MIN_CALIBRATION_MODES {
        return Err(QplaError::Config(format!(
            "alpha calibration needs at least {MIN_CALIBRATION_MODES} positive modes, \
             got {n_critical}; decrease r"
        )));
    }
    let cutoff = PUParams { n_max: n_critical, ..*params };
    let trace = trace_inv_sqrt(&cutoff)?;
    if trace.re <= 0.0 {
        return Err(QplaError::HarmonicLimit(format!(
            "trace series real part {} is not positive; cannot calibrate alpha",
            trace.re
        )));
    }
    let alpha_star = params.t_total / (params.r * trace.re);
    let nominal_alpha = std::f64::consts::PI.powi(-2);
    Ok(AlphaCalibration { alpha_star, nominal_alpha, ratio: alpha_star / nominal_alpha, n_critical })
}

/// One row of a convergence sweep.
#[derive(Debug, Clone, Copy)]
pub struct CorrespondenceEntry {
    pub r: f64,
    /// Action eigenvalue from the numerical pipeline (q0 = qT = 0).
    pub lambda: Complex64,
    /// lambda plus the analytic boundary phase for the requested endpoints.
    pub lambda_total: Complex64,
    /// Harmonic-oscillator reference.
    pub lambda_ref: Complex64,
    /// |Re lambda - Re lambda_ref| / |Re lambda_ref|.
    pub deviation: f64,
    /// Derivative-term residual D of the principal kernel.
    pub derivative_norm: f64,
    /// This r's own calibrated alpha*.
    pub alpha_star: f64,
    /// Number of retained (positive) modes on the grid.
    pub n_max: usize,
}

/// CorrespondenceReport: sweep of the local-limit correspondence,
/// rows ordered by descending r.
#[derive(Debug, Clone)]
pub struct CorrespondenceReport {
    /// alpha used in the Lambda pipeline: alpha*(smallest r).
    pub alpha_used: f64,
    /// The documented alternative 1/pi^2.
    pub nominal_alpha: f64,
    pub t_total: f64,
    pub hbar: f64,
    pub q0: f64,
    pub q_t: f64,
    pub n_grid: usize,
    pub entries: Vec<CorrespondenceEntry>,
}

/// convergence_sweep: for each r (descending), build the principal
/// kernel with the per-r critical cutoff, evaluate the action eigenvalue with
/// alpha calibrated at the smallest r, and compare against the
/// harmonic-oscillator reference. The numerical pipeline runs with
/// q0 = qT = 0; the boundary phase for the requested endpoints is added
/// analytically.
pub fn convergence_sweep(
    r_list: &[f64],
    t_total: f64,
    n_grid: usize,
    q0: f64,
    q_t: f64,
    hbar: f64,
) -> Result<CorrespondenceReport> {
    if r_list.is_empty() {
        return Err(QplaError::Config("convergence sweep needs at least one r".into()));
    }
    if r_list.iter().any(|&r| r <= 0.0) {
        return Err(QplaError::Config("convergence sweep needs strictly positive r".into()));
    }
    let mut rs: Vec<f64> = r_list.to_vec();
    rs.sort_by(|a, b| b.partial_cmp(a).expect("finite r"));
    rs.dedup();

    let grid = make_grid(t_total, n_grid)?;
    let r_min = *rs.last().expect("nonempty");
    let calibration = calibrate_alpha(&PUParams::new(r_min, t_total, 1)?.with_hbar(hbar))?;
    let alpha_used = calibration.alpha_star;
    let lambda_ref = reference_lambda_ho(t_total, q0, q_t, hbar);
    let phase = boundary_phase(q0, q_t);

    let mut entries = Vec::with_capacity(rs.len());
    for &r in &rs {
        let probe = PUParams::new(r, t_total, 1)?.with_hbar(hbar);
        probe.check_resonance()?;
        let n_max = count_positive_eigenvalues(&grid, &probe);
        if n_max == 0 {
            return Err(QplaError::Config(format!(
                "no positive modes on the grid at r = {r}; decrease r or refine the grid"
            )));
        }
        let params = PUParams { n_max, alpha: alpha_used, ..probe };
        let spec = spectrum(&grid, &params)?;
        let m = solve_m(&spec, &params)?;
        let k = solve_k(&m, &params, 0.0, 0.0)?;
        let eig = action_eigenvalue(&m, &k, &spec, &params)?;
        let deviation = (eig.lambda.re - lambda_ref.re).abs() / lambda_ref.re.abs();
        entries.push(CorrespondenceEntry {
            r,
            lambda: eig.lambda,
            lambda_total: eig.lambda + phase,
            lambda_ref,
            deviation,
            derivative_norm: derivative_norm(&m),
            alpha_star: calibrate_alpha(&probe)?.alpha_star,
            n_max,
        });
    }
    Ok(CorrespondenceReport {
        alpha_used,
        nominal_alpha: std::f64::consts::PI.powi(-2),
        t_total,
        hbar,
        q0,
        q_t,
        n_grid,
        entries,
    })
}
