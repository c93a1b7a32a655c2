//! Command-line front end: configuration parsing, experiment orchestration,
//! and CSV/JSON emission.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::canonical::{canonical_action, momentum_from_velocity};
use crate::classical::{integrate, lagrangian_action, OstrogradskyState};
use crate::error::{QplaError, Result};
use crate::groundstate::{normalizability, solve_ground_state};
use crate::locallimit::{boundary_phase, calibrate_alpha, convergence_sweep};
use crate::puoperator::{
    green_kernel_analytic, green_kernel_numeric, principal_sqrt, spectrum, trace_integral_approx,
    trace_inv_sqrt, PUParams,
};
use crate::timegrid::{make_grid, Trajectory};

/// Fixed seed for the canonical-check trajectory ensemble: reruns must be
/// byte-identical.
const CANONICAL_CHECK_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "qpla", version, about = "Numerical laboratory for nonlocal oscillator dynamics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandKind,
    /// Optional JSON configuration file; flags override file values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Nonlocality radius r.
    #[arg(long, global = true)]
    pub r: Option<f64>,
    /// Total interval length T.
    #[arg(long = "T", global = true)]
    pub t_total: Option<f64>,
    /// Number of interior grid nodes N.
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    /// Number of retained modes.
    #[arg(long = "n-max", global = true)]
    pub n_max: Option<usize>,
    /// Scale factor alpha, or "auto" for trace calibration.
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    /// Planck constant.
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
    /// Left boundary value.
    #[arg(long, global = true)]
    pub q0: Option<f64>,
    /// Right boundary value.
    #[arg(long = "qT", global = true)]
    pub q_t: Option<f64>,
    /// Integrator step (classical subcommand).
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Integrator step count (classical subcommand).
    #[arg(long, global = true)]
    pub steps: Option<usize>,
    /// Comma-separated radii for the local-limit sweep.
    #[arg(long = "r-list", global = true, value_delimiter = ',')]
    pub r_list: Option<Vec<f64>>,
    /// Output file name (directory overridden by QPLA_OUT_DIR).
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Output format.
    #[arg(long, global = true)]
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum CommandKind {
    /// Analytic vs numeric Green kernel comparison.
    Kernel,
    /// Discrete vs analytic spectrum of L.
    Spectrum,
    /// Ostrogradsky flow integration from the fixed state (1, 0, 0, 0).
    Classical,
    /// Legendre consistency over a seeded trajectory ensemble.
    CanonicalCheck,
    /// Gaussian ground state, residuals and action eigenvalue.
    GroundState,
    /// Trace series and its local-limit value.
    Trace,
    /// Convergence sweep toward the harmonic oscillator.
    LocalLimit,
}

impl CommandKind {
    fn name(self) -> &'static str {
        match self {
            CommandKind::Kernel => "kernel",
            CommandKind::Spectrum => "spectrum",
            CommandKind::Classical => "classical",
            CommandKind::CanonicalCheck => "canonical-check",
            CommandKind::GroundState => "ground-state",
            CommandKind::Trace => "trace",
            CommandKind::LocalLimit => "local-limit",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Scale factor choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AlphaChoice {
    Auto,
    Fixed(f64),
}

/// JSON configuration file schema; unknown keys are rejected.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    r: Option<f64>,
    #[serde(rename = "T")]
    t_total: Option<f64>,
    #[serde(rename = "N")]
    n: Option<usize>,
    n_max: Option<usize>,
    alpha: Option<AlphaField>,
    hbar: Option<f64>,
    q0: Option<f64>,
    #[serde(rename = "qT")]
    q_t: Option<f64>,
    dt: Option<f64>,
    steps: Option<usize>,
    r_list: Option<Vec<f64>>,
    output: Option<PathBuf>,
    format: Option<String>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum AlphaField {
    Num(f64),
    Str(String),
}

/// Fully resolved run configuration (defaults < config file < flags).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: CommandKind,
    pub r: f64,
    pub t_total: f64,
    pub n: usize,
    pub n_max: usize,
    pub alpha: AlphaChoice,
    pub hbar: f64,
    pub q0: f64,
    pub q_t: f64,
    pub dt: f64,
    pub steps: usize,
    pub r_list: Vec<f64>,
    pub output: Option<PathBuf>,
    pub format: OutputFormat,
}

fn parse_alpha(raw: &str) -> Result<AlphaChoice> {
    if raw == "auto" {
        return Ok(AlphaChoice::Auto);
    }
    raw.parse::<f64>()
        .map(AlphaChoice::Fixed)
        .map_err(|_| QplaError::Config(format!("alpha must be a number or \"auto\", got {raw:?}")))
}

fn parse_format(raw: &str) -> Result<OutputFormat> {
    match raw {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(QplaError::Config(format!("format must be csv or json, got {other:?}"))),
    }
}

/// parse_config: merge defaults, the optional JSON file and the flags.
pub fn parse_config(cli: &Cli) -> Result<RunConfig> {
    let file: FileConfig = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                QplaError::Config(format!("cannot read config file {}: {e}", path.display()))
            })?;
            serde_json::from_str(&text).map_err(|e| {
                QplaError::Config(format!("invalid config file {}: {e}", path.display()))
            })?
        }
        None => FileConfig::default(),
    };

    let alpha = match (&cli.alpha, &file.alpha) {
        (Some(raw), _) => parse_alpha(raw)?,
        (None, Some(AlphaField::Num(x))) => AlphaChoice::Fixed(*x),
        (None, Some(AlphaField::Str(s))) => parse_alpha(s)?,
        (None, None) => AlphaChoice::Auto,
    };
    let format = match (cli.format, &file.format) {
        (Some(f), _) => f,
        (None, Some(raw)) => parse_format(raw)?,
        (None, None) => OutputFormat::Csv,
    };

    let config = RunConfig {
        command: cli.command,
        r: cli.r.or(file.r).unwrap_or(0.1),
        t_total: cli.t_total.or(file.t_total).unwrap_or(1.0),
        n: cli.n.or(file.n).unwrap_or(2000),
        n_max: cli.n_max.or(file.n_max).unwrap_or(10),
        alpha,
        hbar: cli.hbar.or(file.hbar).unwrap_or(1.0),
        q0: cli.q0.or(file.q0).unwrap_or(0.0),
        q_t: cli.q_t.or(file.q_t).unwrap_or(0.0),
        dt: cli.dt.or(file.dt).unwrap_or(1e-3),
        steps: cli.steps.or(file.steps).unwrap_or(100_000),
        r_list: cli.r_list.clone().or(file.r_list).unwrap_or_else(|| vec![0.01, 0.005, 0.001]),
        output: cli.output.clone().or(file.output),
        format,
    };
    validate_config(&config)?;
    Ok(config)
}

fn validate_config(config: &RunConfig) -> Result<()> {
    let params = config.params()?;
    // Resonance is a configuration-level guard for kernel-based commands.
    if matches!(
        config.command,
        CommandKind::Kernel
            | CommandKind::CanonicalCheck
            | CommandKind::GroundState
            | CommandKind::LocalLimit
    ) {
        params.check_resonance()?;
    }
    if config.command == CommandKind::Classical && (config.dt <= 0.0 || config.steps == 0) {
        return Err(QplaError::Config("classical integration needs dt > 0 and steps > 0".into()));
    }
    Ok(())
}

impl RunConfig {
    fn params(&self) -> Result<PUParams> {
        let mut p = PUParams::new(self.r, self.t_total, self.n_max)?.with_hbar(self.hbar);
        if let AlphaChoice::Fixed(a) = self.alpha {
            p = p.with_alpha(a);
        }
        Ok(p)
    }

    fn resolved_params(&self) -> Result<PUParams> {
        let p = self.params()?;
        match self.alpha {
            AlphaChoice::Fixed(_) => Ok(p),
            AlphaChoice::Auto => {
                let cal = calibrate_alpha(&p)?;
                Ok(p.with_alpha(cal.alpha_star))
            }
        }
    }

    fn output_path(&self) -> PathBuf {
        let default_name = format!(
            "{}.{}",
            self.command.name(),
            match self.format {
                OutputFormat::Csv => "csv",
                OutputFormat::Json => "json",
            }
        );
        let name = self.output.clone().unwrap_or_else(|| PathBuf::from(default_name));
        match std::env::var_os("QPLA_OUT_DIR") {
            Some(dir) => {
                let file = name.file_name().map(PathBuf::from).unwrap_or(name);
                Path::new(&dir).join(file)
            }
            None => name,
        }
    }
}

/// One tabular result: named columns plus ordered scalar metadata.
struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
    meta: Vec<(&'static str, f64)>,
    summary: String,
}

fn render_csv(table: &Table) -> String {
    let mut out = String::new();
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.17e}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn render_json(config: &RunConfig, table: &Table) -> String {
    let mut out = String::new();
    out.push_str("{\n  \"schema_version\": 1,\n");
    let _ = writeln!(out, "  \"command\": \"{}\",", config.command.name());
    out.push_str("  \"meta\": {");
    for (i, (key, value)) in table.meta.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "\n    \"{key}\": {value:.17e}");
    }
    out.push_str("\n  },\n  \"columns\": [");
    for (i, col) in table.columns.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "\"{col}\"");
    }
    out.push_str("],\n  \"rows\": [");
    for (i, row) in table.rows.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let cells: Vec<String> = row.iter().map(|x| format!("{x:.17e}")).collect();
        let _ = write!(out, "\n    [{}]", cells.join(", "));
    }
    out.push_str("\n  ]\n}\n");
    out
}

fn run_kernel(config: &RunConfig) -> Result<Table> {
    let grid = make_grid(config.t_total, config.n)?;
    let params = config.params()?;
    let analytic = green_kernel_analytic(&grid, &params)?;
    let numeric = green_kernel_numeric(&grid, &params)?;
    let n = grid.n();
    let mut rows = Vec::with_capacity(n);
    let mut max_diff = 0.0f64;
    for i in 0..n {
        let mut row_max = 0.0f64;
        for j in 0..n {
            let d = (analytic.values[(i, j)] - numeric.values[(i, j)]).norm();
            row_max = row_max.max(d);
        }
        max_diff = max_diff.max(row_max);
        rows.push(vec![
            grid.nodes()[i],
            analytic.values[(i, i)].re,
            numeric.values[(i, i)].re,
            row_max,
        ]);
    }
    Ok(Table {
        columns: vec!["t", "green_kernel_analytic_diag", "green_kernel_numeric_diag", "row_max_abs_diff"],
        rows,
        meta: vec![("max_abs_diff", max_diff)],
        summary: format!(
            "kernel: max |K_analytic - K_numeric| = {max_diff:.3e} (r = {}, T = {}, N = {})",
            config.r, config.t_total, config.n
        ),
    })
}

fn run_spectrum(config: &RunConfig) -> Result<Table> {
    let grid = make_grid(config.t_total, config.n)?;
    let params = config.params()?;
    let spec = spectrum(&grid, &params)?;
    let mut rows = Vec::with_capacity(spec.n_max());
    let mut max_diff = 0.0f64;
    for (idx, &lambda) in spec.eigenvalues.iter().enumerate() {
        let n_mode = idx + 1;
        let analytic = params.lambda_analytic(n_mode);
        let diff = (lambda - analytic).abs();
        max_diff = max_diff.max(diff);
        rows.push(vec![n_mode as f64, lambda, analytic, diff]);
    }
    Ok(Table {
        columns: vec!["n", "lambda_grid", "lambda_analytic", "abs_diff"],
        rows,
        meta: vec![("max_abs_diff", max_diff), ("n_critical", spec.n_critical as f64)],
        summary: format!(
            "spectrum: {} modes, n_critical = {}, max |lambda_grid - lambda_analytic| = {max_diff:.3e}",
            spec.n_max(),
            spec.n_critical
        ),
    })
}

fn run_classical(config: &RunConfig) -> Result<Table> {
    let params = config.params()?;
    let initial = OstrogradskyState { q: 1.0, y: 0.0, p_q: 0.0, p_y: 0.0, multiplier: None };
    let result = integrate(&initial, &params, config.dt, config.steps)?;
    let mut rows = Vec::with_capacity(result.states.len());
    for (i, state) in result.states.iter().enumerate() {
        rows.push(vec![
            result.times[i],
            state.q,
            state.y,
            state.p_q,
            state.p_y,
            result.energies[i],
        ]);
    }
    let drift = result.max_energy_drift();
    Ok(Table {
        columns: vec!["t", "q", "y", "p_q", "p_y", "energy"],
        rows,
        meta: vec![("max_energy_drift", drift)],
        summary: format!(
            "classical: {} steps at dt = {}, max relative energy drift = {drift:.3e}",
            config.steps, config.dt
        ),
    })
}

fn run_canonical_check(config: &RunConfig) -> Result<Table> {
    let grid = make_grid(config.t_total, config.n)?;
    let params = config.params()?;
    let t_total = config.t_total;
    let mut rng = ChaCha8Rng::seed_from_u64(CANONICAL_CHECK_SEED);
    let mut rows = Vec::new();
    let mut max_rel = 0.0f64;
    for sample in 0..20 {
        let coeffs: Vec<f64> = (0..5).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let q0: f64 = rng.gen_range(-1.0..1.0);
        let shape = |t: f64| -> f64 {
            q0 + coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let k = (i + 1) as f64 * std::f64::consts::PI / t_total;
                    c / k * (1.0 - (k * t).cos())
                })
                .sum::<f64>()
        };
        let traj = Trajectory::from_fn(&grid, shape).with_boundary_velocities(0.0, 0.0);
        let mom = momentum_from_velocity(&traj, &params)?;
        let i_lag = lagrangian_action(&traj, &params)?;
        let i_can = canonical_action(&traj, &mom, &params)?;
        let rel = (i_can - i_lag).abs() / i_lag.abs();
        max_rel = max_rel.max(rel);
        rows.push(vec![sample as f64, i_lag, i_can, rel]);
    }
    Ok(Table {
        columns: vec!["sample", "action_lagrangian", "action_canonical", "rel_diff"],
        rows,
        meta: vec![("max_rel_diff", max_rel)],
        summary: format!("canonical-check: 20 trajectories, max relative deviation = {max_rel:.3e}"),
    })
}

fn run_ground_state(config: &RunConfig) -> Result<Table> {
    let grid = make_grid(config.t_total, config.n)?;
    let params = config.resolved_params()?;
    let state = solve_ground_state(&grid, &params, config.q0, config.q_t)?;
    let report = normalizability(&state.m, &state.spectrum);
    let lambda_total = state.lambda + boundary_phase(config.q0, config.q_t);
    let mut rows = Vec::with_capacity(state.spectrum.n_max());
    for (idx, &lambda) in state.spectrum.eigenvalues.iter().enumerate() {
        let root = principal_sqrt(lambda);
        rows.push(vec![(idx + 1) as f64, lambda, root.re, root.im]);
    }
    Ok(Table {
        columns: vec!["n", "lambda", "m_eigenvalue_re", "m_eigenvalue_im"],
        rows,
        meta: vec![
            ("lambda_re", state.lambda.re),
            ("lambda_im", state.lambda.im),
            ("lambda_total_re", lambda_total.re),
            ("lambda_total_im", lambda_total.im),
            ("alpha", params.alpha),
            ("hbar_tilde", state.hbar_tilde),
            ("kernel_residual_max", state.residual.max_norm),
            ("kernel_residual_l2", state.residual.l2_norm),
            ("derivative_norm", state.residual.derivative_norm),
            ("quadratic_mode_residual", state.residual.quadratic_mode_residual),
            ("source_residual", state.source_norm),
            ("normalizable", if report.normalizable { 1.0 } else { 0.0 }),
            ("min_re_m_eigenvalue", report.min_eigenvalue),
        ],
        summary: format!(
            "ground-state: Lambda = {:.6e} + {:.6e}i (with phase: {:.6e} + {:.6e}i), quad residual = {:.3e}, D = {:.3e}, normalizable = {}",
            state.lambda.re,
            state.lambda.im,
            lambda_total.re,
            lambda_total.im,
            state.residual.quadratic_mode_residual,
            state.residual.derivative_norm,
            report.normalizable
        ),
    })
}

fn run_trace(config: &RunConfig) -> Result<Table> {
    let base = config.params()?;
    let cutoff = PUParams { n_max: base.n_critical_analytic().max(1), ..base };
    let trace = trace_inv_sqrt(&cutoff)?;
    let integral = trace_integral_approx(&cutoff)?;
    let invariant = config.r * trace.re / config.t_total;
    let row = vec![
        config.r,
        trace.n_critical as f64,
        trace.re,
        trace.im,
        invariant,
        integral.quoted_value,
        integral.derived_value,
    ];
    Ok(Table {
        columns: vec![
            "r",
            "n_critical",
            "trace_re",
            "trace_im",
            "r_trace_re_over_T",
            "integral_printed",
            "integral_derived",
        ],
        rows: vec![row],
        meta: vec![("r_trace_re_over_T", invariant)],
        summary: format!(
            "trace: Re S = {:.6e}, r*Re S/T = {invariant:.6} (limit 1/2), printed integral = {:.4e}, derived integral = {:.4e}",
            trace.re, integral.quoted_value, integral.derived_value
        ),
    })
}

fn run_local_limit(config: &RunConfig) -> Result<Table> {
    let report = convergence_sweep(
        &config.r_list,
        config.t_total,
        config.n,
        config.q0,
        config.q_t,
        config.hbar,
    )?;
    let mut rows = Vec::with_capacity(report.entries.len());
    for e in &report.entries {
        rows.push(vec![
            e.r,
            e.lambda.re,
            e.lambda.im,
            e.lambda_total.re,
            e.lambda_total.im,
            e.lambda_ref.re,
            e.lambda_ref.im,
            e.deviation,
            e.derivative_norm,
            e.alpha_star,
            e.n_max as f64,
        ]);
    }
    let final_dev = report.entries.last().map(|e| e.deviation).unwrap_or(f64::NAN);
    Ok(Table {
        columns: vec![
            "r",
            "lambda_re",
            "lambda_im",
            "lambda_total_re",
            "lambda_total_im",
            "lambda_ref_re",
            "lambda_ref_im",
            "rel_deviation_re",
            "derivative_norm",
            "alpha_star",
            "n_max",
        ],
        rows,
        meta: vec![("alpha_used", report.alpha_used), ("final_deviation", final_dev)],
        summary: format!(
            "local-limit: alpha* = {:.6}, deviation at smallest r = {final_dev:.3e}",
            report.alpha_used
        ),
    })
}

/// run: dispatch, write the output file, print a one-line summary.
pub fn run(config: &RunConfig) -> Result<()> {
    let table = match config.command {
        CommandKind::Kernel => run_kernel(config)?,
        CommandKind::Spectrum => run_spectrum(config)?,
        CommandKind::Classical => run_classical(config)?,
        CommandKind::CanonicalCheck => run_canonical_check(config)?,
        CommandKind::GroundState => run_ground_state(config)?,
        CommandKind::Trace => run_trace(config)?,
        CommandKind::LocalLimit => run_local_limit(config)?,
    };
    let rendered = match config.format {
        OutputFormat::Csv => render_csv(&table),
        OutputFormat::Json => render_json(config, &table),
    };
    let path = config.output_path();
    std::fs::write(&path, rendered.as_bytes())
        .map_err(|e| QplaError::Config(format!("cannot write {}: {e}", path.display())))?;
    println!("{} -> {}", table.summary, path.display());
    Ok(())
}

/// Process entry point; returns the process exit code.
pub fn main_entry() -> i32 {
    let cli = Cli::parse();
    let config = match parse_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    match run(&config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Result<RunConfig> {
        let cli = Cli::try_parse_from(args).expect("clap parse");
        parse_config(&cli)
    }

    #[test]
    fn defaults_are_filled() {
        let c = parse(&["qpla", "ground-state", "--r", "0.01"]).unwrap();
        assert_eq!(c.command, CommandKind::GroundState);
        assert_eq!(c.r, 0.01);
        assert_eq!(c.t_total, 1.0);
        assert_eq!(c.n, 2000);
        assert_eq!(c.hbar, 1.0);
        assert_eq!(c.format, OutputFormat::Csv);
        assert_eq!(c.alpha, AlphaChoice::Auto);
    }

    #[test]
    fn resonant_config_rejected() {
        // omega T = pi at r = 1/pi.
        let err = parse(&["qpla", "kernel", "--r", "0.3183098861"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(msg.contains("resonance") || msg.contains("resonant"), "{msg}");
    }

    #[test]
    fn invalid_format_rejected_by_clap() {
        let res = Cli::try_parse_from(["qpla", "spectrum", "--format", "xml"]);
        assert!(res.is_err());
    }

    #[test]
    fn alpha_parsing() {
        let c = parse(&["qpla", "spectrum", "--alpha", "0.5"]).unwrap();
        assert_eq!(c.alpha, AlphaChoice::Fixed(0.5));
        let c = parse(&["qpla", "spectrum", "--alpha", "auto"]).unwrap();
        assert_eq!(c.alpha, AlphaChoice::Auto);
        let err = parse(&["qpla", "spectrum", "--alpha", "fast"]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn config_file_merging_and_flag_override() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        std::fs::write(&path, r#"{"r": 0.05, "N": 500, "format": "json"}"#).unwrap();
        let c = parse(&["qpla", "spectrum", "--config", path.to_str().unwrap(), "--r", "0.02"])
            .unwrap();
        assert_eq!(c.r, 0.02); // flag wins
        assert_eq!(c.n, 500); // file fills the rest
        assert_eq!(c.format, OutputFormat::Json);
    }

    #[test]
    fn config_file_rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("config.json");
        std::fs::write(&path, r#"{"radius": 0.05}"#).unwrap();
        let err = parse(&["qpla", "spectrum", "--config", path.to_str().unwrap()]).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn r_list_parsing() {
        let c = parse(&["qpla", "local-limit", "--r-list", "0.02,0.01"]).unwrap();
        assert_eq!(c.r_list, vec![0.02, 0.01]);
    }
}
