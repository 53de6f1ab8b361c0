//! Command-line front end: coefficient tables, parameter sweeps,
//! verification suites, and the PT eigenvalue table.
//!
//! Exit codes: 0 on success, 1 on evaluation or verification failure, 2 on
//! usage/configuration errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tpdrive::coeffs::mode_coeffs;
use tpdrive::oracle::reduced_row;
use tpdrive::params::{classify_regime, BathSpec, SystemParams, EPS_REGIME_DEFAULT};
use tpdrive::precision::{pt_eigenvalues, BathSettings, FD_STEP_DEFAULT};
use tpdrive::sweep::{
    coeffs_header, fmt_f64, run_sweep, symplectic_defect_reported, write_coeffs_rows, AxisSpec,
    CoeffsRow, DetectorKind, OracleColumns, PipelineMode, SweepConfig, SweepError,
};
use tpdrive::verify::{run_suite, Suite};

#[derive(Parser)]
#[command(
    name = "tpdrive",
    version,
    about = "Frequency-estimation toolkit for a dissipative optical mode under two-photon driving"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the mode coefficients G(t), L(t) with the symplectic defect,
    /// optionally against the exact discretized-bath propagator.
    Coeffs(CoeffsArgs),
    /// Evaluate the uncertainty pipeline over a parameter grid.
    Sweep(SweepArgs),
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
    /// Tabulate the PT-symmetric eigenvalue pair over a drive grid.
    Pt(PtArgs),
}

#[derive(Args)]
struct CoeffsArgs {
    #[arg(long)]
    omega: f64,
    #[arg(long)]
    lambda: f64,
    #[arg(long)]
    gamma: f64,
    /// Time grid: a single value or start:stop:count[:log].
    #[arg(long)]
    t: String,
    /// Add exact-propagator columns from the discretized bath.
    #[arg(long)]
    oracle: bool,
    /// Bath modes for the oracle columns.
    #[arg(long, default_value_t = 4000)]
    nb: usize,
    /// Bath band width; defaults to 80 max(gamma, lambda, omega).
    #[arg(long)]
    band_width: Option<f64>,
    /// Explicit bath band as `min,max`, overriding --band-width.
    #[arg(long, allow_hyphen_values = true)]
    band: Option<String>,
    /// Output path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML sweep description; explicit flags override file values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Axis values: a number or min:max:count[:log].
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    lambda: Option<String>,
    #[arg(long)]
    gamma: Option<String>,
    #[arg(long)]
    t: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Input photon number alpha^2 (0 selects vacuum).
    #[arg(long)]
    alpha_sq: Option<String>,
    /// Measurement channel: photon | homodyne.
    #[arg(long)]
    detector: Option<String>,
    /// Pipeline selection: full | asymptotic | both.
    #[arg(long)]
    pipeline: Option<String>,
    /// Bath modes per grid point.
    #[arg(long)]
    nb: Option<usize>,
    /// Bath band width; defaults to 80 max(gamma, lambda, omega) per point.
    #[arg(long)]
    band_width: Option<f64>,
    /// Relative step of the frequency derivative.
    #[arg(long)]
    fd_step: Option<f64>,
    /// Reserved; recorded in the config for reproducibility.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// One of: symplectic, markov-convergence, spectral, asymptotics,
    /// wick-vs-decoupling, all.
    suite: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct PtArgs {
    #[arg(long)]
    omega: f64,
    #[arg(long)]
    gamma: f64,
    /// Drive magnitude: a number or min:max:count[:log].
    #[arg(long)]
    lambda: String,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn write_out(path: &Option<PathBuf>, content: &str) -> std::io::Result<()> {
    match path {
        Some(p) => fs::write(p, content),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(content.as_bytes())
        }
    }
}

fn usage_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(2)
}

fn eval_error(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(1)
}

fn cmd_coeffs(args: CoeffsArgs) -> ExitCode {
    let p = match SystemParams::new(args.omega, args.lambda, args.gamma) {
        Ok(p) => p,
        Err(e) => return usage_error(e),
    };
    let grid = match AxisSpec::parse(&args.t).and_then(|a| a.values()) {
        Ok(g) => g,
        Err(e) => return usage_error(e),
    };
    let bath = if args.oracle {
        let spec = if let Some(band) = &args.band {
            let parts: Vec<&str> = band.split(',').collect();
            let parsed: Option<(f64, f64)> = match parts.as_slice() {
                [lo, hi] => lo.trim().parse().ok().zip(hi.trim().parse().ok()),
                _ => None,
            };
            match parsed {
                Some((lo, hi)) => BathSpec::new(&p, args.nb, lo, hi),
                None => return usage_error(format!("cannot parse band `{band}` as min,max")),
            }
        } else {
            let width = args.band_width.unwrap_or_else(|| BathSpec::default_width(&p));
            BathSpec::centered(&p, args.nb, width)
        };
        match spec {
            Ok(b) => Some(b),
            Err(e) => return usage_error(e),
        }
    } else {
        None
    };

    let mut rows = Vec::with_capacity(grid.len());
    for &t in &grid {
        let mode = match mode_coeffs(&p, t) {
            Ok(m) => m,
            Err(e) => return eval_error(e),
        };
        let oracle = if let Some(bath) = &bath {
            match reduced_row(&p, bath, t, 1e-10) {
                Ok((om, _)) => Some(OracleColumns {
                    g: om.g,
                    l: om.l,
                    g_abs_err: (om.g - mode.g).norm(),
                    l_abs_err: (om.l - mode.l).norm(),
                }),
                Err(e) => return eval_error(e),
            }
        } else {
            None
        };
        rows.push(CoeffsRow {
            t,
            g: mode.g,
            l: mode.l,
            symplectic_defect: symplectic_defect_reported(&p, t),
            oracle,
        });
    }

    let mut buf = Vec::new();
    let _ = writeln!(buf, "{}", coeffs_header(bath.is_some()));
    if write_coeffs_rows(&rows, &mut buf).is_err() {
        return eval_error("failed to format table");
    }
    match write_out(&args.output, &String::from_utf8_lossy(&buf)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => eval_error(e),
    }
}

fn merge_sweep_config(args: &SweepArgs) -> Result<SweepConfig, String> {
    let mut config: Option<SweepConfig> = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("reading {path:?}: {e}"))?;
            Some(toml::from_str(&text).map_err(|e| format!("parsing {path:?}: {e}"))?)
        }
        None => None,
    };

    let parse_axis = |text: &Option<String>| -> Result<Option<AxisSpec>, String> {
        text.as_deref()
            .map(|t| AxisSpec::parse(t).map_err(|e| e.to_string()))
            .transpose()
    };
    let axis_flags = [
        parse_axis(&args.omega)?,
        parse_axis(&args.lambda)?,
        parse_axis(&args.gamma)?,
        parse_axis(&args.t)?,
        parse_axis(&args.theta)?,
        parse_axis(&args.alpha_sq)?,
    ];
    let detector = args
        .detector
        .as_deref()
        .map(|d| match d {
            "photon" => Ok(DetectorKind::Photon),
            "homodyne" => Ok(DetectorKind::Homodyne),
            other => Err(format!("unknown detector `{other}` (photon | homodyne)")),
        })
        .transpose()?;
    let pipeline = args
        .pipeline
        .as_deref()
        .map(|p| match p {
            "full" => Ok(PipelineMode::Full),
            "asymptotic" => Ok(PipelineMode::Asymptotic),
            "both" => Ok(PipelineMode::Both),
            other => Err(format!("unknown pipeline `{other}` (full | asymptotic | both)")),
        })
        .transpose()?;

    if config.is_none() {
        let [w, l, g, t, ..] = &axis_flags;
        let (Some(w), Some(l), Some(g), Some(t), Some(detector)) = (w, l, g, t, detector) else {
            return Err(
                "without --config, the flags --omega --lambda --gamma --t --detector are required"
                    .into(),
            );
        };
        config = Some(SweepConfig {
            omega: *w,
            lambda: *l,
            gamma: *g,
            t: *t,
            theta: AxisSpec::Fixed(0.0),
            alpha_sq: AxisSpec::Fixed(0.0),
            detector,
            pipeline: PipelineMode::Full,
            bath: BathSettings::default(),
            fd_step: FD_STEP_DEFAULT,
            seed: 0,
        });
    }
    let mut config = config.expect("populated above");

    let [w, l, g, t, th, n] = axis_flags;
    if let Some(a) = w {
        config.omega = a;
    }
    if let Some(a) = l {
        config.lambda = a;
    }
    if let Some(a) = g {
        config.gamma = a;
    }
    if let Some(a) = t {
        config.t = a;
    }
    if let Some(a) = th {
        config.theta = a;
    }
    if let Some(a) = n {
        config.alpha_sq = a;
    }
    if let Some(d) = detector {
        config.detector = d;
    }
    if let Some(p) = pipeline {
        config.pipeline = p;
    }
    if let Some(nb) = args.nb {
        config.bath.mode_count = nb;
    }
    if let Some(w) = args.band_width {
        config.bath.width = Some(w);
    }
    if let Some(h) = args.fd_step {
        config.fd_step = h;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    Ok(config)
}

fn cmd_sweep(args: SweepArgs) -> ExitCode {
    let config = match merge_sweep_config(&args) {
        Ok(c) => c,
        Err(e) => return usage_error(e),
    };
    let mut buf = Vec::new();
    match run_sweep(&config, &mut buf) {
        Ok(()) => {}
        Err(e @ SweepError::Config(_)) => return usage_error(e),
        Err(e) => return eval_error(e),
    }
    match write_out(&args.output, &String::from_utf8_lossy(&buf)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => eval_error(e),
    }
}

fn cmd_verify(args: VerifyArgs) -> ExitCode {
    let suites: Vec<Suite> = if args.suite == "all" {
        Suite::ALL.to_vec()
    } else {
        match Suite::parse(&args.suite) {
            Some(s) => vec![s],
            None => {
                return usage_error(format!(
                    "unknown suite `{}` (symplectic | markov-convergence | spectral | asymptotics | wick-vs-decoupling | all)",
                    args.suite
                ))
            }
        }
    };
    let reports: Vec<_> = suites.iter().map(|&s| run_suite(s)).collect();
    let all_pass = reports.iter().all(|r| r.pass);
    let json = if reports.len() == 1 {
        serde_json::to_string_pretty(&reports[0])
    } else {
        serde_json::to_string_pretty(&reports)
    }
    .expect("suite reports always serialize");
    if let Err(e) = write_out(&args.output, &format!("{json}\n")) {
        return eval_error(e);
    }
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn cmd_pt(args: PtArgs) -> ExitCode {
    let grid = match AxisSpec::parse(&args.lambda).and_then(|a| a.values()) {
        Ok(g) => g,
        Err(e) => return usage_error(e),
    };
    let mut buf = String::from("lambda,re_plus,im_plus,re_minus,im_minus,exceptional_point\n");
    for &lambda in &grid {
        let p = match SystemParams::new(args.omega, lambda, args.gamma) {
            Ok(p) => p,
            Err(e) => return usage_error(e),
        };
        let h = pt_eigenvalues(&p);
        let ep = classify_regime(&p, EPS_REGIME_DEFAULT).exceptional_point;
        buf.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_f64(lambda),
            fmt_f64(h.eigenvalues.0.re),
            fmt_f64(h.eigenvalues.0.im),
            fmt_f64(h.eigenvalues.1.re),
            fmt_f64(h.eigenvalues.1.im),
            ep,
        ));
    }
    match write_out(&args.output, &buf) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => eval_error(e),
    }
}

fn main() -> ExitCode {
    // worker pool size from the environment; default is the available
    // parallelism
    if let Ok(threads) = std::env::var("TPDRIVE_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match cli.command {
        Command::Coeffs(args) => cmd_coeffs(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Pt(args) => cmd_pt(args),
    }
}
