//! Command-line front end: parameter sweeps, validation runs, Monte Carlo
//! cross-checks and trajectory pair series, emitted as CSV/JSON/SVG.
//!
//! Times are dimensionless νt and rates are γ/ν throughout. Exit codes:
//! 0 success, 1 usage error, 2 validation failure.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use qnoise::emit::{emit, render_charts, Chart, Format, Series};
use qnoise::evolution::analytic_evolve;
use qnoise::measures::{linear_entropy, negativity_n, qjsd};
use qnoise::noise::NoiseParams;
use qnoise::states::{initial_density, maximally_mixed, Coupling, Family, SystemConfig};
use qnoise::sweep::{mc_compare, run_sweep, McCompareRow, MeasureSet, Mode, SweepSpec};
use qnoise::validate::{run_validate, Preset};

#[derive(Parser)]
#[command(
    name = "qnoise",
    version,
    about = "Entanglement dynamics of four qubits under random telegraph noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep the measures over a (νt, q, γ/ν) grid
    Sweep(SweepArgs),
    /// Run the validation suite and report each check
    Validate(ValidateArgs),
    /// Compare Monte Carlo evolution against the closed forms
    McCompare(McCompareArgs),
    /// Emit (linear entropy, measure) pair series along a time trajectory
    Trajectory(TrajectoryArgs),
}

#[derive(Args, Debug, Default)]
struct SweepArgs {
    /// Initial-state family: ghz | w
    #[arg(long)]
    family: Option<String>,
    /// Coupling topology: ce | ie
    #[arg(long)]
    coupling: Option<String>,
    /// Purities, comma separated
    #[arg(long, value_delimiter = ',')]
    q: Option<Vec<f64>>,
    /// γ/ν values, comma separated
    #[arg(long = "gamma-ratio", value_delimiter = ',')]
    gamma_ratio: Option<Vec<f64>>,
    /// Largest νt on the grid
    #[arg(long = "t-max")]
    t_max: Option<f64>,
    /// Number of grid points including νt = 0
    #[arg(long = "t-steps")]
    t_steps: Option<usize>,
    /// Evolution mode: analytic | mc
    #[arg(long)]
    mode: Option<String>,
    /// Monte Carlo trajectories (mc mode)
    #[arg(long)]
    trajectories: Option<usize>,
    /// Master seed (mc mode)
    #[arg(long)]
    seed: Option<u64>,
    /// Measures to compute: comma list or `all`
    #[arg(long)]
    measures: Option<String>,
    /// Output path (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv | json | svg
    #[arg(long)]
    format: Option<String>,
    /// JSON config file; explicit flags override its fields
    #[arg(long)]
    config: Option<PathBuf>,
}

/// JSON mirror of the sweep flags.
#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    family: Option<String>,
    coupling: Option<String>,
    q: Option<Vec<f64>>,
    gamma_ratio: Option<Vec<f64>>,
    t_max: Option<f64>,
    t_steps: Option<usize>,
    mode: Option<String>,
    trajectories: Option<usize>,
    seed: Option<u64>,
    measures: Option<String>,
    out: Option<PathBuf>,
    format: Option<String>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// Check preset: full | quick
    #[arg(long, default_value = "full")]
    preset: String,
    /// Write the machine-readable JSON report here
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct McCompareArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    coupling: String,
    #[arg(long, value_delimiter = ',', default_value = "0.5,1.0")]
    q: Vec<f64>,
    #[arg(
        long = "gamma-ratio",
        value_delimiter = ',',
        default_value = "0.1,10.0"
    )]
    gamma_ratio: Vec<f64>,
    /// Comparison times νt, comma separated
    #[arg(long = "t", value_delimiter = ',', default_value = "1.0,5.0,10.0")]
    t_points: Vec<f64>,
    #[arg(long, default_value_t = 20_000)]
    trajectories: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Largest acceptable trace distance
    #[arg(long, default_value_t = 0.02)]
    tolerance: f64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Args, Debug)]
struct TrajectoryArgs {
    #[arg(long)]
    family: String,
    #[arg(long)]
    coupling: String,
    #[arg(long, default_value_t = 1.0)]
    q: f64,
    #[arg(long = "gamma-ratio", default_value_t = 10.0)]
    gamma_ratio: f64,
    #[arg(long = "t-max", default_value_t = 30.0)]
    t_max: f64,
    #[arg(long = "t-steps", default_value_t = 301)]
    t_steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | json | svg
    #[arg(long, default_value = "csv")]
    format: String,
}

enum CliError {
    Usage(String),
    Validation(String),
}

impl From<qnoise::Error> for CliError {
    fn from(e: qnoise::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn configure_threads() {
    if let Ok(value) = std::env::var("QNOISE_THREADS") {
        match value.parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => eprintln!("warning: ignoring invalid QNOISE_THREADS={value:?}"),
        }
    }
}

fn write_output(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(())
        }
    }
}

fn run_sweep_cmd(args: SweepArgs) -> Result<(), CliError> {
    let file: FileConfig = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };

    let family: Family = args
        .family
        .or(file.family)
        .ok_or_else(|| CliError::Usage("missing --family (ghz|w)".into()))?
        .parse()?;
    let coupling: Coupling = args
        .coupling
        .or(file.coupling)
        .ok_or_else(|| CliError::Usage("missing --coupling (ce|ie)".into()))?
        .parse()?;
    let measures: MeasureSet = args
        .measures
        .or(file.measures)
        .as_deref()
        .unwrap_or("all")
        .parse()?;
    let mode: Mode = args
        .mode
        .or(file.mode)
        .as_deref()
        .unwrap_or("analytic")
        .parse()?;
    let format: Format = args
        .format
        .or(file.format)
        .as_deref()
        .unwrap_or("csv")
        .parse()?;

    let spec = SweepSpec {
        family,
        coupling,
        q_values: args.q.or(file.q).unwrap_or_else(|| vec![1.0]),
        gamma_over_nu_values: args
            .gamma_ratio
            .or(file.gamma_ratio)
            .unwrap_or_else(|| vec![0.1, 10.0]),
        t_max: args.t_max.or(file.t_max).unwrap_or(30.0),
        t_steps: args.t_steps.or(file.t_steps).unwrap_or(301),
        measures,
        mode,
        mc_trajectories: args.trajectories.or(file.trajectories).unwrap_or(20_000),
        seed: args.seed.or(file.seed).unwrap_or(42),
    };
    let records = run_sweep(&spec)?;
    let bytes = emit(&records, format)?;
    write_output(&args.out.or(file.out), &bytes)
}

fn run_validate_cmd(args: ValidateArgs) -> Result<(), CliError> {
    let preset: Preset = args.preset.parse()?;
    let report = run_validate(preset);
    print!("{}", report.render_text());
    if let Some(path) = &args.out {
        std::fs::write(path, report.to_json())
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Validation("validation failed".into()))
    }
}

fn mc_compare_csv(rows: &[McCompareRow]) -> String {
    let mut out = String::from(
        "t,q,gamma_over_nu,family,coupling,trace_distance,negativity_mc,negativity_analytic\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.t,
            r.q,
            r.gamma_over_nu,
            r.family,
            r.coupling,
            r.trace_distance,
            r.negativity_mc,
            r.negativity_analytic
        );
    }
    out
}

fn run_mc_compare_cmd(args: McCompareArgs) -> Result<(), CliError> {
    let family: Family = args.family.parse()?;
    let coupling: Coupling = args.coupling.parse()?;
    let rows = mc_compare(
        family,
        coupling,
        &args.q,
        &args.gamma_ratio,
        &args.t_points,
        args.trajectories,
        args.seed,
    )?;
    let bytes = match args.format.as_str() {
        "csv" => mc_compare_csv(&rows).into_bytes(),
        "json" => serde_json::to_vec_pretty(&rows).map_err(|e| CliError::Usage(e.to_string()))?,
        other => return Err(CliError::Usage(format!("unknown format {other:?}"))),
    };
    write_output(&args.out, &bytes)?;
    let worst = rows.iter().map(|r| r.trace_distance).fold(0.0f64, f64::max);
    if worst > args.tolerance {
        Err(CliError::Validation(format!(
            "max trace distance {worst:.4e} exceeds tolerance {:.4e}",
            args.tolerance
        )))
    } else {
        eprintln!(
            "mc-compare: {} rows, max trace distance {worst:.4e} (tolerance {:.4e})",
            rows.len(),
            args.tolerance
        );
        Ok(())
    }
}

fn run_trajectory_cmd(args: TrajectoryArgs) -> Result<(), CliError> {
    let family: Family = args.family.parse()?;
    let coupling: Coupling = args.coupling.parse()?;
    if args.t_steps < 2 {
        return Err(CliError::Usage("t-steps must be >= 2".into()));
    }
    if !args.t_max.is_finite() || args.t_max <= 0.0 {
        return Err(CliError::Usage("t-max must be positive".into()));
    }
    let cfg = SystemConfig::new(family, coupling, args.q)?;
    let p = NoiseParams::new(1.0, args.gamma_ratio)?;
    let rho_init = initial_density(&cfg);
    let mm = maximally_mixed(4);

    // rows of (νt, S_L, negativity, QJSD to initial, QJSD to maximally mixed)
    let mut rows: Vec<(f64, f64, f64, f64, f64)> = Vec::with_capacity(args.t_steps);
    for k in 0..args.t_steps {
        let t = args.t_max * k as f64 / (args.t_steps - 1) as f64;
        let rho = analytic_evolve(&cfg, &p, t)?.rho;
        rows.push((
            t,
            linear_entropy(&rho)?,
            negativity_n(&rho, 4)?,
            qjsd(&rho, &rho_init)?,
            qjsd(&rho, &mm)?,
        ));
    }

    let bytes = match args.format.as_str() {
        "csv" => {
            let mut out = String::from("t,linear_entropy,negativity,qjsd_init,qjsd_mm\n");
            for (t, sl, neg, di, dm) in &rows {
                let _ = writeln!(out, "{t},{sl},{neg},{di},{dm}");
            }
            out.into_bytes()
        }
        "json" => {
            let objects: Vec<serde_json::Value> = rows
                .iter()
                .map(|(t, sl, neg, di, dm)| {
                    serde_json::json!({
                        "t": t,
                        "linear_entropy": sl,
                        "negativity": neg,
                        "qjsd_init": di,
                        "qjsd_mm": dm,
                    })
                })
                .collect();
            serde_json::to_vec_pretty(&objects).map_err(|e| CliError::Usage(e.to_string()))?
        }
        "svg" => {
            let label = format!("{family}-{coupling} q={} γ/ν={}", args.q, args.gamma_ratio);
            let charts = vec![
                Chart {
                    title: format!("negativity vs mixedness — {label}"),
                    x_label: "linear entropy".into(),
                    y_label: "negativity".into(),
                    series: vec![Series {
                        label: label.clone(),
                        points: rows.iter().map(|r| (r.1, r.2)).collect(),
                    }],
                },
                Chart {
                    title: format!("state-space trajectory — {label}"),
                    x_label: "linear entropy".into(),
                    y_label: "QJSD".into(),
                    series: vec![
                        Series {
                            label: "to initial state".into(),
                            points: rows.iter().map(|r| (r.1, r.3)).collect(),
                        },
                        Series {
                            label: "to maximally mixed".into(),
                            points: rows.iter().map(|r| (r.1, r.4)).collect(),
                        },
                    ],
                },
            ];
            render_charts(&charts).into_bytes()
        }
        other => return Err(CliError::Usage(format!("unknown format {other:?}"))),
    };
    write_output(&args.out, &bytes)
}

fn main() -> ExitCode {
    configure_threads();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Sweep(args) => run_sweep_cmd(args),
        Command::Validate(args) => run_validate_cmd(args),
        Command::McCompare(args) => run_mc_compare_cmd(args),
        Command::Trajectory(args) => run_trajectory_cmd(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Validation(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
