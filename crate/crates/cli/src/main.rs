mod commands;
mod format;
mod manifest;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use casimir_core::material::ModelKind;
use casimir_core::{Execution, NumericsSettings, ZeroModePolicy};
use clap::{Args, Parser, Subcommand, ValueEnum};

use manifest::{OutputFormat, RunManifest, DEFAULT_SEPARATIONS_NM, DEFAULT_TEMPERATURE_K};

/// Bad input from the command line; reported with exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(name = "casimir", version, about = "Casimir pressure between metal plates at finite temperature")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Material description file (key = value lines).
    #[arg(long, global = true)]
    material: Option<PathBuf>,
    /// Override the model: drude, plasma, ideal, mim, tabulated, vacuum.
    #[arg(long, global = true)]
    model: Option<ModelKind>,
    /// Plate separations in nm, comma separated.
    #[arg(long = "separations-nm", global = true, value_delimiter = ',')]
    separations_nm: Option<Vec<f64>>,
    /// Temperatures in K, comma separated.
    #[arg(long = "temperatures-K", global = true, value_delimiter = ',')]
    temperatures_k: Option<Vec<f64>>,
    /// Zero-frequency treatment: default, tm-only, tm-te.
    #[arg(long = "zero-mode", global = true, default_value = "default")]
    zero_mode: ZeroModePolicy,
    /// Upper limit of the dimensionless momentum integral.
    #[arg(long, global = true)]
    ymax: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long = "int-tol", global = true)]
    int_tol: Option<f64>,
    /// Relative truncation tolerance of the Matsubara sum.
    #[arg(long = "sum-tol", global = true)]
    sum_tol: Option<f64>,
    /// Evaluate Matsubara terms on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Write results here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Table)]
    format: FormatArg,
    /// Write every Matsubara term of pressure-table runs to this CSV file.
    #[arg(long = "per-term-log", global = true)]
    per_term_log: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Table,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pressure on a separation x temperature grid.
    PressureTable,
    /// Compare computed pressures against a reference table.
    CompareModels {
        /// Reference CSV with a separation_nm column and *_mPa columns.
        #[arg(long)]
        fixture: PathBuf,
        /// Models to evaluate, comma separated (default: the material's model).
        #[arg(long, value_delimiter = ',')]
        models: Vec<ModelKind>,
    },
    /// Pressure ratios relative to the first listed temperature.
    TemperatureSweep,
    /// Entropy per unit area at one separation.
    EntropyScan {
        /// Temperature step of the central difference, K (default: automatic).
        #[arg(long = "dt-K")]
        dt_k: Option<f64>,
    },
    /// Permittivity on the imaginary axis from a real-frequency loss table.
    KkTransform {
        /// Two-column file: omega (rad/s), Im eps(omega).
        #[arg(long)]
        input: PathBuf,
        /// Imaginary frequencies, rad/s, comma separated.
        #[arg(long, value_delimiter = ',')]
        zeta: Vec<f64>,
        /// Log-spaced range: min,max,count.
        #[arg(long = "zeta-range", value_delimiter = ',')]
        zeta_range: Option<Vec<f64>>,
    },
}

fn build_manifest(g: &GlobalArgs, command: &Command) -> Result<RunManifest> {
    let mut settings = NumericsSettings::default();
    if let Some(v) = g.ymax {
        settings.y_max = v;
    }
    if let Some(v) = g.int_tol {
        settings.integral_tol = v;
    }
    if let Some(v) = g.sum_tol {
        settings.sum_tol = v;
    }
    if g.sequential {
        settings.execution = Execution::Sequential;
    }
    settings.record_terms = g.per_term_log.is_some();

    let default_temperatures = match command {
        Command::TemperatureSweep => vec![300.0, 350.0],
        Command::EntropyScan { .. } => vec![1.0, 2.0, 4.0, 10.0, 50.0, 100.0, 200.0, 300.0],
        _ => vec![DEFAULT_TEMPERATURE_K],
    };
    let default_separations = match command {
        Command::EntropyScan { .. } => vec![1000.0],
        _ => DEFAULT_SEPARATIONS_NM.to_vec(),
    };

    let manifest = RunManifest {
        material: g.material.clone(),
        model_override: g.model,
        separations_nm: g.separations_nm.clone().unwrap_or(default_separations),
        temperatures_k: g.temperatures_k.clone().unwrap_or(default_temperatures),
        policy: g.zero_mode,
        settings,
        output: g.output.clone(),
        format: match g.format {
            FormatArg::Table => OutputFormat::Table,
            FormatArg::Csv => OutputFormat::Csv,
        },
        per_term_log: g.per_term_log.clone(),
    };
    manifest.validate()?;
    Ok(manifest)
}

fn zeta_list(zeta: &[f64], range: Option<&[f64]>) -> Result<Vec<f64>> {
    let mut out = zeta.to_vec();
    if let Some(r) = range {
        let &[lo, hi, n] = r else {
            return Err(UsageError("--zeta-range expects three values: min,max,count".into()).into());
        };
        if !(lo > 0.0 && hi >= lo && n >= 1.0 && n.fract() == 0.0) {
            return Err(UsageError("--zeta-range expects min,max,count with 0 < min <= max and integer count".into()).into());
        }
        let n = n as usize;
        let step = if n > 1 { (hi / lo).ln() / (n - 1) as f64 } else { 0.0 };
        out.extend((0..n).map(|i| lo * (step * i as f64).exp()));
    }
    if let Some(z) = out.iter().find(|z| !(z.is_finite() && **z > 0.0)) {
        return Err(UsageError(format!("zeta must be positive, got {z}")).into());
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<()> {
    let manifest = build_manifest(&cli.global, &cli.command)?;
    let output = match &cli.command {
        Command::PressureTable => commands::pressure_table(&manifest)?,
        Command::CompareModels { fixture, models } => commands::compare_models(&manifest, fixture, models)?,
        Command::TemperatureSweep => commands::temperature_sweep(&manifest)?,
        Command::EntropyScan { dt_k } => {
            if let Some(dt) = dt_k.filter(|dt| !(dt.is_finite() && *dt > 0.0)) {
                return Err(UsageError(format!("--dt-K must be positive, got {dt}")).into());
            }
            commands::entropy(&manifest, *dt_k)?
        }
        Command::KkTransform { input, zeta, zeta_range } => {
            let zetas = zeta_list(zeta, zeta_range.as_deref())?;
            commands::kk_transform(input, &zetas, manifest.format)?
        }
    };

    match &manifest.output {
        Some(path) => std::fs::write(path, &output.csv).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{}", output.csv),
    }
    if let (Some(path), Some(log)) = (&manifest.per_term_log, &output.term_log) {
        std::fs::write(path, log).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if err.chain().any(|e| e.is::<UsageError>()) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
