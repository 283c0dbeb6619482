use clap::{Args, Parser, Subcommand};
use qmh::config::read_config_file;
use qmh::experiments::{doublewell, doublewell_table, ising, ising_table};
use qmh::output::{write_csv, write_results};
use qmh::report::report;
use qmh::validate::validate;
use qmh::{CliError, Command, ExperimentConfig, Result, Settings};
use std::path::PathBuf;
use std::process::ExitCode;

/// Quantum Metropolis-Hastings experiments.
#[derive(Parser)]
#[command(name = "qmh", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Double-well table over precision m (penalised walk).
    Doublewell(DoubleWellArgs),
    /// Ising sweep over (β, m).
    Ising(IsingArgs),
    /// Run the invariant suite; exit 2 on any failure.
    Validate(ValidateArgs),
    /// Turn a results JSON into plot-data CSVs.
    Report(ReportArgs),
}

#[derive(Args)]
struct Common {
    /// INI config file; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Precision list, e.g. `1,2,3,4` or `3..11`.
    #[arg(long)]
    m: Option<String>,
    /// Penalty phase in radians.
    #[arg(long)]
    varphi: Option<String>,
    /// coherent, semiclassical or oracle.
    #[arg(long)]
    mode: Option<String>,
    /// Use the unpenalised walk.
    #[arg(long)]
    no_penalty: bool,
    /// Results JSON path; the CSV table goes next to it.
    #[arg(long)]
    out: Option<String>,
    /// Worker threads for sweep points.
    #[arg(long)]
    jobs: Option<String>,
    /// Largest register (qubits) a run may use.
    #[arg(long)]
    sim_cap: Option<String>,
    /// Largest dense matrix dimension.
    #[arg(long)]
    dense_cap: Option<String>,
}

#[derive(Args)]
struct DoubleWellArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    side: Option<String>,
    #[arg(long)]
    temperature: Option<String>,
    /// Also run the unpenalised walk at m = 5.
    #[arg(long)]
    compare_unpenalised: bool,
}

#[derive(Args)]
struct IsingArgs {
    #[command(flatten)]
    common: Common,
    /// `start:stop:step` or a list.
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    spins: Option<String>,
    #[arg(long)]
    coupling: Option<String>,
    #[arg(long)]
    field: Option<String>,
}

#[derive(Args)]
struct ValidateArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    varphi: Option<String>,
    #[arg(long)]
    dense_cap: Option<String>,
    /// Deliberate fault for mutation testing (`penalty-off`).
    #[arg(long)]
    mutate: Option<String>,
}

#[derive(Args)]
struct ReportArgs {
    /// Results JSON from `doublewell` or `ising`.
    results: PathBuf,
    /// Output directory (defaults to the results file's directory).
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn settings(command: Command, config: &Option<PathBuf>, flags: &[(&str, Option<String>)]) -> Result<ExperimentConfig> {
    let mut s = match config {
        Some(path) => read_config_file(path, command)?,
        None => Settings::new(),
    };
    for (key, value) in flags {
        if let Some(v) = value {
            s.insert(key.to_string(), v.clone());
        }
    }
    ExperimentConfig::from_settings(command, &s)
}

fn common_flags(c: &Common) -> Vec<(&'static str, Option<String>)> {
    vec![
        ("m", c.m.clone()),
        ("varphi", c.varphi.clone()),
        ("mode", c.mode.clone()),
        ("no-penalty", c.no_penalty.then(|| "true".to_string())),
        ("out", c.out.clone()),
        ("jobs", c.jobs.clone()),
        ("sim-cap", c.sim_cap.clone()),
        ("dense-cap", c.dense_cap.clone()),
    ]
}

fn save(cfg: &ExperimentConfig, results: &[qmh_filter::PipelineResult], table: (Vec<String>, Vec<Vec<String>>)) -> Result<()> {
    write_results(&cfg.out, results)?;
    let csv_path = cfg.out.with_extension("csv");
    write_csv(&csv_path, &table.0, &table.1)?;
    println!("{}", table.0.join(","));
    for row in &table.1 {
        println!("{}", row.join(","));
    }
    eprintln!("wrote {} and {}", cfg.out.display(), csv_path.display());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Cmd::Doublewell(a) => {
            let mut flags = common_flags(&a.common);
            flags.extend([
                ("side", a.side),
                ("temperature", a.temperature),
                ("compare-unpenalised", a.compare_unpenalised.then(|| "true".to_string())),
            ]);
            let cfg = settings(Command::DoubleWell, &a.common.config, &flags)?;
            let results = doublewell(&cfg)?;
            save(&cfg, &results, doublewell_table(&results))
        }
        Cmd::Ising(a) => {
            let mut flags = common_flags(&a.common);
            flags.extend([("beta", a.beta), ("spins", a.spins), ("coupling", a.coupling), ("field", a.field)]);
            let cfg = settings(Command::Ising, &a.common.config, &flags)?;
            let results = ising(&cfg)?;
            save(&cfg, &results, ising_table(&results))
        }
        Cmd::Validate(a) => {
            let flags = [("varphi", a.varphi), ("dense-cap", a.dense_cap), ("mutate", a.mutate)];
            let cfg = settings(Command::Validate, &a.config, &flags)?;
            let report = validate(&cfg)?;
            for check in &report.checks {
                println!("{}", check.line());
            }
            for line in &report.info {
                println!("INFO {line}");
            }
            match report.failures() {
                0 => Ok(()),
                n => Err(CliError::Validation(n)),
            }
        }
        Cmd::Report(a) => {
            let dir = a
                .out_dir
                .unwrap_or_else(|| a.results.parent().map(PathBuf::from).unwrap_or_default());
            for path in report(&a.results, &dir)? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Exit status 2 is reserved for validation failures.
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
