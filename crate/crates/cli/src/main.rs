use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand};
use regulus_cli::report::{EXIT_OK, EXIT_USAGE};
use regulus_cli::script::FieldSpec;
use regulus_cli::suite::run_suite;
use regulus_cli::{parse_script, run, Settings};

#[derive(Parser, Debug)]
#[command(name = "regulus", version, about = "Graded invariants and asymptotics of ideal powers")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(clap::Args, Debug, Clone)]
struct RunFlags {
    /// Write the JSON report here
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
    /// Write the TSV report here
    #[arg(long, value_name = "FILE")]
    tsv: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Default window for power tables
    #[arg(long)]
    tmax: Option<usize>,
    /// Default window for reduction and saturation searches
    #[arg(long)]
    pmax: Option<usize>,
    /// Default number of sampled fibers
    #[arg(long)]
    samples: Option<usize>,
    /// Override every declared coefficient field: Q or F<prime>
    #[arg(long, value_parser = parse_field)]
    field: Option<FieldSpec>,
    /// Run independent commands concurrently
    #[arg(long)]
    parallel: bool,
    /// Seconds allowed per command; exceeded cells are reported as holes
    #[arg(long)]
    budget: Option<f64>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a script
    Run {
        script: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
    },
    /// Run every scenario in a directory against its expected sidecar
    Suite {
        dir: PathBuf,
        /// Write the aggregate JSON here
        #[arg(long, value_name = "FILE")]
        json: Option<PathBuf>,
    },
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    if s == "Q" {
        return Ok(FieldSpec::Rational);
    }
    let digits = s.strip_prefix('F').map(|d| d.trim_start_matches('(').trim_end_matches(')'));
    match digits.and_then(|d| d.parse::<u32>().ok()) {
        Some(p) => Ok(FieldSpec::Prime(p)),
        None => Err(format!("expected Q or F<prime>, got {s}")),
    }
}

impl RunFlags {
    fn settings(&self) -> Settings {
        Settings {
            seed: self.seed,
            tmax: self.tmax,
            pmax: self.pmax,
            samples: self.samples,
            field: self.field.clone(),
            parallel: self.parallel,
            budget: self.budget.map(Duration::from_secs_f64),
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), String> {
    fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display()))
}

fn run_command(script: &Path, flags: &RunFlags) -> Result<i32, String> {
    let text = fs::read_to_string(script).map_err(|e| format!("cannot read {}: {e}", script.display()))?;
    let parsed = parse_script(&text).map_err(|e| format!("{}:{e}", script.display()))?;
    let report = run(&parsed, &flags.settings()).map_err(|e| format!("{}:{e}", script.display()))?;
    if let Some(p) = &flags.json {
        write(p, &report.to_json_string())?;
    }
    if let Some(p) = &flags.tsv {
        write(p, &report.to_tsv())?;
    }
    if flags.json.is_none() && flags.tsv.is_none() {
        print!("{}", report.to_json_string());
    }
    eprint!("{}", report.summary());
    Ok(report.exit_code())
}

fn init_threads() {
    if let Some(n) = std::env::var("REGULUS_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    init_threads();
    let result = match &cli.command {
        Cmd::Run { script, flags } => run_command(script, flags),
        Cmd::Suite { dir, json } => run_suite(dir, &Settings::default()).map_err(|e| e.to_string()).and_then(|r| {
            print!("{}", r.render());
            if let Some(p) = json {
                write(p, &(serde_json::to_string_pretty(&r.to_json()).unwrap() + "\n"))?;
            }
            Ok(r.exit_code())
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
