use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use psic_core::bounds;
use psic_core::coloring::{verify, ColoringFile, FileError, VerificationReport};
use psic_core::oracle::{self, OracleResult};
use serde::Serialize;

mod config;
mod export;
mod solve;

use config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "psic", version, about = "Connected-pseudoachromatic index of complete graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the rank GA for every seed in a config file.
    Solve { config: PathBuf },
    /// Check a coloring file; exit status 0 iff complete and connected.
    Verify { file: PathBuf },
    /// Bounds table as CSV for n_min..=n_max.
    Bounds { n_min: usize, n_max: usize },
    /// Exact value by exhaustive search (n <= 6; n = 6 needs --budget).
    Oracle {
        n: usize,
        /// Maximum number of search nodes.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Render a coloring file.
    Export {
        file: PathBuf,
        #[arg(long, value_enum)]
        format: Format,
        /// Write here instead of stdout.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Classes,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Usage(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Io { .. } => 3,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn load_coloring(path: &Path) -> Result<ColoringFile, CliError> {
    ColoringFile::from_json(&read(path)?).map_err(|e| match e {
        FileError::Parse(err) => CliError::Invalid(format!("{}: {err}", path.display())),
        FileError::Invalid(err) => CliError::Invalid(format!("{}: field `colors`: {err}", path.display())),
    })
}

fn print_report(path: &Path, file: &ColoringFile, report: &VerificationReport) {
    println!("file: {}", path.display());
    println!("n: {}  palette: {}  colors used: {}", file.n, file.palette_size, report.color_count());
    let sizes: Vec<String> = report.class_sizes.iter().map(|(c, s)| format!("{c}:{s}")).collect();
    println!("class sizes: {}", sizes.join(" "));
    let comps: Vec<String> = report.class_components.iter().map(|(c, k)| format!("{c}:{k}")).collect();
    println!("class components: {}", comps.join(" "));
    let pairs: Vec<String> = report.uncovered_pairs.iter().map(|(a, b)| format!("({a},{b})")).collect();
    println!("uncovered pairs ({}): {}", pairs.len(), pairs.join(" "));
    println!("complete: {}", report.is_complete);
    println!("connected: {}", report.is_connected);
    println!("verdict: {}", if report.is_valid() { "VALID" } else { "INVALID" });
}

#[derive(Serialize)]
struct OracleJson {
    n: usize,
    status: oracle::OracleStatus,
    psi_c: Option<usize>,
    upper: usize,
    explored: u64,
    nodes: u64,
    witness: Option<ColoringFile>,
}

fn oracle_json(r: &OracleResult) -> String {
    let out = OracleJson {
        n: r.n,
        status: r.status,
        psi_c: r.psi_c,
        upper: r.upper,
        explored: r.explored,
        nodes: r.nodes,
        witness: r.witness.as_ref().map(|w| ColoringFile::new(w, None)),
    };
    serde_json::to_string_pretty(&out).expect("oracle result serializes")
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Solve { config } => {
            let text = read(&config)?;
            let base = config.parent().unwrap_or(Path::new("."));
            let cfg =
                RunConfig::from_toml(&text, base).map_err(|e| CliError::Usage(format!("{}: {e}", config.display())))?;
            let summaries = solve::solve(&cfg)?;
            print!("{}", solve::summary_csv(cfg.n, &summaries));
            let best = summaries.iter().map(|s| s.best_colors).max().unwrap_or(0);
            if let Some(s) = summaries.iter().find(|s| s.best_colors == best && s.solution.is_some()) {
                eprintln!(
                    "best verified coloring of K_{}: {best} colors ({})",
                    cfg.n,
                    s.solution.as_ref().unwrap().display()
                );
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { file } => {
            let parsed = load_coloring(&file)?;
            let coloring = parsed.coloring().map_err(|e| CliError::Invalid(e.to_string()))?;
            let report = verify(&coloring);
            print_report(&file, &parsed, &report);
            Ok(if report.is_valid() { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Bounds { n_min, n_max } => {
            let csv = bounds::bounds_csv(n_min, n_max).map_err(|e| CliError::Usage(e.to_string()))?;
            print!("{csv}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { n, budget } => {
            let r = oracle::exact_psi_c(n, budget).map_err(|e| CliError::Usage(e.to_string()))?;
            println!("{}", oracle_json(&r));
            Ok(ExitCode::SUCCESS)
        }
        Command::Export { file, format, output } => {
            let coloring = load_coloring(&file)?.coloring().map_err(|e| CliError::Invalid(e.to_string()))?;
            let text = match format {
                Format::Dot => export::to_dot(&coloring),
                Format::Classes => export::to_classes(&coloring),
            };
            match output {
                Some(path) => fs::write(&path, text).map_err(|source| CliError::Io { path, source })?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
