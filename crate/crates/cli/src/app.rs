use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mfdfa::synth::{generate, GeneratorKind, GeneratorSpec};

use crate::config::{
    parse_delimiter, parse_fit_range, AnalysisConfig, ColumnSelector, InputKind, MethodChoice,
    QGrid, ScaleSpec, SurrogateList, DEFAULT_OVERLAP_FRACTION, DEFAULT_REPLICATES,
};
use crate::error::{exit, CliError, Result};
use crate::export::{export_all, write_view, View};
use crate::report::AnalysisReport;
use crate::run::analyze;
use crate::summary::write_summary;

#[derive(Debug, Parser)]
#[command(name = "mfdfa", version, about = "Multifractal detrended fluctuation analysis (MF-DFA and Bi-OSW)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyse one column of a CSV file and write report.json plus plot CSVs.
    Analyze(AnalyzeArgs),
    /// Re-export one plot view from an existing report.
    Export(ExportArgs),
    /// Write a synthetic series as CSV.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Input CSV file.
    pub input: PathBuf,
    /// mfdfa, biosw or both.
    #[arg(long, default_value = "both")]
    pub method: MethodChoice,
    /// Detrending polynomial order (1 to 5).
    #[arg(long, default_value_t = 1)]
    pub order: usize,
    /// Comma-separated q values, or `default`.
    #[arg(long, default_value = "default", allow_hyphen_values = true)]
    pub q_grid: QGrid,
    /// `min:max:count` log-spaced scales, or `auto`.
    #[arg(long, default_value = "auto")]
    pub scales: ScaleSpec,
    /// Window overlap as a fraction of the scale, in (0, 0.5).
    #[arg(long, default_value_t = DEFAULT_OVERLAP_FRACTION)]
    pub overlap_frac: f64,
    /// Fit range `lo:hi`; repeat for several scaling regimes. Defaults to the
    /// whole scale grid.
    #[arg(long = "fit-range", value_parser = parse_fit_range)]
    pub fit_ranges: Vec<(usize, usize)>,
    /// Comma-separated surrogate modes: shuffle, fisher-yates, phase-single,
    /// phase-random, or none.
    #[arg(long, default_value = "shuffle,phase-single")]
    pub surrogates: SurrogateList,
    /// Surrogate replicates per mode.
    #[arg(long, default_value_t = DEFAULT_REPLICATES)]
    pub replicates: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Column name, or 0-based index.
    #[arg(long, default_value = "1")]
    pub column: ColumnSelector,
    /// price (converted to log returns) or return.
    #[arg(long, default_value = "price")]
    pub kind: InputKind,
    /// Field delimiter; `tab` for tabs.
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    pub delimiter: u8,
    #[arg(long, default_value = "mfdfa-out")]
    pub out_dir: PathBuf,
    /// Skip the tables on standard output.
    #[arg(long)]
    pub quiet: bool,
}

impl AnalyzeArgs {
    pub fn config(&self) -> AnalysisConfig {
        AnalysisConfig {
            input: self.input.clone(),
            column: self.column.clone(),
            kind: self.kind,
            delimiter: self.delimiter as char,
            method: self.method,
            order: self.order,
            q_grid: self.q_grid.0.clone(),
            scales: self.scales,
            overlap_fraction: self.overlap_frac,
            fit_ranges: self.fit_ranges.clone(),
            surrogates: self.surrogates.0.clone(),
            replicates: self.replicates,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    /// report.json written by `analyze`.
    pub report: PathBuf,
    /// fluctuation, hurst, tau or spectrum.
    #[arg(long)]
    pub view: String,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeneratorChoice {
    Gaussian,
    StudentT,
    Cascade,
    RandomWalk,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    pub kind: GeneratorChoice,
    #[arg(long)]
    pub length: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Degrees of freedom for student-t.
    #[arg(long, default_value_t = 3.0)]
    pub df: f64,
    /// Cascade weight in (0.5, 1).
    #[arg(long, default_value_t = 0.75)]
    pub p: f64,
    /// Draw which cascade half receives `p` at every split.
    #[arg(long)]
    pub randomize_halves: bool,
    /// Multiplier applied to the generated values.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    /// Treat the scaled values as log returns and write `length + 1` prices
    /// starting here.
    #[arg(long)]
    pub price_start: Option<f64>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs a parsed command and returns the process exit code.
pub fn execute(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Analyze(args) => run_analyze(&args),
        Command::Export(args) => run_export(&args),
        Command::Generate(args) => run_generate(&args),
    };
    match outcome {
        Ok(()) => exit::OK,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn write_file(path: &PathBuf, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.clone(),
        source,
    })
}

fn run_analyze(args: &AnalyzeArgs) -> Result<()> {
    let cfg = args.config();
    let (report, timings) = analyze(&cfg)?;
    fs::create_dir_all(&args.out_dir).map_err(|source| CliError::Write {
        path: args.out_dir.clone(),
        source,
    })?;
    write_file(&args.out_dir.join("report.json"), &report.to_json())?;
    let timings_json = serde_json::to_string_pretty(&timings).expect("timings serialize") + "\n";
    write_file(&args.out_dir.join("timings.json"), &timings_json)?;
    export_all(&report, &args.out_dir)?;
    if !args.quiet {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        write_summary(&report, &mut out)
            .and_then(|_| writeln!(out, "\nResults written to {}", args.out_dir.display()))
            .map_err(|source| CliError::Write {
                path: "<stdout>".into(),
                source,
            })?;
    }
    Ok(())
}

fn run_export(args: &ExportArgs) -> Result<()> {
    let view: View = args.view.parse()?;
    let report = AnalysisReport::load(&args.report)?;
    let mut buf = Vec::new();
    write_view(&report, view, &mut buf).expect("writing to memory");
    match &args.out {
        Some(path) => fs::write(path, &buf).map_err(|source| CliError::Write {
            path: path.clone(),
            source,
        }),
        None => io::stdout()
            .write_all(&buf)
            .map_err(|source| CliError::Write {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn run_generate(args: &GenerateArgs) -> Result<()> {
    let kind = match args.kind {
        GeneratorChoice::Gaussian => GeneratorKind::GaussianIid,
        GeneratorChoice::StudentT => GeneratorKind::StudentT { df: args.df },
        GeneratorChoice::Cascade => GeneratorKind::BinomialCascade {
            p: args.p,
            randomize_halves: args.randomize_halves,
        },
        GeneratorChoice::RandomWalk => GeneratorKind::RandomWalk,
    };
    if !(args.scale.is_finite() && args.scale != 0.0) {
        return Err(CliError::Config("--scale must be finite and non-zero".into()));
    }
    let series = generate::<f64>(&GeneratorSpec::new(kind, args.length, args.seed))?;
    let values: Vec<f64> = series.values().iter().map(|v| v * args.scale).collect();

    let mut buf = Vec::new();
    {
        let mut w = BufWriter::new(&mut buf);
        let io_err = |source| CliError::Write {
            path: "<buffer>".into(),
            source,
        };
        match args.price_start {
            Some(p0) => {
                if !(p0.is_finite() && p0 > 0.0) {
                    return Err(CliError::Config("--price-start must be positive".into()));
                }
                writeln!(w, "t,price").map_err(io_err)?;
                let mut log_price = p0.ln();
                writeln!(w, "0,{p0}").map_err(io_err)?;
                for (t, r) in values.iter().enumerate() {
                    log_price += r;
                    writeln!(w, "{},{}", t + 1, log_price.exp()).map_err(io_err)?;
                }
            }
            None => {
                writeln!(w, "t,value").map_err(io_err)?;
                for (t, v) in values.iter().enumerate() {
                    writeln!(w, "{t},{v}").map_err(io_err)?;
                }
            }
        }
        w.flush().map_err(io_err)?;
    }
    match &args.out {
        Some(path) => write_file(path, std::str::from_utf8(&buf).expect("ascii output")),
        None => io::stdout().write_all(&buf).map_err(|source| CliError::Write {
            path: "<stdout>".into(),
            source,
        }),
    }
}
