use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use perispec::{
    analyze_matrix, analyze_phase_damping, analyze_pullover, detect_format, file_meta,
    parse_matrix, AnalysisReport, AnalyzeOptions,
};

/// Peripheral spectral analysis of finite stochastic matrices.
#[derive(Parser)]
#[command(name = "perispec", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze a stochastic matrix from a CSV or JSON file.
    Analyze {
        /// Input file; `.json` expects {"matrix": [[...], ...]}, anything else
        /// is parsed as header-less CSV.
        file: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Lift a stochastic matrix to the diagonal pull-over map on n×n matrices.
    Pullover {
        file: PathBuf,
        #[command(flatten)]
        opts: CommonOpts,
    },
    /// Analyze the two-angle phase-damping map on 2×2 matrices.
    #[command(name = "phase-damping")]
    PhaseDamping {
        /// First rotation angle, radians.
        #[arg(long)]
        alpha: f64,
        /// Second rotation angle, radians.
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        opts: CommonOpts,
    },
}

#[derive(Args)]
struct CommonOpts {
    /// Projection and algebra tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// Entries at or below this threshold are structural zeros.
    #[arg(long = "zero-tol", default_value_t = 1e-12)]
    zero_tol: f64,
    /// Decoherence-time threshold on the transient norm.
    #[arg(long, default_value_t = 1e-3)]
    epsilon: f64,
    /// Budget of repeated squarings for the projection limit.
    #[arg(long = "max-squarings", default_value_t = 64)]
    max_squarings: usize,
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl CommonOpts {
    fn analyze_options(&self) -> AnalyzeOptions {
        AnalyzeOptions {
            tol: self.tol,
            zero_tol: self.zero_tol,
            epsilon: self.epsilon,
            max_squarings: self.max_squarings,
        }
    }
}

fn run(cli: Cli) -> perispec::Result<(AnalysisReport, CommonOpts)> {
    match cli.command {
        Command::Analyze { file, opts } => {
            let (s, name) = parse_matrix(&file, detect_format(&file), 1e-9)?;
            let meta = file_meta(&file, &s, name)?;
            let report = analyze_matrix(&s, meta, &opts.analyze_options())?;
            Ok((report, opts))
        }
        Command::Pullover { file, opts } => {
            let (s, name) = parse_matrix(&file, detect_format(&file), 1e-9)?;
            let meta = file_meta(&file, &s, name)?;
            let report = analyze_pullover(&s, meta, &opts.analyze_options())?;
            Ok((report, opts))
        }
        Command::PhaseDamping { alpha, beta, opts } => {
            let report = analyze_phase_damping(alpha, beta, &opts.analyze_options())?;
            Ok((report, opts))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((report, opts)) => {
            let rendered = match opts.format {
                Format::Text => report.to_text(),
                Format::Json => {
                    let mut json = report.to_json();
                    json.push('\n');
                    json
                }
            };
            if let Some(path) = &opts.output {
                if let Err(e) = std::fs::write(path, rendered) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else {
                print!("{rendered}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
