//! `triwell`: spectra, modes, time evolution, EP3 search and wave-guide
//! mapping for the three-well PT-symmetric model.
//!
//! Exit status: 0 on success, 2 for invalid input, 3 for numerical failure.

mod commands;
mod config;
mod grid;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use grid::{ComplexList, Grid, RealList, Span};

#[derive(Parser, Debug)]
#[command(
    name = "triwell",
    version,
    about = "Three coupled wave guides with balanced gain and loss"
)]
struct Cli {
    /// Output format for data files.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Directory for output files (created if missing).
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// No summary on standard output.
    #[arg(long, global = true)]
    quiet: bool,
    /// key=value file with defaults for any long flag.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Eigenvalues over a grid of gain/loss values.
    Spectrum(SpectrumArgs),
    /// Wavefunction profiles of the bound modes.
    Modes(ModesArgs),
    /// Intensity |Ψ(t, x)|² of a mode superposition.
    Evolve(EvolveArgs),
    /// Third-order exceptional point for a middle-well depth.
    #[command(name = "find-ep3")]
    FindEp3(Ep3Args),
    /// Physical wave guide to model parameters.
    Waveguide(WaveguideArgs),
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    /// Gain/loss grid, VALUE or START:STOP:STEP.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Grid,
    /// Half distance between the outer wells.
    #[arg(long)]
    pub b: f64,
    /// Middle-well depth.
    #[arg(long = "big-gamma")]
    pub big_gamma: f64,
}

#[derive(Args, Debug)]
pub struct ModelArgs {
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub b: f64,
    #[arg(long = "big-gamma")]
    pub big_gamma: f64,
}

#[derive(Args, Debug)]
pub struct ModesArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Sample points, VALUE or START:STOP:STEP [default: 601 points on -b-10..b+10].
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<Grid>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WellArg {
    Left,
    Middle,
    Right,
}

#[derive(Args, Debug)]
pub struct EvolveArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    /// Well holding the initial Gaussian.
    #[arg(long, value_enum, default_value_t = WellArg::Left, conflicts_with = "coeffs")]
    pub ic: WellArg,
    /// Width of the initial Gaussian.
    #[arg(long, default_value_t = 1.0)]
    pub width: f64,
    /// Expansion coefficients instead of a Gaussian, e.g. `1,0,0.5-1i`.
    #[arg(long, allow_hyphen_values = true)]
    pub coeffs: Option<ComplexList>,
    /// Time grid [default: 601 points on 0..3 beat periods].
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<Grid>,
    /// Position grid [default: 601 points on -b-10..b+10].
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<Grid>,
}

#[derive(Args, Debug)]
pub struct Ep3Args {
    /// Middle-well depth.
    #[arg(long = "big-gamma")]
    pub big_gamma: f64,
    /// Starting point GAMMA,B,K for Newton.
    #[arg(long, conflicts_with = "guess_file", allow_hyphen_values = true)]
    pub guess: Option<RealList>,
    /// Starting point from an earlier ep3.json.
    #[arg(long = "guess-file")]
    pub guess_file: Option<PathBuf>,
    /// Also trace the family over LO:HI:N depths.
    #[arg(long)]
    pub trace: Option<Span>,
}

#[derive(Args, Debug)]
pub struct WaveguideArgs {
    /// Background refractive index.
    #[arg(long)]
    pub n0: f64,
    /// Real index contrast of the outer guides.
    #[arg(long = "delta-n")]
    pub delta_n: f64,
    /// Imaginary index contrast.
    #[arg(long = "delta-n-prime", default_value_t = 0.0)]
    pub delta_n_prime: f64,
    /// Real index contrast of the middle guide.
    #[arg(long = "delta-n-mid")]
    pub delta_n_mid: Option<f64>,
    /// Vacuum wavelength in μm.
    #[arg(long)]
    pub lambda0: f64,
    /// Guide width in μm.
    #[arg(long)]
    pub a: f64,
    /// Model eigenvalues to convert to propagation constants.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<ComplexList>,
    /// Model half-distance to convert to μm.
    #[arg(long)]
    pub b: Option<f64>,
}

/// Invalid input that is not caught by argument parsing.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Usage>() || cause.is::<std::io::Error>() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<triwell::Error>() {
            use triwell::Error::*;
            return match e {
                InvalidParameter(_) | InvalidGrid(_) | NonPositiveK(_) | UnsupportedOrder(_) => 2,
                _ => 3,
            };
        }
    }
    3
}

fn main() -> ExitCode {
    let args = match config::load_and_merge(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };

    let result = output::OutDir::create(&cli.out).and_then(|mut out| {
        let ctx = commands::Context {
            format: cli.format,
            quiet: cli.quiet,
        };
        match &cli.command {
            Command::Spectrum(a) => commands::spectrum(a, &ctx, &mut out),
            Command::Modes(a) => commands::modes(a, &ctx, &mut out),
            Command::Evolve(a) => commands::evolve(a, &ctx, &mut out),
            Command::FindEp3(a) => commands::find_ep3(a, &ctx, &mut out),
            Command::Waveguide(a) => commands::waveguide(a, &ctx, &mut out),
        }?;
        if !cli.quiet {
            for path in out.written() {
                println!("wrote {}", path.display());
            }
        }
        Ok(())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
