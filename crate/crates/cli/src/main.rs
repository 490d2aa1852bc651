//! `spectra-sect`: verify and construct spectral sections from JSON inputs.

mod commands;
mod config;
mod input;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use config::{ConfigFlags, RunConfig};
use output::Failure;

#[derive(Debug, Parser)]
#[command(name = "spectra-sect", version, about = "Spectral sections of truncated self-adjoint operators")]
struct Cli {
    /// JSON run configuration; flags given on the command line take precedence.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Worker threads for family sweeps.
    #[arg(long, global = true, env = "SPECTRA_SECT_JOBS")]
    jobs: Option<usize>,
    #[command(flatten)]
    flags: ConfigFlags,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a section certificate against a family.
    VerifySection {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
    },
    /// Build spectral sections from generalized sections.
    ConstructSection {
        #[arg(long)]
        family: PathBuf,
        /// JSON array of projections, one per sample; default chi+(A_x).
        #[arg(long)]
        gss: Option<PathBuf>,
        #[arg(long, default_value_t = 0.1, allow_negative_numbers = true)]
        delta: f64,
        /// Singular value bound of the generalized-section check.
        #[arg(long, default_value_t = 1e-6, allow_negative_numbers = true)]
        eps: f64,
    },
    /// Trivializing operators for a certificate.
    Trivialize {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
        #[arg(long, value_enum, default_value_t = Profile::Smoothstep)]
        profile: Profile,
    },
    /// Deform a family with a generalized section to an invertible one.
    Deform {
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        gss: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        steps: usize,
    },
    /// Check a Cl(1) section of an odd operator.
    Cl1Verify {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        grading: PathBuf,
        /// Projection to check; default the kernel Cl(1) section.
        #[arg(long)]
        projection: Option<PathBuf>,
        #[arg(long, allow_negative_numbers = true)]
        cutoff: f64,
    },
    /// Factor a sampled Dirac-type symbol.
    FactorSymbol {
        #[arg(long)]
        symbol: PathBuf,
    },
    /// Odd perturbation by the grading and its generalized section.
    SigmaTrick {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        grading: PathBuf,
    },
    /// Generate or analyse operator families.
    Family {
        #[command(subcommand)]
        command: FamilyCommand,
    },
    /// Built-in worked examples.
    Demo {
        #[command(subcommand)]
        command: DemoCommand,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Profile {
    Smoothstep,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    Fuglede,
    Shift,
    NoGss,
    Path,
    Rellich,
    Random,
}

#[derive(Debug, Subcommand)]
enum FamilyCommand {
    /// Emit a built-in family as JSON.
    Gen {
        #[arg(value_enum)]
        name: FamilyName,
        #[command(flatten)]
        params: commands::family::GenParams,
    },
    /// Riesz/graph continuity, lower bounds and tail obstruction of a family.
    Report {
        #[arg(long)]
        family: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum DemoCommand {
    /// Finite-difference Robin eigenvalue against the transcendental root.
    Rellich {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [0.2, 0.5, 0.9])]
        x: Vec<f64>,
        #[arg(long, default_value_t = 2000)]
        mesh: usize,
    },
    /// Flipped-eigenvalue family with a Riesz jump at the marker.
    Fuglede {
        #[arg(long, default_value_t = 32)]
        dim: usize,
    },
    /// A + x with the constant section chi+(A).
    Shift {
        #[arg(long, default_value_t = 21)]
        samples: usize,
    },
    /// Families whose tail types rule out a generalized section.
    NoGss {
        #[arg(long, default_value_t = 8)]
        dim: usize,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::VerifySection { .. } => "verify-section",
            Command::ConstructSection { .. } => "construct-section",
            Command::Trivialize { .. } => "trivialize",
            Command::Deform { .. } => "deform",
            Command::Cl1Verify { .. } => "cl1-verify",
            Command::FactorSymbol { .. } => "factor-symbol",
            Command::SigmaTrick { .. } => "sigma-trick",
            Command::Family { command: FamilyCommand::Gen { .. } } => "family gen",
            Command::Family { command: FamilyCommand::Report { .. } } => "family report",
            Command::Demo { command } => match command {
                DemoCommand::Rellich { .. } => "demo rellich",
                DemoCommand::Fuglede { .. } => "demo fuglede",
                DemoCommand::Shift { .. } => "demo shift",
                DemoCommand::NoGss { .. } => "demo no-gss",
            },
        }
    }
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<output::Outcome, Failure> {
    use commands::*;
    let out = match &cli.command {
        Command::VerifySection { family, certificate } => sections::verify(cfg, family, certificate)?,
        Command::ConstructSection {
            family,
            gss,
            delta,
            eps,
        } => sections::construct(cfg, family, gss.as_deref(), *delta, *eps)?,
        Command::Trivialize {
            family,
            certificate,
            profile,
        } => {
            let profile = match profile {
                Profile::Smoothstep => spectra_sect::sections::CutoffProfile::Smoothstep,
                Profile::Linear => spectra_sect::sections::CutoffProfile::Linear,
            };
            sections::trivialize(cfg, family, certificate, profile)?
        }
        Command::Deform { family, gss, steps } => sections::deform(cfg, family, gss.as_deref(), *steps)?,
        Command::Cl1Verify {
            operator,
            grading,
            projection,
            cutoff,
        } => graded::cl1_verify(cfg, operator, grading, projection.as_deref(), *cutoff)?,
        Command::FactorSymbol { symbol } => graded::factor_symbol(cfg, symbol)?,
        Command::SigmaTrick { operator, grading } => graded::sigma_trick(cfg, operator, grading)?,
        Command::Family { command } => match command {
            FamilyCommand::Gen { name, params } => family::generate(cfg, *name, params)?,
            FamilyCommand::Report { family } => family::report(cfg, family)?,
        },
        Command::Demo { command } => match command {
            DemoCommand::Rellich { x, mesh } => demo::rellich(x, *mesh)?,
            DemoCommand::Fuglede { dim } => demo::fuglede(cfg, *dim)?,
            DemoCommand::Shift { samples } => demo::shift(cfg, *samples)?,
            DemoCommand::NoGss { dim } => demo::no_gss(cfg, *dim)?,
        },
    };
    Ok(out)
}

fn setup(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    cfg.apply(&cli.flags);
    cfg.validate()?;
    match cli.jobs {
        Some(0) => return Err(Failure::usage("invalid_input", "--jobs must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::usage("invalid_input", e.to_string()))?,
        None => {}
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            eprint!("{}", e.render());
            let rendered = e.render().to_string();
            let first = rendered.lines().next().unwrap_or_default();
            let failure = Failure::usage("usage_error", first.trim_start_matches("error: "));
            print!("{}", output::render_failure("", &failure));
            return ExitCode::from(2);
        }
    };
    let command = cli.command.name();
    let result = setup(&cli).and_then(|cfg| {
        let outcome = run(&cli, &cfg)?;
        let text = output::render_outcome(command, &cfg, &outcome)?;
        Ok((outcome.passed, text))
    });
    let (code, text) = match result {
        Ok((passed, text)) => (if passed { 0 } else { 1 }, text),
        Err(failure) => {
            eprintln!("spectra-sect {command}: {}", failure.message());
            (failure.exit_code(), output::render_failure(command, &failure))
        }
    };
    if let Err(e) = output::write(cli.out.as_deref(), &text) {
        eprintln!("spectra-sect: cannot write output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(code as u8)
}
