//! `chshstar`: compute and check values of the single-system CHSH* game.
//!
//! Exit codes: 0 success, 1 a computed result failed its consistency check,
//! 2 usage error (bad flags, invalid setting, unwritable output path).

mod commands;
mod report;
mod symbolic;

use std::path::PathBuf;
use std::process::ExitCode;

use chshstar_core::{OptimizerConfig, SettingKind, SettingSpec, DEFAULT_SEED};
use clap::{ArgGroup, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "chshstar",
    version,
    about = "Values of the single-system CHSH* game under different physical settings"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Seed for randomized routines.
    #[arg(long, global = true, env = "CHSHSTAR_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Setting {
    Unitary,
    Clifford,
    /// Reversible classical gates (use --dim 2 or 3).
    Reversible,
    Irreversible,
    /// Clifford gates plus Rz(epsilon) and its inverse.
    CliffordRz,
    /// The fixed qutrit strategy for the modulus-3 game.
    QutritQ3,
    /// Trit with shift gates, modulus-3 game.
    ClassicalQ3,
    /// Trit with all permutation gates, modulus-3 game.
    ClassicalQ3Perm,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Value of one setting, with a witness strategy.
    Value {
        #[arg(long, value_enum)]
        setting: Setting,
        /// System dimension (defaults to the setting's natural one).
        #[arg(long)]
        dim: Option<usize>,
        /// Rotation angle for clifford-rz, in (0, pi/2).
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = 32)]
        restarts: usize,
        #[arg(long, default_value_t = 4000)]
        iterations: usize,
        #[arg(long, default_value_t = 1e-13)]
        tolerance: f64,
        /// Also optimize the initial state and measurement (unitary only).
        #[arg(long)]
        free: bool,
    },
    /// Check the single-system / Bell-pair correspondence on random strategies.
    #[command(name = "verify-lemma1")]
    VerifyEquivalence {
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        n_random: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Success probability of the Rz(eps) strategy over an open grid on (0, pi/2).
    SweepEpsilon {
        #[arg(long, default_value_t = 101)]
        steps: usize,
    },
    /// Partial-erasure strategy: value and entropy cost.
    #[command(group(ArgGroup::new("input").required(true).args(["p", "target"])))]
    Landauer {
        /// Erasure probability.
        #[arg(long)]
        p: Option<f64>,
        /// Target success probability, or `tsirelson`.
        #[arg(long, value_parser = parse_target)]
        target: Option<f64>,
    },
    /// Modulus-3 game: classical trit values and the fixed qutrit strategy.
    Q3,
    /// Every headline value in one table.
    ReproduceAll,
}

fn parse_target(s: &str) -> Result<f64, String> {
    if s.eq_ignore_ascii_case("tsirelson") {
        return Ok(chshstar_core::tsirelson_value());
    }
    s.parse::<f64>().map_err(|e| format!("expected a number or `tsirelson`: {e}"))
}

fn setting_spec(setting: Setting, dim: Option<usize>, epsilon: Option<f64>) -> chshstar_core::Result<SettingSpec> {
    let (kind, natural) = match setting {
        Setting::Unitary => (SettingKind::Unitary, 2),
        Setting::Clifford => (SettingKind::Clifford, 2),
        Setting::Reversible => (SettingKind::ClassicalReversible, 2),
        Setting::Irreversible => (SettingKind::ClassicalIrreversible, 2),
        Setting::CliffordRz => (SettingKind::CliffordPlusRz(epsilon.unwrap_or(std::f64::consts::FRAC_PI_4)), 2),
        Setting::QutritQ3 => (SettingKind::QutritUnitaryFixed, 3),
        Setting::ClassicalQ3 => (SettingKind::ClassicalQ3Shift, 3),
        Setting::ClassicalQ3Perm => (SettingKind::ClassicalQ3Permutation, 3),
    };
    SettingSpec::new(kind, dim.unwrap_or(natural))
}

fn run(cli: &Cli) -> Result<report::Report, chshstar_core::Error> {
    match &cli.command {
        Command::Value { setting, dim, epsilon, restarts, iterations, tolerance, free } => {
            if epsilon.is_some() && *setting != Setting::CliffordRz {
                return Err(chshstar_core::Error::InvalidConfig("--epsilon only applies to clifford-rz".into()));
            }
            if *free && *setting != Setting::Unitary {
                return Err(chshstar_core::Error::InvalidConfig("--free only applies to unitary".into()));
            }
            let spec = setting_spec(*setting, *dim, *epsilon)?;
            let config = OptimizerConfig {
                restarts: *restarts,
                max_iterations: *iterations,
                tolerance: *tolerance,
                seed: cli.seed,
                initial_guess: None,
            };
            config.validate()?;
            let name = setting.to_possible_value().expect("no skipped variants").get_name().to_string();
            commands::value(spec, &name, &config, *free)
        }
        Command::VerifyEquivalence { n_random, tol } => {
            commands::verify_equivalence_sweep(*n_random as usize, cli.seed, *tol)
        }
        Command::SweepEpsilon { steps } => commands::sweep(*steps),
        Command::Landauer { p, target } => {
            let p = match (p, target) {
                (Some(p), None) => *p,
                (None, Some(t)) => chshstar_core::solve_erasure_probability(*t)?,
                _ => unreachable!("clap enforces exactly one of --p / --target"),
            };
            commands::landauer(p)
        }
        Command::Q3 => commands::q3(),
        Command::ReproduceAll => {
            commands::reproduce_all(&OptimizerConfig { seed: cli.seed, ..OptimizerConfig::default() })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let rendered = match cli.format {
        Format::Text => report.text(),
        Format::Json => report.json(),
        Format::Csv => match report.csv() {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(1);
            }
        },
    };
    match &cli.output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{rendered}"),
    }
    if report.ok() {
        ExitCode::SUCCESS
    } else {
        eprintln!("consistency check failed");
        ExitCode::from(1)
    }
}
