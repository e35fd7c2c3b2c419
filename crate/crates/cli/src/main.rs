//! `gpr` — claim detection and rebuttal responses over a general-purpose
//! rebuttal knowledge base.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{CliError, ConfigOverrides, Settings};

#[derive(Parser)]
#[command(
    name = "gpr",
    version,
    about = "Aggregate crowd labels, score claim mentions in debate speeches, and render template rebuttals",
    after_help = "Every configuration key can come from a key=value config file (--config), \
                  from the environment as GPR_<KEY>, or from the flag of the same name; \
                  flags win over environment, environment over file."
)]
struct Cli {
    #[command(flatten)]
    overrides: ConfigOverrides,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load every configured input, check cross-references, print counts.
    Validate,
    /// Aggregate raw crowd answers into gold verdicts and agreement reports.
    Aggregate,
    /// Score claim-speech pairs with the selected scorers and evaluate them.
    Evaluate,
    /// Render a rebuttal response for one speech.
    Rebut {
        /// Speech id from the speeches file.
        #[arg(long)]
        speech_id: Option<String>,
        /// Score a transcript outside the corpus (requires --motion-id and --stance).
        #[arg(long, value_name = "FILE")]
        transcript: Option<PathBuf>,
        /// Motion the transcript argues about.
        #[arg(long)]
        motion_id: Option<String>,
        /// Side the transcript's speaker argues: pro or con.
        #[arg(long)]
        stance: Option<String>,
    },
    /// Emit plot-ready CSV data for the configured figure kinds.
    Figures,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let settings = Settings::resolve(&cli.overrides)?;
    match &cli.command {
        Command::Validate => commands::validate(&settings),
        Command::Aggregate => commands::aggregate(&settings),
        Command::Evaluate => commands::evaluate(&settings),
        Command::Rebut {
            speech_id,
            transcript,
            motion_id,
            stance,
        } => commands::rebut(
            &settings,
            &commands::RebutTarget {
                speech_id: speech_id.clone(),
                transcript: transcript.clone(),
                motion_id: motion_id.clone(),
                stance: stance.clone(),
            },
        ),
        Command::Figures => commands::figures(&settings),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err @ CliError::Input(_)) => {
            eprintln!("{err}");
            ExitCode::from(1)
        }
        Err(err @ CliError::Config(_)) => {
            eprintln!("{err}");
            ExitCode::from(2)
        }
    }
}
