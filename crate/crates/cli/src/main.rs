use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use instanton_cli::{
    cmd_epsilon, cmd_ottaviani, cmd_report, cmd_rs_verify, cmd_splitting, cmd_thooft_verify, CliError,
    Family, Options, VerificationReport, DEFAULT_BUDGET_S, DEFAULT_TRIALS,
};
use instanton_core::field::DEFAULT_PRIME;

#[derive(Parser)]
#[command(name = "instanton", version, about = "Verify symplectic instanton monads over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// 't Hooft data
    #[command(subcommand)]
    Thooft(ThooftCommand),
    /// Rao–Skiti data
    #[command(subcommand)]
    Rs(RsCommand),
    /// Moduli dimensions, rationality and Poincaré families
    Report(Common),
    /// Splitting types on random lines
    Splitting {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "thooft")]
        family: FamilyArg,
    },
}

#[derive(Subcommand)]
enum ThooftCommand {
    /// Symplecticity, sections, syzygies and orbit dimension of a datum
    Verify(Common),
    /// Dimension of the deformation space of 't Hooft data
    Ottaviani(Common),
}

#[derive(Subcommand)]
enum RsCommand {
    /// Symplecticity, sections, instability and orbit dimension of a datum
    Verify(Common),
    /// The epsilon family with an explicit syzygy basis
    Epsilon(Common),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Thooft,
    Rs,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Md,
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = DEFAULT_PRIME)]
    prime: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long = "budget-s", default_value_t = DEFAULT_BUDGET_S)]
    budget_s: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Datum file; its n and k override the flags
    #[arg(long)]
    input: Option<PathBuf>,
    /// Record per-check runtimes (reports are then no longer byte-stable)
    #[arg(long)]
    timings: bool,
}

impl Common {
    fn options(&self) -> Result<Options, CliError> {
        let input = match &self.input {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
                Some(serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?)
            }
            None => None,
        };
        Ok(Options {
            n: self.n,
            k: self.k,
            prime: self.prime,
            seed: self.seed,
            trials: self.trials,
            budget: Duration::from_secs(self.budget_s),
            timings: self.timings,
            input,
        })
    }
}

fn run(cli: &Cli) -> Result<(VerificationReport, Format), CliError> {
    let (common, result): (&Common, fn(&Options) -> Result<VerificationReport, CliError>) = match &cli.command {
        Command::Thooft(ThooftCommand::Verify(c)) => (c, cmd_thooft_verify),
        Command::Thooft(ThooftCommand::Ottaviani(c)) => (c, cmd_ottaviani),
        Command::Rs(RsCommand::Verify(c)) => (c, cmd_rs_verify),
        Command::Rs(RsCommand::Epsilon(c)) => (c, cmd_epsilon),
        Command::Report(c) => (c, cmd_report),
        Command::Splitting { common, family } => {
            let family = match family {
                FamilyArg::Thooft => Family::Thooft,
                FamilyArg::Rs => Family::Rs,
            };
            return Ok((cmd_splitting(&common.options()?, family)?, common.format));
        }
    };
    Ok((result(&common.options()?)?, common.format))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((report, format)) => {
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Md => print!("{}", report.to_markdown()),
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
