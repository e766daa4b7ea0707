use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod error;
mod paper;
mod workspace;

use error::CliError;

/// Transfer systems, incomplete Burnside rings and the splitting of rational
/// incomplete Mackey functors.
#[derive(Parser)]
#[command(name = "mackey", version)]
struct Cli {
    /// Machine-readable JSON on standard output.
    #[arg(long, global = true)]
    json: bool,
    /// Also write a Graphviz diagram to this path.
    #[arg(long, global = true, value_name = "PATH")]
    dot: Option<PathBuf>,
    /// Worker threads for enumeration and example runs.
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a group and its subgroup lattice.
    Group {
        /// Built-in name such as `cyclic:6`, or a group file.
        #[arg(long, conflicts_with_all = ["name", "file"])]
        group: Option<String>,
        #[arg(long, conflicts_with = "file")]
        name: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Validate, generate, enumerate and inspect transfer systems.
    Trsys {
        #[command(subcommand)]
        action: TrsysAction,
    },
    /// Inseparability classes and hulls.
    Partition(SystemArgs),
    /// Primitive idempotents of the incomplete Burnside ring.
    Idempotents(SystemArgs),
    /// Write the Burnside or a represented Mackey functor to a file.
    Functor {
        #[command(flatten)]
        system: SystemArgs,
        /// Represented by `G/K` instead of the Burnside functor.
        #[arg(long, value_name = "K")]
        represented: Option<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Split a Mackey functor along the idempotents.
    Split {
        #[arg(long, value_name = "FILE")]
        mackey: PathBuf,
        /// Directory for the summand files and the reassembly certificate.
        #[arg(long, value_name = "DIR")]
        out_dir: Option<PathBuf>,
    },
    /// Reproduce the worked examples and compare them with the goldens.
    PaperExamples {
        /// Only examples for this group, `c6` or `c8`.
        #[arg(long)]
        only: Option<String>,
        /// Read goldens from `<DIR>/<example>.json` instead of the built-in ones.
        #[arg(long, value_name = "DIR")]
        golden_dir: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum TrsysAction {
    /// Check a system file and report what closure adds.
    Validate {
        #[arg(long, value_name = "FILE")]
        system: PathBuf,
        /// Fail unless the listed pairs are already closed.
        #[arg(long)]
        strict: bool,
    },
    /// The least transfer system containing the given pairs.
    Generate {
        #[arg(long)]
        group: String,
        #[arg(long, default_value = "")]
        pairs: String,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Every transfer system on the group.
    Enumerate {
        #[arg(long)]
        group: String,
    },
    /// Disk-likeness and the maximal disk-like subsystem.
    Disklike(SystemArgs),
}

/// A transfer system given by file, or by group and generating pairs.
#[derive(Args, Clone)]
pub struct SystemArgs {
    #[arg(long, value_name = "FILE", conflicts_with_all = ["group", "pairs"])]
    system: Option<PathBuf>,
    #[arg(long)]
    group: Option<String>,
    /// Generating pairs such as `C2>C6, C1>C3`.
    #[arg(long, default_value = "")]
    pairs: String,
}

pub struct Ctx {
    pub json: bool,
    pub dot: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<String, CliError> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    let ctx = Ctx {
        json: cli.json,
        dot: cli.dot,
    };
    match cli.command {
        Command::Group { group, name, file } => {
            let source = match (group, name, file) {
                (Some(g), _, _) | (None, Some(g), _) => commands::GroupSource::Arg(g),
                (None, None, Some(f)) => commands::GroupSource::File(f),
                _ => return Err(CliError::Input("one of --group, --name or --file is required".into())),
            };
            commands::group(&ctx, source)
        }
        Command::Trsys { action } => match action {
            TrsysAction::Validate { system, strict } => commands::trsys_validate(&ctx, &system, strict),
            TrsysAction::Generate { group, pairs, output } => {
                commands::trsys_generate(&ctx, &group, &pairs, output.as_deref())
            }
            TrsysAction::Enumerate { group } => commands::trsys_enumerate(&ctx, &group),
            TrsysAction::Disklike(s) => commands::trsys_disklike(&ctx, &s),
        },
        Command::Partition(s) => commands::partition(&ctx, &s),
        Command::Idempotents(s) => commands::idempotents(&ctx, &s),
        Command::Functor {
            system,
            represented,
            output,
        } => commands::functor(&ctx, &system, represented.as_deref(), output.as_deref()),
        Command::Split { mackey, out_dir } => commands::split(&ctx, &mackey, out_dir.as_deref()),
        Command::PaperExamples { only, golden_dir } => paper::run(&ctx, only.as_deref(), golden_dir.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Mismatch(report)) => {
            // the report itself goes to stdout so diffs can be captured
            print!("{report}");
            eprintln!("error: verification mismatch");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
