use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use catlift::migration::MigrationMode;
use catlift_cli::cmd::{self, Format, MigrateArgs, Outcome, QueryArgs, Workspace};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "catlift", version, about = "Query, constrain and migrate categorical databases")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    Delta,
    Sigma,
    Pi,
}

#[derive(Args)]
struct Common {
    /// Schema file; repeatable.
    #[arg(short = 's', long = "schema")]
    schemas: Vec<PathBuf>,
    /// Directory with one `<Object>.csv` per table.
    #[arg(short = 'i', long = "instance")]
    instance: Option<PathBuf>,
    /// Schema of the instance, if not the first one declared.
    #[arg(long)]
    schema_name: Option<String>,
    #[arg(long, default_value_t = catlift::DEFAULT_BOUND)]
    bound: usize,
    /// Output format; `triples` defaults to N-Triples, everything else to JSON.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
}

impl Common {
    fn workspace(self) -> Workspace {
        self.workspace_or(Format::Json)
    }

    fn workspace_or(self, default: Format) -> Workspace {
        Workspace {
            schemas: self.schemas,
            instance: self.instance,
            schema_name: self.schema_name,
            bound: self.bound,
            format: match self.format {
                Some(FormatArg::Json) => Format::Json,
                Some(FormatArg::Csv) => Format::Csv,
                None => default,
            },
            workers: self.workers,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check references and path equations of an instance.
    Validate {
        #[command(flatten)]
        common: Common,
    },
    /// Run a query file.
    Query {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'q', long = "query", required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        dedup_by: Option<String>,
        #[arg(long)]
        orbits: Option<String>,
        #[arg(long)]
        expect_some: bool,
    },
    /// Check a constraint file.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'c', long = "constraints", required = true)]
        files: Vec<PathBuf>,
    },
    /// Migrate an instance along a functor.
    Migrate {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        functor: PathBuf,
        #[arg(long)]
        name: Option<String>,
        #[arg(long, value_enum)]
        mode: ModeArg,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
    },
    /// Print the category of elements as triples.
    Triples {
        #[command(flatten)]
        common: Common,
    },
    /// Run a graph pattern.
    Pattern {
        #[command(flatten)]
        common: Common,
        #[arg(short = 'p', long = "pattern", required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        expect_some: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out: Outcome = match cli.command {
        Command::Validate { common } => cmd::validate(&common.workspace()),
        Command::Triples { common } => cmd::triples(&common.workspace_or(Format::Text)),
        Command::Query {
            common,
            files,
            name,
            dedup_by,
            orbits,
            expect_some,
        } => cmd::query(
            &common.workspace(),
            &QueryArgs {
                files,
                name,
                dedup_by,
                orbits,
                expect_some,
            },
        ),
        Command::Check { common, files } => cmd::check(&common.workspace(), &files),
        Command::Migrate {
            common,
            functor,
            name,
            mode,
            out,
        } => cmd::migrate(
            &common.workspace(),
            &MigrateArgs {
                functor,
                name,
                mode: match mode {
                    ModeArg::Delta => MigrationMode::Delta,
                    ModeArg::Sigma => MigrationMode::Sigma,
                    ModeArg::Pi => MigrationMode::Pi,
                },
                out,
            },
        ),
        Command::Pattern {
            common,
            files,
            expect_some,
        } => cmd::pattern(&common.workspace(), &files, expect_some),
    };
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
