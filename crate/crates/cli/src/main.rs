mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use natcon_core::fundamental::FClass;
use natcon_core::Error;

use commands::{Artifact, GenerateArgs, Output, Source};

/// Exact computations with natural connections on almost contact B-metric
/// structures.
///
/// Exit codes: 0 every assertion held, 1 an assertion failed, 2 usage error,
/// 3 parse error, 4 invalid input data, 5 unknown class, 6 singular matrix,
/// 7 i/o error.
#[derive(Parser)]
#[command(name = "natcon", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Forms file with θ, θ*, ω.
    #[arg(long)]
    forms: Option<PathBuf>,
    /// File holding F itself.
    #[arg(long = "f")]
    f: Option<PathBuf>,
}

impl SourceArgs {
    fn source(self) -> Source {
        match (self.forms, self.f) {
            (Some(p), _) => Source::Forms(p),
            (None, Some(p)) => Source::F(p),
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Emit a seeded artifact file.
    Generate {
        #[arg(value_enum)]
        kind: Artifact,
        /// Class of the generated F (fixture, forms, torsion).
        #[arg(long, default_value = "MAIN")]
        class: FClass,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Move the result to a seeded random basis and embed the structure.
        #[arg(long)]
        transport: bool,
        /// Frozen Lie fixture name.
        #[arg(long)]
        name: Option<String>,
    },
    /// Membership of F in F0, F1, F4, F5, F11 and MAIN.
    ClassifyF {
        #[arg(long = "in")]
        input: PathBuf,
        /// Assert membership in these classes.
        #[arg(long, value_delimiter = ',')]
        expect: Vec<FClass>,
    },
    /// Basic torsion class predicates, optionally a sum membership.
    ClassifyTorsion {
        #[arg(long = "in")]
        input: PathBuf,
        /// Comma separated classes, e.g. T13,T31,T41; membership is asserted.
        #[arg(long)]
        sum: Option<String>,
    },
    /// Torsion and Q of a family member, with naturality asserted.
    Torsion {
        #[arg(long)]
        params: PathBuf,
        #[command(flatten)]
        source: SourceArgs,
    },
    /// T0 from the closed form and from F, and their difference.
    Canonical {
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long)]
        n: Option<usize>,
    },
    /// Run every invariant suite over seeds 0..SEEDS.
    Verify {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 25)]
        seeds: u64,
    },
    /// From structure constants to F, its classes and the φB connection.
    Liegroup {
        #[arg(long = "in")]
        input: PathBuf,
        /// Also check a family member given by "alpha".
        #[arg(long)]
        params: Option<PathBuf>,
    },
}

fn run(command: Command) -> natcon_core::Result<Output> {
    match command {
        Command::Generate {
            kind,
            class,
            n,
            seed,
            transport,
            name,
        } => commands::generate(&GenerateArgs {
            kind,
            class,
            n,
            seed,
            transport,
            name,
        }),
        Command::ClassifyF { input, expect } => commands::classify_f_cmd(&input, &expect),
        Command::ClassifyTorsion { input, sum } => {
            commands::classify_torsion_cmd(&input, sum.as_deref())
        }
        Command::Torsion { params, source } => commands::torsion_cmd(&params, &source.source()),
        Command::Canonical { source, n } => commands::canonical_cmd(&source.source(), n),
        Command::Verify { n, seeds } => commands::verify_cmd(n, seeds),
        Command::Liegroup { input, params } => commands::liegroup_cmd(&input, params.as_deref()),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Parse(_) => 3,
        Error::Validation { .. }
        | Error::ShapeMismatch(_)
        | Error::BadData(_)
        | Error::BadDimension(_)
        | Error::InvalidStructure(_)
        | Error::InsufficientSamples(_) => 4,
        Error::UnknownClass(_) => 5,
        Error::Singular => 6,
        Error::Io(_) => 7,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match run(cli.command) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("natcon: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let body = match cli.format {
        Format::Json => out.json,
        Format::Text => out.text,
    };
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &body) {
                eprintln!("natcon: cannot write {}: {e}", path.display());
                return ExitCode::from(7);
            }
        }
        None => print!("{body}"),
    }
    ExitCode::from(if out.ok { 0 } else { 1 })
}
