use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use z2hodge::report::{analyse, load, Analysis, FanChoice, Format, Input};
use z2hodge::{Error, ErrorKind};

#[derive(Parser)]
#[command(name = "z2hodge", version, about = "Mod-2 Hodge numbers of toric varieties from lattice polytopes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Hodge table, h-vector and rightmost-column diagnostic
    Hodge(Common),
    /// Real Betti numbers, collapse and complex Betti numbers
    Betti(Common),
    /// Chow ranks against the Hodge diagonal
    Chow(Common),
    /// Sheaves on the dual fan and their exact sequences (reflexive input)
    DualityCheck(Common),
    /// Regularity depth of the dual fan and ray rank mod 2
    Regularity(Common),
    /// Everything
    Report(Common),
    /// List built-in polytopes
    Corpus,
}

#[derive(Clone, Copy, ValueEnum)]
enum FanArg {
    Normal,
    Face,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Table,
    Json,
}

#[derive(Args)]
struct Common {
    /// Polytope file: `d n` header, then n rows of d integers
    #[arg(required_unless_present = "corpus", conflicts_with = "corpus")]
    path: Option<PathBuf>,
    /// Built-in polytope instead of a file
    #[arg(long)]
    corpus: Option<String>,
    #[arg(long, value_enum, default_value = "normal")]
    fan: FanArg,
    #[arg(long, value_enum, default_value = "table")]
    format: FormatArg,
    /// Worker threads (default: available parallelism)
    #[arg(long)]
    threads: Option<usize>,
}

fn exit_code(e: &Error) -> ExitCode {
    ExitCode::from(match e.kind() {
        ErrorKind::Parse => 2,
        ErrorKind::Precondition => 3,
        ErrorKind::Internal => 4,
    })
}

fn execute(common: Common, analyses: BTreeSet<Analysis>) -> Result<bool, Error> {
    let input = match (&common.path, &common.corpus) {
        (_, Some(name)) => Input::Corpus(name.clone()),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse { line: 0, msg: format!("{}: {e}", path.display()) })?;
            Input::Text { name: path.display().to_string(), text }
        }
        (None, None) => unreachable!("clap enforces an input"),
    };
    let fan = match common.fan {
        FanArg::Normal => FanChoice::Normal,
        FanArg::Face => FanChoice::Face,
    };
    let format = match common.format {
        FormatArg::Table => Format::Table,
        FormatArg::Json => Format::Json,
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = common.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(|e| Error::Invariant(e.to_string()))?;
    let report = pool.install(|| {
        let (name, delta) = load(&input)?;
        analyse(name, &delta, fan, &analyses)
    })?;
    print!("{}", report.render(format));
    Ok(report.checks_pass())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let (common, analyses) = match cli.command {
        Command::Hodge(c) => (c, [Analysis::Hodge].into()),
        Command::Betti(c) => (c, [Analysis::Betti, Analysis::Maximality].into()),
        Command::Chow(c) => (c, [Analysis::Chow].into()),
        Command::DualityCheck(c) => (c, [Analysis::Duality, Analysis::Regularity].into()),
        Command::Regularity(c) => (c, [Analysis::Regularity].into()),
        Command::Report(c) => (c, BTreeSet::new()),
        Command::Corpus => {
            for name in z2hodge::corpus::names() {
                println!("{name}");
            }
            return ExitCode::SUCCESS;
        }
    };
    match execute(common, analyses) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: a consistency check failed");
            ExitCode::from(4)
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
