use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use relk_cli::commands::{self, Context, Outcome};
use relk_cli::error::CliError;
use relk_cli::problem::{Loaded, Settings};

#[derive(Parser)]
#[command(name = "relk", version, about = "Relative K-theory of homomorphisms between finite-dimensional C*-algebras")]
struct Cli {
    /// Numerical tolerance for every defect check [default: 1e-9]
    #[arg(long, global = true)]
    tolerance: Option<f64>,
    /// Nodes per axis of sampled paths and loops [default: 257]
    #[arg(long, global = true)]
    grid: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Output::Text)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Output {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// K0 and K1 of the algebras of a problem file
    Kgroups {
        file: String,
        #[arg(long)]
        alg: Option<String>,
    },
    /// Relative groups of a homomorphism with generator triples and exactness
    Relative {
        file: String,
        #[arg(long)]
        hom: Option<String>,
    },
    /// The six-term sequence of a ladder
    Sixterm {
        file: String,
        #[arg(long)]
        ladder: Option<String>,
    },
    /// A boundary map of a ladder applied to a triple over gamma
    Boundary {
        file: String,
        #[arg(long)]
        ladder: String,
        #[arg(long, value_parser = ["index", "exp"])]
        map: String,
        #[arg(long)]
        triple: String,
    },
    /// Validity of a triple, an optional certificate, and its class
    Verify {
        file: String,
        #[arg(long)]
        triple: String,
        #[arg(long)]
        certificate: Option<String>,
    },
    /// Runs the worked examples, lists them, or exports the bundled problem files
    Fixtures {
        #[arg(long)]
        list: bool,
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

fn run(cli: &Cli) -> (Option<Loaded>, &'static str, Result<Outcome, CliError>) {
    let load = |file: &str| -> Result<(Loaded, Context), CliError> {
        let text = commands::read_source(file)?;
        commands::load(&text, cli.tolerance, cli.grid)
    };
    macro_rules! with_file {
        ($name:expr, $file:expr, |$l:ident, $ctx:ident| $body:expr) => {
            match load($file) {
                Ok(($l, $ctx)) => {
                    let r = $body;
                    (Some($l), $name, r)
                }
                Err(e) => (None, $name, Err(e)),
            }
        };
    }
    match &cli.command {
        Command::Kgroups { file, alg } => with_file!("kgroups", file, |l, _ctx| commands::cmd_kgroups(&l, alg.as_deref())),
        Command::Relative { file, hom } => {
            with_file!("relative", file, |l, ctx| commands::cmd_relative(&l, hom.as_deref(), ctx))
        }
        Command::Sixterm { file, ladder } => {
            with_file!("sixterm", file, |l, ctx| commands::cmd_sixterm(&l, ladder.as_deref(), ctx))
        }
        Command::Boundary { file, ladder, map, triple } => {
            with_file!("boundary", file, |l, ctx| commands::cmd_boundary(&l, ladder, map, triple, ctx))
        }
        Command::Verify { file, triple, certificate } => {
            with_file!("verify", file, |l, ctx| commands::cmd_verify(&l, triple, certificate.as_deref(), ctx))
        }
        Command::Fixtures { list, export } => {
            let r = commands::context(&Settings::default(), cli.tolerance, cli.grid)
                .and_then(|ctx| commands::cmd_fixtures(*list, export.as_deref(), ctx));
            (None, "fixtures", r)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (loaded, name, result) = run(&cli);
    let out = match result {
        Ok(out) => out,
        Err(e) => {
            eprintln!("relk {name}: {e}");
            let mut out = Outcome { lines: vec![format!("error: {e}")], results: Default::default(), code: e.code };
            out.results.insert("error".into(), serde_json::json!(e.message));
            if cli.output == Output::Text {
                return ExitCode::from(e.code as u8);
            }
            out
        }
    };
    match cli.output {
        Output::Text => {
            for l in &out.lines {
                println!("{l}");
            }
        }
        Output::Machine => print!("{}", commands::machine_report(loaded.as_ref(), name, &out)),
    }
    ExitCode::from(out.code as u8)
}
