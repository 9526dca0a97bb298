use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use plsol::dynamics::validate_nice_set;
use plsol::mdp::MembershipQuery;
use plsol::oracle::{ball, search_bad_overlap};
use plsol::ssrp::decide_traced;
use plsol::{decide, PLMap, Rational};
use plsol_cli::{parse_argument, parse_arguments, render, report, InputError};
use serde_json::Value;

/// Decides solubility of finitely generated subgroups of PL+(I).
#[derive(Parser)]
#[command(name = "plsol", version)]
struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Picture {
    Svg,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the generated group is soluble. Exit 0 soluble, 1 not, 2 bad input.
    Solve {
        /// Include the step log in the report.
        #[arg(long)]
        trace: bool,
        elements: Vec<String>,
    },
    /// Decide membership of TARGET in the group of a nice set. Exit 0 member, 1 not, 2 bad input.
    Member {
        target: String,
        generators: Vec<String>,
        /// Comma-separated points r, one per generator; `-` keeps the default.
        #[arg(long, value_delimiter = ',')]
        witness_points: Vec<String>,
    },
    /// Breakpoints, orbitals, end slopes and one-bump factors of each element.
    Inspect { elements: Vec<String> },
    /// Plot element graphs and the orbital diagram.
    Render {
        #[arg(long, value_enum, default_value_t = Picture::Svg)]
        picture: Picture,
        elements: Vec<String>,
    },
    /// Search a word ball for a bad overlap. Exit 0 none found, 1 found, 2 bad input.
    Probe {
        /// Word length bound for the ball.
        #[arg(long, default_value_t = 3)]
        max_ball: usize,
        elements: Vec<String>,
    },
}

enum Failure {
    Input(InputError),
    Other(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

fn emit(format: Format, json: Value, text: String) {
    match format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&json).expect("serializable")
        ),
        Format::Text => print!("{text}"),
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let format = cli.format;
    match cli.command {
        Command::Solve { trace, elements } => {
            let gens = parse_arguments(&elements)?;
            let (verdict, events) = if trace {
                let (v, t) = decide_traced(&gens);
                (v, Some(t))
            } else {
                (decide(&gens), None)
            };
            emit(
                format,
                report::solve(&gens, &verdict, events.as_deref()),
                report::solve_text(&verdict, events.as_deref()),
            );
            Ok(if verdict.is_soluble() { 0 } else { 1 })
        }
        Command::Member {
            target,
            generators,
            witness_points,
        } => {
            let mut targets = parse_argument(1, &target)?;
            if targets.len() != 1 {
                return Err(Failure::Other(format!(
                    "expected one target element, found {}",
                    targets.len()
                )));
            }
            let target = targets.remove(0);
            let z = generators
                .iter()
                .enumerate()
                .map(|(i, g)| parse_argument(i + 2, g))
                .collect::<Result<Vec<_>, _>>()?
                .concat();
            let rs = witness_points
                .iter()
                .map(|p| match p.trim() {
                    "-" | "" => Ok(None),
                    p => p
                        .parse::<Rational>()
                        .map(Some)
                        .map_err(|e| Failure::Other(format!("--witness-points: {e}"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if rs.len() > z.len() {
                return Err(Failure::Other(format!(
                    "{} witness points for {} generators",
                    rs.len(),
                    z.len()
                )));
            }
            let nice = match validate_nice_set(&z, &rs) {
                Ok(n) => n,
                Err(e) => {
                    emit(
                        format,
                        report::violation(&e),
                        format!("invalid nice set: {e}\n"),
                    );
                    eprintln!("error: invalid nice set: {e}");
                    return Ok(2);
                }
            };
            let m = MembershipQuery {
                target,
                generators: nice,
            }
            .decide();
            emit(format, report::member(&m), report::member_text(&m));
            Ok(if m.member { 0 } else { 1 })
        }
        Command::Inspect { elements } => {
            let fs = parse_arguments(&elements)?;
            let json = Value::Array(fs.iter().map(report::inspect).collect());
            let text = fs
                .iter()
                .map(report::inspect_text)
                .collect::<Vec<_>>()
                .join("\n");
            emit(format, json, text);
            Ok(0)
        }
        Command::Render { picture, elements } => {
            let fs = parse_arguments(&elements)?;
            print!(
                "{}",
                match picture {
                    Picture::Svg => render::svg(&fs),
                    Picture::Text => render::text(&fs),
                }
            );
            Ok(0)
        }
        Command::Probe { max_ball, elements } => {
            let gens: Vec<PLMap> = parse_arguments(&elements)?;
            let size = ball(&gens, max_ball).len();
            let found = search_bad_overlap(&gens, max_ball);
            emit(
                format,
                report::probe(max_ball, size, found.as_ref()),
                report::probe_text(max_ball, size, found.as_ref()),
            );
            Ok(if found.is_some() { 1 } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Other(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
