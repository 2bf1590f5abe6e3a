//! `twofold`: stability analysis, constructions, censuses and property
//! sweeps for two-fold automorphisms of graphs.

mod construct;
mod input;
mod verify;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use twofold::{families, graph6, search, tfiso, twofold as tf, Error};

use crate::construct::ConstructArgs;
use crate::input::{parse_graph, Format, RawInput};
use crate::verify::VerifyArgs;

const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_VERIFY: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "twofold", version, about = "Two-fold automorphisms and canonical double covers of graphs")]
struct Cli {
    /// Worker threads; defaults to the available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Cap on search-tree nodes for automorphism searches.
    #[arg(long, global = true, env = "TWOFOLD_NODE_BUDGET")]
    node_budget: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Stability report for one graph.
    Analyze {
        /// graph6 string, named graph (petersen, C:7, ...), file, or `-` for stdin.
        input: Option<String>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Build a graph from one of the families.
    Construct(ConstructArgs),
    /// Classify all graphs sharing the canonical double cover of the input.
    Census {
        input: Option<String>,
        /// Include witnesses with loops (all of Ant instead of Ant₀).
        #[arg(long)]
        loops: bool,
        /// Keep every witness graph, not just class representatives.
        #[arg(long)]
        keep_all: bool,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Run a property suite.
    Verify(VerifyArgs),
    /// Convert between graph formats.
    Convert {
        input: Option<String>,
        #[arg(long, value_enum)]
        from: Option<Format>,
        #[arg(long, value_enum, default_value = "graph6")]
        to: Format,
        /// Print the converted text instead of a JSON report.
        #[arg(long)]
        raw: bool,
    },
}

/// An error with its exit code.
#[derive(Debug)]
pub struct CliError {
    code: u8,
    kind: &'static str,
    message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, kind: "input", message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let (code, kind) = match e {
            Error::ResourceCap { .. } => (EXIT_RESOURCE, "resource_cap"),
            Error::Internal(_) => (EXIT_VERIFY, "internal"),
            Error::Parse { .. } => (EXIT_INPUT, "parse"),
            Error::Precondition(_) | Error::NotReduced(..) => (EXIT_INPUT, "precondition"),
            _ => (EXIT_INPUT, "input"),
        };
        CliError { code, kind, message: e.to_string() }
    }
}

/// What a command produced: a JSON payload, whether it counts as success,
/// and an optional raw rendering that replaces the report on stdout.
pub struct Outcome {
    pub result: Value,
    pub ok: bool,
    pub raw: Option<String>,
}

impl Outcome {
    pub fn ok(result: impl Serialize) -> Self {
        Outcome { result: serde_json::to_value(result).expect("serializable"), ok: true, raw: None }
    }

    pub fn checked(result: impl Serialize, ok: bool) -> Self {
        Outcome { ok, ..Outcome::ok(result) }
    }
}

#[derive(Serialize)]
struct Report {
    command: Vec<String>,
    input_digest: String,
    result: Value,
    timing: Timing,
    version: &'static str,
}

#[derive(Serialize)]
struct Timing {
    seconds: f64,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("twofold: cannot configure {t} threads: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    if let Some(b) = cli.node_budget {
        search::set_node_budget(b);
    }
    let start = Instant::now();
    let mut digest = String::new();
    let outcome = run(cli.command, &mut digest);
    if digest.is_empty() {
        digest = input::digest_of(argv[1..].join(" ").as_bytes());
    }
    let (result, code, raw) = match outcome {
        Ok(o) => (o.result, if o.ok { 0 } else { EXIT_VERIFY }, o.raw),
        Err(e) => {
            eprintln!("twofold: {}", e.message);
            (json!({ "error": { "kind": e.kind, "message": e.message } }), e.code, None)
        }
    };
    match raw {
        Some(text) => print!("{text}"),
        None => {
            let report = Report {
                command: argv[1..].to_vec(),
                input_digest: digest,
                result,
                timing: Timing { seconds: start.elapsed().as_secs_f64() },
                version: env!("CARGO_PKG_VERSION"),
            };
            println!("{}", serde_json::to_string(&report).expect("serializable"));
        }
    }
    ExitCode::from(code)
}

fn run(command: Command, digest: &mut String) -> Result<Outcome, CliError> {
    match command {
        Command::Analyze { input, format } => {
            let raw = RawInput::resolve(input.as_deref())?;
            *digest = raw.digest();
            let g = parse_graph(&raw, format)?.graph;
            Ok(Outcome::ok(tf::stability_report(&g, search::node_budget())?))
        }
        Command::Construct(args) => construct::run(args),
        Command::Census { input, loops, keep_all, format } => {
            let raw = RawInput::resolve(input.as_deref())?;
            *digest = raw.digest();
            let parsed = parse_graph(&raw, format)?;
            census(parsed, loops, keep_all)
        }
        Command::Verify(args) => verify::run(args, digest),
        Command::Convert { input, from, to, raw: as_raw } => {
            let raw = RawInput::resolve(input.as_deref())?;
            *digest = raw.digest();
            let g = parse_graph(&raw, from)?.graph;
            let text = match to {
                Format::Graph6 => format!("{}\n", graph6::encode(&g)?),
                Format::Edges => g.to_edge_list(),
                Format::Dot => g.to_dot(),
            };
            let mut o = Outcome::ok(json!({ "n": g.order(), "edges": g.edge_count(), "format": format!("{to:?}").to_lowercase(), "output": text }));
            if as_raw {
                o.raw = Some(text);
            }
            Ok(o)
        }
    }
}

fn census(parsed: input::GraphInput, loops: bool, keep_all: bool) -> Result<Outcome, CliError> {
    let g = parsed.graph;
    // Cayley graphs of the ℤ₂^k family are too large for the generic census;
    // their metadata routes them to the translation count.
    let family = parsed.metadata.as_ref().and_then(|m| m.get("family")).and_then(Value::as_str);
    if family == Some("grr-z2k") && !loops {
        let k = parsed
            .metadata
            .as_ref()
            .and_then(|m| m.pointer("/params/k"))
            .and_then(Value::as_u64)
            .ok_or_else(|| CliError::input("grr-z2k metadata lacks params.k"))? as usize;
        let r = families::check_grr(k, &g)?;
        let Some(count) = r.class_count else {
            return Err(CliError::from(Error::ResourceCap { what: "refinement did not certify the translation group", cap: 0 }));
        };
        let order = 1u64 << k;
        let ok = r.problems.is_empty();
        return Ok(Outcome::checked(
            json!({
                "method": "translations",
                "aut_pi_order": order,
                "ant0_size": r.ant0_size,
                "class_count": count,
                "identities": {
                    "lhs": r.ant0_size,
                    "rhs": count,
                    "harmonic_lhs": format!("{}/{}", r.ant0_size, order),
                    "harmonic_rhs": format!("{}/{}", count, order),
                    "ok": ok,
                },
                "grr": r,
            }),
            ok,
        ));
    }
    let t = tf::aut_pi(&g)?;
    let c = tfiso::census_from(&t, loops, keep_all)?;
    let json = c.to_json(&t);
    let ok = json.identities.ok;
    Ok(Outcome::checked(json, ok))
}
