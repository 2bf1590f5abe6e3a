//! `verify`: property suites over corpora, single graphs, groups, or replays.

use std::path::PathBuf;

use clap::Args;
use serde_json::json;
use twofold::corpus;
use twofold::group::{builtin, GroupAutomorphism};
use twofold::suites::{self, Counterexample, Suite};

use crate::input::{parse_graph, RawInput};
use crate::{CliError, Outcome};

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// gamma, parity, square, balls, identities, oracle-sweep, or group-bounds.
    #[arg(value_parser = parse_suite)]
    suite: Option<Suite>,
    /// A single graph (graph suites) or group name (group-bounds); omit to sweep.
    target: Option<String>,
    /// Largest order of the exhaustive corpus.
    #[arg(long, default_value_t = 6)]
    n_max: usize,
    /// Extra random reduced graphs of order 8 or 9.
    #[arg(long, default_value_t = 0)]
    random: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Largest group order swept by group-bounds.
    #[arg(long, default_value_t = 48)]
    max_order: usize,
    /// Involution for group-bounds; defaults to a sample.
    #[arg(long)]
    sigma: Option<String>,
    /// Re-run a counterexample file written by --dump.
    #[arg(long, conflicts_with_all = ["suite", "target"])]
    replay: Option<PathBuf>,
    /// Write the minimal counterexample here on failure.
    #[arg(long)]
    dump: Option<PathBuf>,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|_| {
        let names: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        format!("unknown suite {s:?}; expected one of {}", names.join(", "))
    })
}

pub fn run(args: VerifyArgs, digest: &mut String) -> Result<Outcome, CliError> {
    if let Some(path) = &args.replay {
        let raw = RawInput::resolve(path.to_str())?;
        *digest = raw.digest();
        let c: Counterexample =
            serde_json::from_slice(&raw.bytes).map_err(|e| CliError::input(format!("counterexample file: {e}")))?;
        let failures = c.replay()?;
        let ok = failures.is_empty();
        return Ok(Outcome::checked(json!({ "replay": c, "still_failing": !ok, "failures": failures }), ok));
    }
    let suite = args.suite.ok_or_else(|| CliError::input("a suite name or --replay is required"))?;
    if suite == Suite::GroupBounds {
        return group_bounds(&args);
    }
    let graphs = match &args.target {
        Some(t) => {
            let raw = RawInput::resolve(Some(t))?;
            *digest = raw.digest();
            let g = parse_graph(&raw, None)?.graph;
            if !suite.applies_to(&g) {
                return Err(CliError::from(twofold::Error::Precondition(format!(
                    "the {suite} suite does not apply to this graph"
                ))));
            }
            vec![g]
        }
        None => {
            let mut gs = suites::corpus_for(suite, args.n_max)?;
            gs.extend(corpus::random_reduced(args.seed, &[8, 9], args.random));
            gs
        }
    };
    let report = suites::run_graph_suite(suite, &graphs)?;
    let ok = report.passed();
    if let (false, Some(path), Some(min)) = (ok, &args.dump, &report.minimal) {
        let text = serde_json::to_string_pretty(min).expect("serializable");
        std::fs::write(path, text).map_err(|e| CliError::input(format!("writing {}: {e}", path.display())))?;
    }
    // the full failure list can be large; the report keeps the count and the minimal one
    Ok(Outcome::checked(
        json!({
            "suite": suite,
            "passed": ok,
            "checked": report.checked,
            "skipped": report.skipped,
            "failure_count": report.failures.len(),
            "minimal_counterexample": report.minimal,
        }),
        ok,
    ))
}

fn group_bounds(args: &VerifyArgs) -> Result<Outcome, CliError> {
    let groups = match &args.target {
        Some(name) => vec![builtin::by_name(name)?],
        None => builtin::catalogue(args.max_order),
    };
    let mut reports = Vec::new();
    for h in &groups {
        let sigmas = match &args.sigma {
            Some(s) => vec![(s.clone(), GroupAutomorphism::by_name(h, s)?)],
            None => suites::sigma_sample(h, 4),
        };
        for (name, sigma) in sigmas {
            reports.push(suites::check_group_bound(h, &sigma, &name)?);
        }
    }
    let ok = reports.iter().all(|r| r.holds);
    Ok(Outcome::checked(
        json!({ "suite": Suite::GroupBounds, "passed": ok, "checked": reports.len(), "reports": reports }),
        ok,
    ))
}
