//! `construct`: build a family member, optionally verify it, emit graph6 and labels.

use std::path::Path;

use clap::{Args, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use twofold::constructions::{self, LabeledGraph};
use twofold::group::{builtin, FiniteGroup, GroupAutomorphism, GroupJson};
use twofold::semidirect::SemidirectZ2;
use twofold::{families, graph6};

use crate::{CliError, Outcome};

#[derive(Args, Debug)]
pub struct ConstructArgs {
    #[command(subcommand)]
    family: Family,
    /// Run the family's invariant checks before emitting.
    #[arg(long, global = true)]
    verify: bool,
    /// Print only the graph6 line instead of a JSON report.
    #[arg(long, global = true)]
    raw: bool,
}

#[derive(Args, Debug)]
struct GroupArgs {
    /// Built-in group (Z:n, Z2^:k, D:n, S:n, prod:A,B, trivial) or a JSON group file.
    group: String,
    /// Involutory automorphism: id, inv, conj:t, or an image list.
    #[arg(long)]
    sigma: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Family {
    /// The rigid skeleton R(n0).
    RSkeleton { n0: usize },
    /// The graph with two-fold projections H and γ matching σ.
    Hsigma {
        #[command(flatten)]
        group: GroupArgs,
        /// Generating set of size rank(H); defaults to the first one found.
        #[arg(long, value_delimiter = ',')]
        x: Option<Vec<usize>>,
    },
    /// Generalized Cayley graph GCay(H, σ, S).
    Gcay {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
    /// Graph realising the achievable set C = {(h,1) : h in SET}.
    Achieve {
        #[command(flatten)]
        group: GroupArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
    /// Cayley graph Cay(H, S).
    Cayley {
        /// Built-in group name or JSON group file.
        group: String,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
    },
    /// The graph M(k).
    M { k: usize },
    /// The graph M0(k).
    M0 { k: usize },
    /// Cayley graph of Z2^k with many TF-isomorphic mates.
    GrrZ2k { k: usize },
}

fn load_group(spec: &str) -> Result<(FiniteGroup, Option<GroupAutomorphism>), CliError> {
    if Path::new(spec).is_file() {
        let text = std::fs::read_to_string(spec).map_err(|e| CliError::input(format!("reading {spec}: {e}")))?;
        let j: GroupJson = serde_json::from_str(&text).map_err(|e| CliError::input(format!("group file {spec}: {e}")))?;
        return Ok(j.load()?);
    }
    Ok((builtin::by_name(spec)?, None))
}

fn group_and_sigma(args: &GroupArgs) -> Result<(FiniteGroup, GroupAutomorphism), CliError> {
    let (h, from_file) = load_group(&args.group)?;
    let sigma = match (&args.sigma, from_file) {
        (Some(s), _) => GroupAutomorphism::by_name(&h, s)?,
        (None, Some(s)) => s,
        (None, None) => GroupAutomorphism::identity(&h),
    };
    Ok((h, sigma))
}

#[derive(Serialize)]
struct Constructed {
    family: &'static str,
    params: Value,
    n: usize,
    edges: usize,
    graph6: String,
    labels: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    verification: Option<Verification>,
}

#[derive(Serialize)]
struct Verification {
    passed: bool,
    problems: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    details: Option<Value>,
}

pub fn run(args: ConstructArgs) -> Result<Outcome, CliError> {
    let verify = args.verify;
    let mut details = None;
    let (family, params, lg, problems): (&'static str, Value, LabeledGraph, Option<Vec<String>>) = match args.family {
        Family::RSkeleton { n0 } => {
            let lg = constructions::skeleton_r(n0)?;
            let p = verify.then(|| families::check_skeleton(n0, &lg.graph));
            ("r-skeleton", json!({ "n0": n0 }), lg, p)
        }
        Family::Hsigma { group, x } => {
            let (h, sigma) = group_and_sigma(&group)?;
            let lg = constructions::gamma_construction(&h, &sigma, x.as_deref())?;
            let p = if verify { Some(families::check_hsigma(&h, &sigma, &lg.graph)?.0) } else { None };
            ("hsigma", json!({ "group": group.group, "sigma": sigma.map(), "x": x }), lg, p)
        }
        Family::Gcay { group, set } => {
            let (h, sigma) = group_and_sigma(&group)?;
            let lg = constructions::gcay(&h, &sigma, &set)?;
            let p = verify.then(|| families::check_gcay(&h, &sigma, &lg.graph));
            ("gcay", json!({ "group": group.group, "sigma": sigma.map(), "set": set }), lg, p)
        }
        Family::Achieve { group, set } => {
            let (h, sigma) = group_and_sigma(&group)?;
            let sd = SemidirectZ2::new(&h, &sigma)?;
            let c: Vec<usize> = set.iter().map(|&a| sd.element(a, true)).collect();
            let lg = constructions::achievable_construction(&h, &sigma, &c)?;
            let p = if verify { Some(families::check_achievable(&h, &sigma, &c, &lg.graph)?) } else { None };
            ("achieve", json!({ "group": group.group, "sigma": sigma.map(), "set": set }), lg, p)
        }
        Family::Cayley { group, set } => {
            let (h, _) = load_group(&group)?;
            let lg = constructions::cayley(&h, &set)?;
            let p = verify.then(|| families::check_cayley(&h, &lg.graph));
            ("cayley", json!({ "group": group, "set": set }), lg, p)
        }
        Family::M { k } => {
            let lg = constructions::labeled(constructions::m_graph(k)?);
            let p = verify.then(|| families::check_m(k, &lg.graph));
            ("m", json!({ "k": k }), lg, p)
        }
        Family::M0 { k } => {
            let lg = constructions::m0_graph(k)?;
            let p = if verify { Some(families::check_m0(k, &lg.graph)?) } else { None };
            ("m0", json!({ "k": k }), lg, p)
        }
        Family::GrrZ2k { k } => {
            let lg = constructions::grr_z2k(k)?;
            let p = if verify {
                let r = families::check_grr(k, &lg.graph)?;
                let mut p = r.problems.clone();
                if !r.translations_certified {
                    p.push(format!("refinement stops at {} cells; translation group not certified", r.refinement_cells));
                }
                details = Some(serde_json::to_value(&r).expect("serializable"));
                Some(p)
            } else {
                None
            };
            ("grr-z2k", json!({ "k": k }), lg, p)
        }
    };
    let g6 = graph6::encode(&lg.graph)?;
    let verification = problems.map(|problems| Verification { passed: problems.is_empty(), problems, details });
    let ok = verification.as_ref().is_none_or(|v| v.passed);
    let out = Constructed {
        family,
        params,
        n: lg.graph.order(),
        edges: lg.graph.edge_count(),
        graph6: g6.clone(),
        labels: lg.labels,
        verification,
    };
    let mut o = Outcome::checked(out, ok);
    if args.raw {
        o.raw = Some(format!("{g6}\n"));
    }
    Ok(o)
}
