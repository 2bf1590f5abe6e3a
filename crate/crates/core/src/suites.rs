//! Property suites over graph corpora, shared by the CLI and the acceptance run.
//!
//! Every check works on a single graph and returns the counterexamples it
//! found, so a failing graph can be replayed on its own.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::graph6;
use crate::group::{FiniteGroup, GroupAutomorphism};
use crate::oracle;
use crate::perm::Permutation;
use crate::search::node_budget;
use crate::semidirect::{sylow2_invariant_bound_check, two_part, SemidirectZ2, SylowReport};
use crate::tfiso;
use crate::twofold::{self, TwoFoldStructure};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Gamma,
    Parity,
    Square,
    Balls,
    Identities,
    OracleSweep,
    GroupBounds,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Gamma,
        Suite::Parity,
        Suite::Square,
        Suite::Balls,
        Suite::Identities,
        Suite::OracleSweep,
        Suite::GroupBounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Gamma => "gamma",
            Suite::Parity => "parity",
            Suite::Square => "square",
            Suite::Balls => "balls",
            Suite::Identities => "identities",
            Suite::OracleSweep => "oracle-sweep",
            Suite::GroupBounds => "group-bounds",
        }
    }

    /// Whether the suite runs on graphs (as opposed to groups).
    pub fn is_graph_suite(self) -> bool {
        self != Suite::GroupBounds
    }

    /// Whether a graph is in scope for this suite.
    pub fn applies_to(self, g: &Graph) -> bool {
        match self {
            Suite::Gamma | Suite::Parity | Suite::Square | Suite::OracleSweep => g.is_reduced(),
            Suite::Balls => g.complement().map(|c| c.is_reduced()).unwrap_or(false),
            Suite::Identities => g.is_connected() && g.is_reduced() && !g.is_bipartite(),
            Suite::GroupBounds => false,
        }
    }

    /// Run the per-graph check.
    pub fn check(self, g: &Graph) -> Result<Vec<Counterexample>> {
        match self {
            Suite::Gamma => check_gamma(g),
            Suite::Parity => check_parity(g),
            Suite::Square => check_square(g),
            Suite::Balls => check_balls(g),
            Suite::Identities => check_identities(g),
            Suite::OracleSweep => check_oracle(g),
            Suite::GroupBounds => Err(Error::Unsupported("group-bounds runs on groups".into())),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown suite {s:?}")))
    }
}

/// A single failing instance, replayable from its graph6 string.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub suite: Suite,
    pub graph6: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub permutation: Option<String>,
    pub detail: String,
}

impl Counterexample {
    fn new(suite: Suite, g: &Graph, pi: Option<&Permutation>, detail: impl Into<String>) -> Self {
        Counterexample {
            suite,
            graph6: graph6::encode(g).unwrap_or_default(),
            permutation: pi.map(|p| p.to_string()),
            detail: detail.into(),
        }
    }

    /// Re-run the suite on the stored graph.
    pub fn replay(&self) -> Result<Vec<Counterexample>> {
        let g = graph6::decode(self.graph6.trim())?;
        self.suite.check(&g)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checked: usize,
    pub skipped: usize,
    pub failures: Vec<Counterexample>,
    /// The failure on the smallest graph, by order and then edge count.
    pub minimal: Option<Counterexample>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn size_key(c: &Counterexample) -> (usize, usize, String) {
    match graph6::decode(&c.graph6) {
        Ok(g) => (g.order(), g.edge_count(), c.graph6.clone()),
        Err(_) => (usize::MAX, usize::MAX, c.graph6.clone()),
    }
}

/// Run a graph suite over `graphs`, skipping those out of scope.
pub fn run_graph_suite(suite: Suite, graphs: &[Graph]) -> Result<SuiteReport> {
    let in_scope: Vec<&Graph> = graphs.iter().filter(|g| suite.applies_to(g)).collect();
    let results: Vec<Vec<Counterexample>> = in_scope.par_iter().map(|g| suite.check(g)).collect::<Result<_>>()?;
    let failures: Vec<Counterexample> = results.into_iter().flatten().collect();
    let minimal = failures.iter().min_by_key(|c| size_key(c)).cloned();
    Ok(SuiteReport { suite, checked: in_scope.len(), skipped: graphs.len() - in_scope.len(), failures, minimal })
}

/// The exhaustive corpus up to `n_max`, restricted to the graphs in scope.
pub fn corpus_for(suite: Suite, n_max: usize) -> Result<Vec<Graph>> {
    if !(1..=corpus::CORPUS_MAX_N).contains(&n_max) {
        return Err(Error::ResourceCap { what: "exhaustive corpus order", cap: corpus::CORPUS_MAX_N as u64 });
    }
    Ok(corpus::all_graphs_up_to(n_max).into_iter().filter(|g| suite.applies_to(g)).collect())
}

fn structure(g: &Graph) -> Result<TwoFoldStructure> {
    twofold::aut_pi(g)
}

/// γ² = id, Fix(γ) = Aut, the edge relation, α on cosets, coclique orbits.
pub fn check_gamma(g: &Graph) -> Result<Vec<Counterexample>> {
    let s = Suite::Gamma;
    let t = structure(g)?;
    let els = t.aut_pi().elements();
    let gamma = t.gamma_index();
    let n = g.order();
    let mut out = Vec::new();
    for (i, pi) in els.iter().enumerate() {
        if gamma[gamma[i]] != i {
            out.push(Counterexample::new(s, g, Some(pi), "gamma is not an involution here"));
        }
        let gp = &els[gamma[i]];
        let broken = (0..n).flat_map(|v| (0..n).map(move |w| (v, w))).find(|&(v, w)| {
            g.has_edge(v, w) != g.has_edge(pi.apply(v), gp.apply(w))
        });
        if let Some((v, w)) = broken {
            out.push(Counterexample::new(s, g, Some(pi), format!("edge relation fails at ({v}, {w})")));
        }
        if t.im_alpha().binary_search(&i).is_ok() && !pi.cycles().iter().all(|c| g.is_coclique(c)) {
            out.push(Counterexample::new(s, g, Some(pi), "an orbit of this element of Im(alpha) has an edge"));
        }
    }
    let fix: BTreeSet<&Permutation> = t.aut().iter().map(|&i| &els[i]).collect();
    let aut = twofold::automorphism_group(g, node_budget())?;
    let aut_set: BTreeSet<&Permutation> = aut.elements().iter().collect();
    if fix != aut_set {
        out.push(Counterexample::new(
            s,
            g,
            None,
            format!("Fix(gamma) has {} elements but Aut has {}", fix.len(), aut_set.len()),
        ));
    }
    // α-fibres must be exactly the right cosets Aut·π
    let mut fibres: BTreeMap<Permutation, Vec<usize>> = BTreeMap::new();
    for (i, pi) in els.iter().enumerate() {
        fibres.entry(t.alpha_of(pi)?).or_default().push(i);
    }
    for members in fibres.values() {
        let pi = &els[members[0]];
        let coset: BTreeSet<usize> =
            t.aut().iter().map(|&a| t.aut_pi().index_of(&els[a].compose_unchecked(pi)).unwrap()).collect();
        if coset != members.iter().copied().collect() {
            out.push(Counterexample::new(s, g, Some(pi), "alpha fibre differs from the right Aut-coset"));
        }
    }
    if let Some(inst) = t.inst() {
        if t.im_alpha().len() as u64 != inst {
            out.push(Counterexample::new(
                s,
                g,
                None,
                format!("|Im(alpha)| = {} but inst = {inst}", t.im_alpha().len()),
            ));
        }
    }
    Ok(out)
}

/// `2 | |Aut|` iff `2 | |Aut^π|`.
pub fn check_parity(g: &Graph) -> Result<Vec<Counterexample>> {
    let t = structure(g)?;
    let (a, p) = (t.aut_order(), t.aut_pi_order());
    if (a % 2 == 0) != (p % 2 == 0) {
        return Ok(vec![Counterexample::new(Suite::Parity, g, None, format!("|Aut| = {a}, |Aut^pi| = {p}"))]);
    }
    Ok(Vec::new())
}

/// Aut^π ≤ Aut(Γ²), with equality under the three freeness hypotheses.
pub fn check_square(g: &Graph) -> Result<Vec<Counterexample>> {
    let r = twofold::square_subgroup_check(g)?;
    if r.ok {
        return Ok(Vec::new());
    }
    Ok(vec![Counterexample::new(
        Suite::Square,
        g,
        None,
        format!(
            "|Aut^pi| = {}, |Aut(square)| = {}, contained = {}, equal = {:?}, diameter-two stable = {:?}",
            r.aut_pi_order, r.aut_square_order, r.contained, r.equal, r.diameter_two_stable
        ),
    )])
}

/// Balls of every radius up to the diameter, and distance bands, under Aut^τ.
pub fn check_balls(g: &Graph) -> Result<Vec<Counterexample>> {
    let s = Suite::Balls;
    let tau = twofold::aut_tau(g)?;
    let radius = g.diameter().unwrap_or(g.order());
    let mut out: Vec<Counterexample> = twofold::ball_theorem_violations(g, &tau, radius)
        .into_iter()
        .map(|v| Counterexample {
            suite: s,
            graph6: graph6::encode(g).unwrap_or_default(),
            permutation: Some(v.permutation),
            detail: format!("ball of radius {} at {} is not carried to a ball", v.radius, v.vertex),
        })
        .collect();
    for pi in tau.aut_pi().elements() {
        if !twofold::verify_distance_parity(g, pi) {
            out.push(Counterexample::new(s, g, Some(pi), "distance band not preserved"));
        }
    }
    Ok(out)
}

/// Census identities, class sizes, and the switching-class correspondence.
pub fn check_identities(g: &Graph) -> Result<Vec<Counterexample>> {
    let s = Suite::Identities;
    let t = structure(g)?;
    let mut out = Vec::new();
    let r = tfiso::verify_identities(&t)?;
    if !r.ok {
        out.push(Counterexample::new(s, g, None, format!("identities fail: {r:?}")));
    }
    let census = tfiso::census_from(&t, false, false)?;
    if tfiso::switching_conjugacy_classes(&t, &census) != tfiso::switching_classes_by_conjugation(&t)? {
        out.push(Counterexample::new(s, g, None, "census classes differ from switching conjugacy classes"));
    }
    for &i in t.ant0() {
        if !tfiso::empty_orbit_check(g, t.element(i)) {
            out.push(Counterexample::new(s, g, Some(t.element(i)), "orbit of an element of Ant0 has an edge"));
        }
    }
    Ok(out)
}

/// Fast structure against the brute-force oracle, including the census.
pub fn check_oracle(g: &Graph) -> Result<Vec<Counterexample>> {
    let s = Suite::OracleSweep;
    let t = structure(g)?;
    let mut out = Vec::new();
    let fast: Vec<(Permutation, Permutation)> = t
        .aut_pi()
        .elements()
        .iter()
        .enumerate()
        .map(|(i, p)| (p.clone(), t.element(t.gamma_index()[i]).clone()))
        .collect();
    let brute = oracle::brute_aut_pi(g)?;
    if fast != brute {
        out.push(Counterexample::new(
            s,
            g,
            None,
            format!("Aut^pi has {} elements, oracle finds {}", fast.len(), brute.len()),
        ));
    }
    let aut: Vec<Permutation> = t.aut().iter().map(|&i| t.element(i).clone()).collect();
    if aut != oracle::brute_aut(g)? {
        out.push(Counterexample::new(s, g, None, "Aut differs from the oracle"));
    }
    if Suite::Identities.applies_to(g) {
        let census = tfiso::census_from(&t, false, false)?;
        let mut fast_classes: Vec<Vec<Permutation>> = census
            .classes
            .iter()
            .map(|c| c.members.iter().map(|&i| t.element(i).clone()).collect())
            .collect();
        fast_classes.sort();
        if fast_classes != oracle::brute_census(g, false)? {
            out.push(Counterexample::new(s, g, None, "census classes differ from pairwise isomorphism"));
        }
    }
    Ok(out)
}

/// Class-count bounds for one group and involutory automorphism.
#[derive(Clone, Debug, Serialize)]
pub struct GroupBoundReport {
    pub group: String,
    pub order: usize,
    pub sigma: String,
    pub class_count: usize,
    pub bound_2k: usize,
    pub sylow: Option<SylowReport>,
    pub holds: bool,
}

pub fn check_group_bound(h: &FiniteGroup, sigma: &GroupAutomorphism, sigma_name: &str) -> Result<GroupBoundReport> {
    let count = SemidirectZ2::new(h, sigma)?.count_tf_classes();
    let bound = two_part(h.order());
    let sylow = match sylow2_invariant_bound_check(h, sigma) {
        Ok(r) => Some(r),
        Err(Error::ResourceCap { .. }) => None,
        Err(e) => return Err(e),
    };
    let holds = count <= bound && sylow.as_ref().is_none_or(|r| r.holds);
    Ok(GroupBoundReport {
        group: h.name().to_string(),
        order: h.order(),
        sigma: sigma_name.to_string(),
        class_count: count,
        bound_2k: bound,
        sylow,
        holds,
    })
}

/// Involutory automorphisms to sample: identity, inversion when it is an
/// automorphism, and conjugation by each involution up to `max_conj` of them.
pub fn sigma_sample(h: &FiniteGroup, max_conj: usize) -> Vec<(String, GroupAutomorphism)> {
    let mut out = vec![("id".to_string(), GroupAutomorphism::identity(h))];
    if let Ok(inv) = GroupAutomorphism::inversion(h) {
        if !inv.is_identity() {
            out.push(("inv".to_string(), inv));
        }
    }
    let mut seen: BTreeSet<Vec<usize>> = out.iter().map(|(_, s)| s.map().to_vec()).collect();
    let involutions = (0..h.order()).filter(|&t| h.element_order(t) == 2);
    for t in involutions {
        if out.len() > max_conj {
            break;
        }
        if let Ok(c) = GroupAutomorphism::conjugation(h, t) {
            if seen.insert(c.map().to_vec()) {
                out.push((format!("conj:{t}"), c));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;
    use crate::group::builtin;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_sweeps_pass() {
        let graphs = corpus::all_graphs_up_to(5);
        for s in [Suite::Gamma, Suite::Parity, Suite::Square, Suite::Identities, Suite::OracleSweep] {
            let r = run_graph_suite(s, &graphs).unwrap();
            assert!(r.passed(), "{s}: {:?}", r.minimal);
            assert!(r.checked > 0);
        }
        let c7 = named::cycle(7).unwrap();
        assert!(check_balls(&c7).unwrap().is_empty());
    }

    #[test]
    fn counterexamples_replay() {
        let c = Counterexample::new(Suite::Parity, &named::petersen(), None, "synthetic");
        assert!(c.replay().unwrap().is_empty());
        let json = serde_json::to_string(&c).unwrap();
        let back: Counterexample = serde_json::from_str(&json).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn group_bound_for_s4() {
        let s4 = builtin::symmetric(4).unwrap();
        let r = check_group_bound(&s4, &GroupAutomorphism::identity(&s4), "id").unwrap();
        assert_eq!(r.bound_2k, 8);
        assert!(r.holds && r.class_count <= 8);
    }
}
