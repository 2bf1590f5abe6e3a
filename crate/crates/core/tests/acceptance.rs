//! Acceptance run: one pass/fail line per criterion, nonzero exit on any failure.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use twofold::constructions;
use twofold::corpus;
use twofold::families;
use twofold::graph::named;
use twofold::group::{builtin, FiniteGroup, GroupAutomorphism};
use twofold::oracle;
use twofold::search::{cells_after_individualizing, DEFAULT_NODE_BUDGET};
use twofold::semidirect::SemidirectZ2;
use twofold::suites::{self, Suite};
use twofold::tfiso;
use twofold::twofold::{aut_pi, automorphism_group, double_cover, is_stable, TwoFoldStructure};
use twofold::{Graph, Verdict};

type Outcome = Result<String, String>;

struct Runner {
    failed: usize,
}

impl Runner {
    /// Run one criterion; `limit` is the wall-clock ceiling for the timed part.
    fn run(&mut self, id: &str, title: &str, limit: Option<Duration>, f: impl FnOnce() -> Outcome) {
        let start = Instant::now();
        let result = f();
        let elapsed = start.elapsed();
        let result = match (result, limit) {
            (Ok(msg), Some(l)) if elapsed > l => Err(format!("{msg}; took {elapsed:.2?}, limit {l:?}")),
            (r, _) => r,
        };
        match result {
            Ok(msg) => println!("[PASS] {id} {title}: {msg} ({elapsed:.2?})"),
            Err(msg) => {
                self.failed += 1;
                println!("[FAIL] {id} {title}: {msg} ({elapsed:.2?})");
            }
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn suite_outcome(suite: Suite, graphs: &[Graph]) -> Outcome {
    let r = suites::run_graph_suite(suite, graphs).map_err(err)?;
    ensure(r.passed(), || format!("{} failures, smallest: {:?}", r.failures.len(), r.minimal))?;
    Ok(format!("{} graphs, 0 failures", r.checked))
}

/// The groups and involutions of the construction criterion.
fn construction_cases() -> Vec<(&'static str, FiniteGroup, GroupAutomorphism)> {
    let mut out = Vec::new();
    let t = builtin::trivial();
    let tid = GroupAutomorphism::identity(&t);
    out.push(("trivial", t, tid));
    for n in [3, 5] {
        let z = builtin::cyclic(n).unwrap();
        let inv = GroupAutomorphism::inversion(&z).unwrap();
        out.push((if n == 3 { "Z3, inv" } else { "Z5, inv" }, z, inv));
    }
    let k = builtin::elementary_abelian_2(2).unwrap();
    let kid = GroupAutomorphism::identity(&k);
    out.push(("Z2^2, id", k, kid));
    let s3 = builtin::symmetric(3).unwrap();
    let sid = GroupAutomorphism::identity(&s3);
    out.push(("S3, id", s3.clone(), sid));
    let transposition = (0..6).find(|&a| s3.element_order(a) == 2).unwrap();
    let conj = GroupAutomorphism::conjugation(&s3, transposition).unwrap();
    out.push(("S3, conj by transposition", s3, conj));
    out
}

fn check_hsigma(h: &FiniteGroup, sigma: &GroupAutomorphism) -> Result<(Graph, TwoFoldStructure), String> {
    let g = constructions::gamma_construction(h, sigma, None).map_err(err)?.graph;
    let (rank, _) = h.rank().map_err(err)?;
    ensure(g.order() == h.order() * (7 + rank.max(5)), || format!("{} vertices", g.order()))?;
    let (problems, t) = families::check_hsigma(h, sigma, &g).map_err(err)?;
    ensure(problems.is_empty(), || problems.join("; "))?;
    Ok((g, t))
}

fn ac1() -> Outcome {
    let p = named::petersen();
    let start = Instant::now();
    let verdict = is_stable(&p).map_err(err)?;
    let t = aut_pi(&p).map_err(err)?;
    let fast = start.elapsed();
    ensure(verdict == Verdict::Stable, || format!("verdict {verdict:?}"))?;
    ensure(t.aut_order() == 120 && t.aut_pi_order() == 120, || {
        format!("|Aut| = {}, |Aut^pi| = {}", t.aut_order(), t.aut_pi_order())
    })?;
    ensure(t.inst() == Some(1), || format!("inst {:?}", t.inst()))?;
    ensure(fast < Duration::from_secs(1), || format!("analysis took {fast:?}"))?;
    let brute = oracle::brute_aut_pi(&p).map_err(err)?;
    ensure(brute.len() == 120, || format!("oracle finds {}", brute.len()))?;
    Ok(format!("stable, |Aut| = |Aut^pi| = 120 (oracle 120), inst 1, analysis {fast:.2?}"))
}

fn ac4() -> Outcome {
    let mut graphs = suites::corpus_for(Suite::OracleSweep, 7).map_err(err)?;
    let exhaustive = graphs.len();
    graphs.extend(corpus::random_reduced(0x7f01d, &[8, 9], 500));
    let r = suites::run_graph_suite(Suite::OracleSweep, &graphs).map_err(err)?;
    ensure(r.passed(), || format!("{} failures, smallest: {:?}", r.failures.len(), r.minimal))?;
    Ok(format!("{exhaustive} exhaustive + 500 random graphs, elements and gamma equal"))
}

fn ac5() -> Outcome {
    let mut notes = Vec::new();
    for (name, h, sigma) in construction_cases() {
        let start = Instant::now();
        let (g, _) = check_hsigma(&h, &sigma).map_err(|e| format!("{name}: {e}"))?;
        let took = start.elapsed();
        ensure(took < Duration::from_secs(60), || format!("{name} took {took:?}"))?;
        notes.push(format!("{name}: n={} {took:.1?}", g.order()));
    }
    Ok(notes.join("; "))
}

fn ac6() -> Outcome {
    let mut notes = Vec::new();
    for n in [3, 5] {
        let h = builtin::cyclic(n).unwrap();
        let inv = GroupAutomorphism::inversion(&h).unwrap();
        let (_, t) = check_hsigma(&h, &inv)?;
        ensure(t.aut_order() == 1, || format!("Z{n}: |Aut| = {}", t.aut_order()))?;
        ensure(t.aut_pi_order() % 2 == 1 && t.aut_pi().is_abelian(), || format!("Z{n}: Aut^pi not odd abelian"))?;
        let els = t.aut_pi().elements();
        let inverts = (0..els.len()).all(|i| *t.element(t.gamma_index()[i]) == els[i].inverse());
        ensure(inverts, || format!("Z{n}: gamma is not inversion"))?;
        ensure(t.inst() == Some(n as u64), || format!("Z{n}: inst {:?}", t.inst()))?;
        notes.push(format!("Z{n}: |Aut| = 1, |Aut^pi| = {n}, inst {n}"));
    }
    Ok(notes.join("; "))
}

fn ac7() -> Outcome {
    let graphs = suites::corpus_for(Suite::Identities, 6).map_err(err)?;
    let r = suites::run_graph_suite(Suite::Identities, &graphs).map_err(err)?;
    ensure(r.passed(), || format!("corpus: {:?}", r.minimal))?;
    for (name, h, sigma) in construction_cases() {
        let g = constructions::gamma_construction(&h, &sigma, None).map_err(err)?.graph;
        let fails = suites::check_identities(&g).map_err(|e| format!("{name}: {e}"))?;
        ensure(fails.is_empty(), || format!("{name}: {:?}", fails[0].detail))?;
    }
    Ok(format!("{} corpus graphs and 6 constructions, loopless and loop variants exact", r.checked))
}

fn ac8() -> Outcome {
    let graphs = suites::corpus_for(Suite::Identities, 7).map_err(err)?;
    let mut classes = 0;
    for g in &graphs {
        let t = aut_pi(g).map_err(err)?;
        let c = tfiso::census_from(&t, false, false).map_err(err)?;
        let mut fast: Vec<Vec<_>> =
            c.classes.iter().map(|k| k.members.iter().map(|&i| t.element(i).clone()).collect()).collect();
        fast.sort();
        let brute = oracle::brute_census(g, false).map_err(err)?;
        ensure(fast == brute, || format!("classes differ on {}", twofold::graph6::encode(g).unwrap()))?;
        classes += fast.len();
    }
    Ok(format!("{} census instances, {classes} classes, identical partitions", graphs.len()))
}

fn ac9() -> Outcome {
    let k = 13;
    let m = constructions::m_graph(k).map_err(err)?;
    ensure(m.order() == 13 && m.edge_count() == 15, || format!("M(13): {} vertices, {} edges", m.order(), m.edge_count()))?;
    let start = Instant::now();
    let m0 = constructions::m0_graph(k).map_err(err)?.graph;
    ensure(m0.order() == 28, || format!("M0(13) has {} vertices", m0.order()))?;
    let aut = automorphism_group(&m0, DEFAULT_NODE_BUDGET).map_err(err)?;
    ensure(aut.order() == 1, || format!("|Aut(M0(13))| = {}", aut.order()))?;
    let t_aut = start.elapsed();
    ensure(t_aut < Duration::from_secs(10), || format!("asymmetry check took {t_aut:?}"))?;
    let local = constructions::local_graph(k).map_err(err)?;
    ensure(local == m0, || "local graph differs from M0(13) under the canonical map".into())?;
    let s = constructions::grr_connection_set(k).map_err(err)?;
    ensure(s.len() == 28, || format!("|S| = {}", s.len()))?;
    let start = Instant::now();
    let cay = constructions::grr_z2k(k).map_err(err)?.graph;
    let ant0 = constructions::grr_translation_ant0(k, &cay).map_err(err)?;
    let t_count = start.elapsed();
    ensure(ant0.len() == (1 << k) - 28, || format!("{} translations avoid S", ant0.len()))?;
    ensure(t_count < Duration::from_secs(5), || format!("class count took {t_count:?}"))?;
    // Stretch: a discrete refinement after fixing one vertex of the double
    // cover pins |Aut(BΓ)| to the 2^{k+1} translations and swaps.
    let start = Instant::now();
    let cover = double_cover(&cay);
    let cells = cells_after_individualizing(&cover, &vec![0; cover.order()], 0);
    let stretch = if cells == cover.order() {
        format!("stretch: |Aut(B Cay)| = 2^{} ({:.1?})", k + 1, start.elapsed())
    } else {
        format!("stretch skipped: refinement stops at {cells} cells")
    };
    Ok(format!(
        "M(13) 13/15, M0(13) rigid ({t_aut:.1?}), local graph = M0(13), predicted classes {} ({t_count:.1?}); {stretch}",
        ant0.len()
    ))
}

fn ac10() -> Outcome {
    let h = builtin::elementary_abelian_2(2).unwrap();
    let sigma = GroupAutomorphism::identity(&h);
    let sd = SemidirectZ2::new(&h, &sigma).map_err(err)?;
    let classes = sd.s_classes();
    let x_class = classes.iter().position(|c| c.contains(&sd.x())).unwrap();
    let others: Vec<usize> = (0..classes.len()).filter(|&i| i != x_class).collect();
    let mut checked = 0;
    for mask in 0u32..1 << others.len() {
        let chosen: Vec<usize> =
            std::iter::once(x_class).chain(others.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &i)| i)).collect();
        let c: BTreeSet<usize> = chosen.iter().flat_map(|&i| classes[i].iter().copied()).collect();
        let cv: Vec<usize> = c.iter().copied().collect();
        let g = constructions::achievable_construction(&h, &sigma, &cv).map_err(err)?.graph;
        let problems = families::check_achievable(&h, &sigma, &cv, &g).map_err(err)?;
        ensure(problems.is_empty(), || format!("C = {cv:?}: {}", problems.join("; ")))?;
        ensure(chosen.len() == tfiso::census(&g, false).map_err(err)?.class_count(), || format!("C = {cv:?}: class count"))?;
        checked += 1;
    }
    Ok(format!("{checked} class unions, census counts and switching images match"))
}

fn ac11() -> Outcome {
    let mut checked = 0;
    let mut sylow = 0;
    for h in builtin::catalogue(48) {
        for (name, sigma) in suites::sigma_sample(&h, 2) {
            let r = suites::check_group_bound(&h, &sigma, &name).map_err(err)?;
            ensure(r.holds, || format!("{} with {name}: {r:?}", h.name()))?;
            checked += 1;
            sylow += r.sylow.is_some() as usize;
        }
    }
    for n in [3, 5] {
        let h = builtin::cyclic(n).unwrap();
        let inv = GroupAutomorphism::inversion(&h).unwrap();
        let g = constructions::gamma_construction(&h, &inv, None).map_err(err)?.graph;
        let c = tfiso::census(&g, false).map_err(err)?;
        ensure(c.class_count() == 1, || format!("Z{n} construction has {} census classes", c.class_count()))?;
    }
    Ok(format!("{checked} (group, sigma) pairs within 2^k, {sylow} Sylow checks, odd-order censuses have 1 class"))
}

fn ac12() -> Outcome {
    let mut graphs = vec![named::cycle(7).unwrap(), named::cycle(9).unwrap()];
    graphs.extend(corpus::random_filtered(0xba11, &[3, 4, 5, 6, 7, 8], 100, |g| {
        g.is_connected() && g.complement().map(|c| c.is_reduced()).unwrap_or(false)
    }));
    suite_outcome(Suite::Balls, &graphs)
}

fn ac13() -> Outcome {
    let graphs = suites::corpus_for(Suite::Square, 7).map_err(err)?;
    let r = suites::run_graph_suite(Suite::Square, &graphs).map_err(err)?;
    ensure(r.passed(), || format!("{} failures, smallest: {:?}", r.failures.len(), r.minimal))?;
    let hypotheses = graphs.iter().filter(|g| !g.has_triangle() && !g.has_hexagon() && !g.has_nested_neighborhoods()).count();
    Ok(format!("containment on {} graphs, equality on the {hypotheses} meeting all three hypotheses", r.checked))
}

fn main() -> ExitCode {
    let mut run = Runner { failed: 0 };
    let minute = Duration::from_secs(60);
    run.run("AC1", "Petersen graph is stable", None, ac1);
    run.run("AC2", "gamma suite, reduced graphs n <= 6", Some(2 * minute), || {
        suite_outcome(Suite::Gamma, &suites::corpus_for(Suite::Gamma, 6).map_err(err)?)
    });
    run.run("AC3", "parity of |Aut| and |Aut^pi|, n <= 6", None, || {
        suite_outcome(Suite::Parity, &suites::corpus_for(Suite::Parity, 6).map_err(err)?)
    });
    run.run("AC4", "Aut^pi equals the oracle", None, ac4);
    run.run("AC5", "(H,sigma) construction", None, ac5);
    run.run("AC6", "alpha-automorphic constructions", None, ac6);
    run.run("AC7", "census identities", None, ac7);
    run.run("AC8", "census classes equal pairwise isomorphism, n <= 7", None, ac8);
    run.run("AC9", "GRR family k = 13", None, ac9);
    run.run("AC10", "achievable class unions for Z2^2", Some(2 * minute), ac10);
    run.run("AC11", "class-count bounds", None, ac11);
    run.run("AC12", "balls under Aut^tau", None, ac12);
    run.run("AC13", "Aut^pi inside Aut of the square", None, ac13);
    if run.failed == 0 {
        println!("all 13 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("{} of 13 criteria fail", run.failed);
        ExitCode::FAILURE
    }
}
