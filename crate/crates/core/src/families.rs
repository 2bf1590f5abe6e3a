//! Invariant checks for the constructed graph families.
//!
//! Each check returns the list of properties that failed; an empty list
//! means the graph has every property its family promises.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::constructions::{self, hsigma_index, skeleton_size};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::{FiniteGroup, GroupAutomorphism};
use crate::search::{cells_after_individualizing, node_budget};
use crate::semidirect::SemidirectZ2;
use crate::tfiso;
use crate::twofold::{self, double_cover, ne_refinement, TwoFoldStructure};

fn hypotheses(g: &Graph, problems: &mut Vec<String>) {
    if !g.is_connected() {
        problems.push("not connected".into());
    }
    if !g.is_reduced() {
        problems.push("not reduced".into());
    }
    if g.is_bipartite() {
        problems.push("bipartite".into());
    }
}

/// `R(n₀)`: degrees of the hubs and a discrete neighbourhood refinement.
pub fn check_skeleton(n0: usize, g: &Graph) -> Vec<String> {
    let mut problems = Vec::new();
    if g.order() != n0 + 6 {
        problems.push(format!("{} vertices, expected {}", g.order(), n0 + 6));
        return problems;
    }
    if g.degree(n0) != n0 + 1 || g.degree(n0 + 1) != n0 + 4 {
        problems.push(format!("hub degrees {} and {}", g.degree(n0), g.degree(n0 + 1)));
    }
    if !ne_refinement(g).0.is_discrete() {
        problems.push("neighbourhood refinement is not discrete".into());
    }
    if !g.is_connected() || !g.is_reduced() {
        problems.push("not connected and reduced".into());
    }
    problems
}

/// The map Aut^π → H read off the action on the cell `H × {1}`.
pub fn hsigma_label_map(t: &TwoFoldStructure, h: &FiniteGroup) -> Result<Vec<usize>> {
    let m = h.order();
    let base = hsigma_index(m, h.identity(), 1);
    t.aut_pi()
        .elements()
        .iter()
        .map(|p| {
            let image = p.apply(base);
            if image < m {
                Ok(image)
            } else {
                Err(Error::Internal(format!("{p} leaves the cell H x {{1}}")))
            }
        })
        .collect()
}

/// `Γ_{(H,σ)}`: Aut^π ≅ H through the labels with γ matching σ, orbit cells
/// `H × {i}` that are cocliques, and the connectivity hypotheses.
pub fn check_hsigma(h: &FiniteGroup, sigma: &GroupAutomorphism, g: &Graph) -> Result<(Vec<String>, TwoFoldStructure)> {
    let mut problems = Vec::new();
    let (rank, _) = h.rank()?;
    let m = h.order();
    let n0 = skeleton_size(rank);
    if g.order() != m * (n0 + 6) {
        return Err(Error::Precondition(format!("{} vertices, expected {}", g.order(), m * (n0 + 6))));
    }
    hypotheses(g, &mut problems);
    let t = twofold::aut_pi(g)?;
    if t.aut_pi_order() != m {
        problems.push(format!("|Aut^pi| = {} but |H| = {m}", t.aut_pi_order()));
        return Ok((problems, t));
    }
    let phi = hsigma_label_map(&t, h)?;
    if phi.iter().collect::<BTreeSet<_>>().len() != m {
        problems.push("label map is not a bijection".into());
        return Ok((problems, t));
    }
    let els = t.aut_pi().elements();
    'outer: for i in 0..m {
        for j in 0..m {
            let k = t.aut_pi().index_of(&els[i].compose_unchecked(&els[j])).unwrap();
            if phi[k] != h.mul(phi[i], phi[j]) {
                problems.push("label map is not a homomorphism".into());
                break 'outer;
            }
        }
        if phi[t.gamma_index()[i]] != sigma.apply(phi[i]) {
            problems.push(format!("gamma does not match sigma at {}", els[i]));
            break;
        }
    }
    let expected: BTreeSet<Vec<usize>> =
        (1..=n0 + 6).map(|i| (0..m).map(|a| hsigma_index(m, a, i)).collect::<BTreeSet<_>>().into_iter().collect()).collect();
    let cells: BTreeSet<Vec<usize>> = t.orbit_partition().cells().iter().cloned().collect();
    if cells != expected {
        problems.push("orbit cells are not the sets H x {i}".into());
    }
    if !cells.iter().all(|c| g.is_coclique(c)) {
        problems.push("an orbit cell has an edge".into());
    }
    Ok((problems, t))
}

/// Achievable-set graph: census class count equals the number of classes in
/// `C`, and the strongly switching elements are exactly `C`.
pub fn check_achievable(h: &FiniteGroup, sigma: &GroupAutomorphism, c: &[usize], g: &Graph) -> Result<Vec<String>> {
    let sd = SemidirectZ2::new(h, sigma)?;
    let c: BTreeSet<usize> = c.iter().copied().collect();
    let class_count = sd.s_classes().iter().filter(|k| k.iter().all(|x| c.contains(x))).count();
    let mut problems = Vec::new();
    hypotheses(g, &mut problems);
    let t = twofold::aut_pi(g)?;
    if t.aut_pi_order() != h.order() {
        problems.push(format!("|Aut^pi| = {} but |H| = {}", t.aut_pi_order(), h.order()));
        return Ok(problems);
    }
    let census = tfiso::census_from(&t, false, false)?;
    if census.class_count() != class_count {
        problems.push(format!("{} census classes, expected {class_count}", census.class_count()));
    }
    // ψ ∈ Ant₀ is paired with x·ψ = (ψ⁻¹, 1) in Aut^π ⋊ ℤ₂
    let phi = hsigma_label_map(&t, h)?;
    let image: BTreeSet<usize> = t.ant0().iter().map(|&i| sd.element(h.inv(phi[i]), true)).collect();
    if image != c {
        problems.push(format!("strongly switching image {image:?} differs from C"));
    }
    Ok(problems)
}

/// `GCay(H,σ,S)`: every `(h·, σ(h)·)` is a two-fold automorphism.
pub fn check_gcay(h: &FiniteGroup, sigma: &GroupAutomorphism, g: &Graph) -> Vec<String> {
    let m = h.order();
    let broken = (0..m).find(|&a| {
        let b = sigma.apply(a);
        (0..m).any(|u| (0..m).any(|v| g.has_edge(u, v) != g.has_edge(h.mul(a, u), h.mul(b, v))))
    });
    match broken {
        Some(a) => vec![format!("left translation by {a} is not a two-fold projection")],
        None => Vec::new(),
    }
}

/// `Cay(H,S)`: left translations are automorphisms.
pub fn check_cayley(h: &FiniteGroup, g: &Graph) -> Vec<String> {
    let m = h.order();
    match (0..m).find(|&a| (0..m).any(|u| (0..m).any(|v| g.has_edge(u, v) != g.has_edge(h.mul(a, u), h.mul(a, v))))) {
        Some(a) => vec![format!("left translation by {a} is not an automorphism")],
        None => Vec::new(),
    }
}

pub fn check_m(k: usize, g: &Graph) -> Vec<String> {
    let mut problems = Vec::new();
    if g.order() != k || g.edge_count() != k + 2 {
        problems.push(format!("{} vertices and {} edges, expected {k} and {}", g.order(), g.edge_count(), k + 2));
    }
    if !g.is_connected() {
        problems.push("not connected".into());
    }
    problems
}

/// `M₀(k)`: asymmetric and equal to the local graph at the identity.
pub fn check_m0(k: usize, g: &Graph) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    let aut = twofold::automorphism_group(g, node_budget())?;
    if aut.order() != 1 {
        problems.push(format!("|Aut| = {}", aut.order()));
    }
    if constructions::local_graph(k)? != *g {
        problems.push("differs from the local graph of the Cayley graph".into());
    }
    Ok(problems)
}

#[derive(Clone, Debug, Serialize)]
pub struct GrrReport {
    pub k: usize,
    pub vertices: usize,
    pub connection_set_size: usize,
    pub ant0_size: usize,
    /// Classes of graphs sharing the double cover, when Aut^π is certified
    /// to be the translation group.
    pub class_count: Option<usize>,
    /// Whether fixing one vertex of the double cover makes the refinement
    /// discrete, which pins `|Aut(BΓ)|` to `2^{k+1}`.
    pub translations_certified: bool,
    pub refinement_cells: usize,
    pub problems: Vec<String>,
}

/// `Cay(ℤ₂^k, S)`: translation census and the local-structure argument.
pub fn check_grr(k: usize, g: &Graph) -> Result<GrrReport> {
    let mut problems = Vec::new();
    if constructions::grr_z2k(k)?.graph != *g {
        return Err(Error::Precondition(format!("graph is not the k = {k} Cayley graph of the family")));
    }
    let s = constructions::grr_connection_set(k)?;
    let ant0 = constructions::grr_translation_ant0(k, g)?;
    if ant0.len() != (1 << k) - s.len() {
        problems.push(format!("{} translations avoid S, expected {}", ant0.len(), (1 << k) - s.len()));
    }
    let m0 = constructions::m0_graph(k)?.graph;
    problems.extend(check_m0(k, &m0)?);
    let cover = double_cover(g);
    let cells = cells_after_individualizing(&cover, &vec![0; cover.order()], 0);
    let certified = cells == cover.order();
    Ok(GrrReport {
        k,
        vertices: g.order(),
        connection_set_size: s.len(),
        ant0_size: ant0.len(),
        // translations commute, so every witness keeps all of Aut^π as
        // automorphisms and each class is a single ψ
        class_count: certified.then_some(ant0.len()),
        translations_certified: certified,
        refinement_cells: cells,
        problems,
    })
}
