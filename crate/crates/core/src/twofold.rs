//! Canonical double covers and the two-fold automorphism structure of a graph.
//!
//! A two-fold projection is a permutation `π` of the vertices that carries
//! every neighbourhood onto a neighbourhood. For a reduced graph the partner
//! permutation `γ(π)`, defined by `π(N(v)) = N(γ(π)(v))`, is unique, and the
//! pairs `(π, γ(π))` are exactly the part-preserving automorphisms of the
//! double cover.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::partition::VertexPartition;
use crate::perm::{PermGroup, Permutation};
use crate::search::{self, Mode, node_budget};

/// `Γ × K₂`: vertex `(v, b)` has index `v + b·n` and `(u,0) ~ (v,1)` iff `u ~ v`.
pub fn double_cover(g: &Graph) -> Graph {
    let n = g.order();
    let mut b = Graph::new(2 * n).expect("n >= 1");
    for (u, v) in g.edges() {
        b.add_edge(u, v + n).unwrap();
        if u != v {
            b.add_edge(v, u + n).unwrap();
        }
    }
    b
}

/// Iterated neighbourhood refinement starting from vertex degrees.
///
/// Each round pairs a vertex's key with the multiset of its neighbours' keys,
/// which keeps the partition monotone; the result is invariant under every
/// two-fold projection. Keys are cell ranks, so equal keys mean equal cells.
pub fn ne_refinement(g: &Graph) -> (VertexPartition, Vec<u64>) {
    let n = g.order();
    let mut keys: Vec<u64> = g.degrees().into_iter().map(|d| d as u64).collect();
    let mut cells = count_distinct(&keys);
    loop {
        let sigs: Vec<(u64, Vec<u64>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<u64> = g.neighbors(v).map(|w| keys[w]).collect();
                nb.sort_unstable();
                (keys[v], nb)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        keys = sigs.iter().map(|s| distinct.binary_search(s).unwrap() as u64).collect();
        if distinct.len() == cells {
            break;
        }
        cells = distinct.len();
    }
    (VertexPartition::from_keys(&keys), keys)
}

fn count_distinct(keys: &[u64]) -> usize {
    keys.iter().collect::<BTreeSet<_>>().len()
}

/// `γ(π)` by looking up the image of each neighbourhood; `None` when some
/// `π(N(v))` is not a neighbourhood (π is not a two-fold projection).
pub fn gamma_by_neighbourhoods(g: &Graph, pi: &Permutation) -> Option<Permutation> {
    NeighbourhoodIndex::new(g).gamma(pi)
}

/// Rows of a reduced graph hashed to their vertex.
pub struct NeighbourhoodIndex<'a> {
    g: &'a Graph,
    rows: HashMap<&'a [u64], usize>,
}

impl<'a> NeighbourhoodIndex<'a> {
    pub fn new(g: &'a Graph) -> Self {
        let rows = (0..g.order()).map(|v| (g.row(v), v)).collect();
        NeighbourhoodIndex { g, rows }
    }

    pub fn gamma(&self, pi: &Permutation) -> Option<Permutation> {
        if pi.degree() != self.g.order() {
            return None;
        }
        let mut images = Vec::with_capacity(pi.degree());
        let mut hit = vec![false; pi.degree()];
        for v in 0..pi.degree() {
            let row = self.g.permute_row(self.g.row(v), pi);
            let &w = self.rows.get(row.as_slice())?;
            if std::mem::replace(&mut hit[w], true) {
                return None;
            }
            images.push(w);
        }
        Some(Permutation::from_images_unchecked(images))
    }
}

/// Aut^π of a reduced graph together with γ and the derived subsets.
///
/// Elements are referred to by their index in `aut_pi().elements()`.
#[derive(Clone, Debug)]
pub struct TwoFoldStructure {
    graph: Graph,
    aut_pi: PermGroup,
    gamma: Vec<usize>,
    aut: Vec<usize>,
    im_alpha: Vec<usize>,
    ant: Vec<usize>,
    ant0: Vec<usize>,
    connected: bool,
    bipartite: bool,
    refinement: VertexPartition,
}

pub fn aut_pi(g: &Graph) -> Result<TwoFoldStructure> {
    aut_pi_with_budget(g, node_budget())
}

pub fn aut_pi_with_budget(g: &Graph, budget: u64) -> Result<TwoFoldStructure> {
    if let Some((u, v)) = g.twins() {
        return Err(Error::NotReduced(u, v));
    }
    let n = g.order();
    let (refinement, keys) = ne_refinement(g);
    let cover = double_cover(g);
    let colors: Vec<u64> = (0..2 * n).map(|x| 2 * keys[x % n] + (x >= n) as u64).collect();
    let maps = search::automorphisms(&cover, &colors, Mode::All, budget)?;
    let mut pairs: Vec<(Permutation, Permutation)> = maps
        .into_iter()
        .map(|m| {
            let pi = Permutation::from_images_unchecked(m[..n].to_vec());
            let gp = Permutation::from_images_unchecked(m[n..].iter().map(|x| x - n).collect());
            (pi, gp)
        })
        .collect();
    pairs.sort();
    let elements: Vec<Permutation> = pairs.iter().map(|(p, _)| p.clone()).collect();
    let group = PermGroup::from_elements_unchecked(n, Vec::new(), elements);
    if group.order() != pairs.len() {
        return Err(Error::Internal("double cover search repeated a projection".into()));
    }
    let index = NeighbourhoodIndex::new(g);
    let mut gamma = Vec::with_capacity(pairs.len());
    for (pi, gp) in &pairs {
        if index.gamma(pi).as_ref() != Some(gp) {
            return Err(Error::Internal(format!("gamma mismatch for {pi}")));
        }
        gamma.push(group.index_of(gp).ok_or_else(|| Error::Internal(format!("gamma({pi}) escapes the group")))?);
    }
    Ok(TwoFoldStructure::assemble(g.clone(), group, gamma, refinement))
}

impl TwoFoldStructure {
    fn assemble(graph: Graph, aut_pi: PermGroup, gamma: Vec<usize>, refinement: VertexPartition) -> Self {
        let els = aut_pi.elements();
        let inverse: Vec<usize> = els.iter().map(|p| aut_pi.index_of(&p.inverse()).unwrap()).collect();
        let aut: Vec<usize> = (0..els.len()).filter(|&i| gamma[i] == i).collect();
        let im_alpha: BTreeSet<usize> = (0..els.len())
            .map(|i| aut_pi.index_of(&els[i].inverse().compose_unchecked(&els[gamma[i]])).unwrap())
            .collect();
        let ant: Vec<usize> = (0..els.len()).filter(|&i| gamma[i] == inverse[i]).collect();
        let ant0: Vec<usize> = ant
            .iter()
            .copied()
            .filter(|&i| (0..graph.order()).all(|v| !graph.has_edge(v, els[i].apply(v))))
            .collect();
        TwoFoldStructure {
            connected: graph.is_connected(),
            bipartite: graph.is_bipartite(),
            graph,
            aut_pi,
            gamma,
            aut,
            im_alpha: im_alpha.into_iter().collect(),
            ant,
            ant0,
            refinement,
        }
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn aut_pi(&self) -> &PermGroup {
        &self.aut_pi
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.aut_pi.elements()[i]
    }

    pub fn gamma_index(&self) -> &[usize] {
        &self.gamma
    }

    pub fn aut(&self) -> &[usize] {
        &self.aut
    }

    pub fn im_alpha(&self) -> &[usize] {
        &self.im_alpha
    }

    pub fn ant(&self) -> &[usize] {
        &self.ant
    }

    pub fn ant0(&self) -> &[usize] {
        &self.ant0
    }

    pub fn refinement(&self) -> &VertexPartition {
        &self.refinement
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartite
    }

    pub fn aut_group(&self) -> PermGroup {
        PermGroup::from_elements_unchecked(
            self.graph.order(),
            Vec::new(),
            self.aut.iter().map(|&i| self.element(i).clone()).collect(),
        )
    }

    pub fn aut_order(&self) -> usize {
        self.aut.len()
    }

    pub fn aut_pi_order(&self) -> usize {
        self.aut_pi.order()
    }

    /// `|Aut^π| / |Aut|` for connected nonbipartite graphs; undefined otherwise.
    pub fn inst(&self) -> Option<u64> {
        (self.connected && !self.bipartite).then(|| (self.aut_pi.order() / self.aut.len()) as u64)
    }

    pub fn gamma_of(&self, pi: &Permutation) -> Result<Permutation> {
        let i = self.aut_pi.index_of(pi).ok_or_else(|| Error::NotMember(pi.to_string()))?;
        Ok(self.element(self.gamma[i]).clone())
    }

    /// `α(π) = π⁻¹ ∘ γ(π)`.
    pub fn alpha_of(&self, pi: &Permutation) -> Result<Permutation> {
        let g = self.gamma_of(pi)?;
        Ok(pi.inverse().compose_unchecked(&g))
    }

    /// The orbit partition of Aut^π on vertices.
    pub fn orbit_partition(&self) -> VertexPartition {
        VertexPartition::from_cells(self.graph.order(), self.aut_pi.orbits()).expect("orbits partition")
    }

    /// Aut^π with γ as a group and an involutory automorphism, index-aligned
    /// with `aut_pi().elements()`.
    pub fn as_group_with_gamma(&self) -> Result<(crate::group::FiniteGroup, crate::group::GroupAutomorphism)> {
        let h = crate::group::FiniteGroup::from_perm_group("Aut^pi", &self.aut_pi);
        let s = crate::group::GroupAutomorphism::new(&h, self.gamma.clone())?;
        Ok((h, s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    Stable,
    Unstable { inst: u64 },
    TriviallyUnstable { reasons: Vec<String> },
}

pub fn trivial_instability_reasons(g: &Graph) -> Vec<String> {
    let mut reasons = Vec::new();
    if !g.is_connected() {
        reasons.push("disconnected".to_string());
    }
    if g.is_bipartite() {
        reasons.push("bipartite".to_string());
    }
    if let Some((u, v)) = g.twins() {
        reasons.push(format!("not reduced: N({u}) = N({v})"));
    }
    reasons
}

pub fn is_stable(g: &Graph) -> Result<Verdict> {
    let reasons = trivial_instability_reasons(g);
    if !reasons.is_empty() {
        return Ok(Verdict::TriviallyUnstable { reasons });
    }
    verdict_of(&aut_pi(g)?)
}

pub fn verdict_of(tfs: &TwoFoldStructure) -> Result<Verdict> {
    let reasons = trivial_instability_reasons(&tfs.graph);
    if !reasons.is_empty() {
        return Ok(Verdict::TriviallyUnstable { reasons });
    }
    let inst = tfs.inst().ok_or_else(|| Error::Internal("inst undefined on a nontrivial graph".into()))?;
    Ok(if inst == 1 { Verdict::Stable } else { Verdict::Unstable { inst } })
}

/// The full automorphism group of any graph (reduced or not).
pub fn automorphism_group(g: &Graph, budget: u64) -> Result<PermGroup> {
    let maps = search::automorphisms(g, &vec![0; g.order()], Mode::All, budget)?;
    Ok(PermGroup::from_elements_unchecked(
        g.order(),
        Vec::new(),
        maps.into_iter().map(Permutation::from_images_unchecked).collect(),
    ))
}

/// Ball-preserving permutations, computed as Aut^π of the complement.
/// The returned structure lives on the complement; its γ satisfies
/// `π(B(v,1)) = B(γ(π)(v), 1)` in `g`.
pub fn aut_tau(g: &Graph) -> Result<TwoFoldStructure> {
    let c = g.complement()?;
    if let Some((u, v)) = c.twins() {
        return Err(Error::Precondition(format!(
            "complement is not reduced: N({u}) = N({v}) there"
        )));
    }
    aut_pi(&c)
}

/// Distance band `⌈d/2⌉`, the quantity two-fold topological maps preserve.
fn band(d: Option<usize>) -> Option<usize> {
    d.map(|d| d.div_ceil(2))
}

pub fn verify_distance_parity(g: &Graph, pi: &Permutation) -> bool {
    let dist = g.distance_matrix();
    let n = g.order();
    (0..n).all(|v| (0..n).all(|w| band(dist[v][w]) == band(dist[pi.apply(v)][pi.apply(w)])))
}

/// A violation of `π(B(v,r)) = B(γ^r(π)(v), r)`.
#[derive(Clone, Debug, Serialize)]
pub struct BallViolation {
    pub permutation: String,
    pub vertex: usize,
    pub radius: usize,
}

/// Check the ball identity for every element of `aut_tau(g)`, every vertex,
/// and every radius up to `max_radius`.
pub fn ball_theorem_violations(g: &Graph, tau: &TwoFoldStructure, max_radius: usize) -> Vec<BallViolation> {
    let n = g.order();
    let balls: Vec<Vec<BTreeSet<usize>>> = (0..=max_radius)
        .map(|r| (0..n).map(|v| g.ball(v, r).unwrap().into_iter().collect()).collect())
        .collect();
    let mut out = Vec::new();
    for i in 0..tau.aut_pi.order() {
        let pi = tau.element(i);
        // γ^r(π) for r = 0, 1, ...
        let mut gr = i;
        let mut powers = vec![i];
        for _ in 0..max_radius {
            gr = tau.gamma[gr];
            powers.push(gr);
        }
        for (r, &gi) in powers.iter().enumerate() {
            let target = tau.element(gi);
            for v in 0..n {
                let image: BTreeSet<usize> = balls[r][v].iter().map(|&w| pi.apply(w)).collect();
                if image != balls[r][target.apply(v)] {
                    out.push(BallViolation { permutation: pi.to_string(), vertex: v, radius: r });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareReport {
    pub aut_pi_order: usize,
    pub aut_square_order: usize,
    pub contained: bool,
    pub triangle_free: bool,
    pub hexagon_free: bool,
    pub nesting_free: bool,
    /// Set when all three hypotheses hold.
    pub equal: Option<bool>,
    /// Set for triangle-free graphs of diameter two.
    pub diameter_two_stable: Option<bool>,
    pub ok: bool,
}

pub fn square_subgroup_check(g: &Graph) -> Result<SquareReport> {
    let tfs = aut_pi(g)?;
    let sq = automorphism_group(&g.square(), node_budget())?;
    let contained = tfs.aut_pi.is_subgroup_of(&sq);
    let triangle_free = !g.has_triangle();
    let hexagon_free = !g.has_hexagon();
    let nesting_free = !g.has_nested_neighborhoods();
    let equal = (triangle_free && hexagon_free && nesting_free).then(|| sq.order() == tfs.aut_pi_order());
    let diameter_two_stable = (triangle_free && g.diameter() == Some(2)).then(|| {
        let sq_is_complement = g.complement().map(|c| c == g.square()).unwrap_or(false);
        sq_is_complement && tfs.aut_order() == tfs.aut_pi_order()
    });
    Ok(SquareReport {
        aut_pi_order: tfs.aut_pi_order(),
        aut_square_order: sq.order(),
        contained,
        triangle_free,
        hexagon_free,
        nesting_free,
        equal,
        diameter_two_stable,
        ok: contained && equal != Some(false) && diameter_two_stable != Some(false),
    })
}

/// JSON stability summary.
#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub n: usize,
    pub reduced: bool,
    pub connected: bool,
    pub bipartite: bool,
    pub aut_order: usize,
    pub aut_pi_order: Option<usize>,
    pub inst: Option<u64>,
    pub stable: bool,
    pub ant_size: Option<usize>,
    pub ant0_size: Option<usize>,
    pub orbit_cells: Vec<Vec<usize>>,
    pub refinement_cells: Vec<Vec<usize>>,
    pub verdict: Verdict,
}

pub fn stability_report(g: &Graph, budget: u64) -> Result<StabilityReport> {
    let reasons = trivial_instability_reasons(g);
    let (refinement, _) = ne_refinement(g);
    if g.is_reduced() {
        let tfs = aut_pi_with_budget(g, budget)?;
        let verdict = verdict_of(&tfs)?;
        return Ok(StabilityReport {
            n: g.order(),
            reduced: true,
            connected: tfs.connected,
            bipartite: tfs.bipartite,
            aut_order: tfs.aut_order(),
            aut_pi_order: Some(tfs.aut_pi_order()),
            inst: tfs.inst(),
            stable: verdict == Verdict::Stable,
            ant_size: Some(tfs.ant.len()),
            ant0_size: Some(tfs.ant0.len()),
            orbit_cells: tfs.orbit_partition().cells().to_vec(),
            refinement_cells: refinement.cells().to_vec(),
            verdict,
        });
    }
    let aut = automorphism_group(g, budget)?;
    Ok(StabilityReport {
        n: g.order(),
        reduced: false,
        connected: g.is_connected(),
        bipartite: g.is_bipartite(),
        aut_order: aut.order(),
        aut_pi_order: None,
        inst: None,
        stable: false,
        ant_size: None,
        ant0_size: None,
        orbit_cells: aut.orbits(),
        refinement_cells: refinement.cells().to_vec(),
        verdict: Verdict::TriviallyUnstable { reasons },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn double_cover_examples() {
        let k3 = double_cover(&named::complete(3).unwrap());
        assert!(k3.is_connected() && k3.degrees().iter().all(|&d| d == 2) && k3.order() == 6);
        let c5 = double_cover(&named::cycle(5).unwrap());
        assert!(c5.is_connected() && c5.degrees().iter().all(|&d| d == 2) && c5.order() == 10);
        let c6 = double_cover(&named::cycle(6).unwrap());
        assert!(!c6.is_connected() && c6.edge_count() == 12);
        let parts = c6.bipartition().unwrap();
        assert!(c5.bipartition().is_some() && parts.len() == 12);
    }

    #[test]
    fn petersen_is_stable() {
        let t = aut_pi(&named::petersen()).unwrap();
        assert_eq!((t.aut_order(), t.aut_pi_order(), t.inst()), (120, 120, Some(1)));
        assert_eq!(is_stable(&named::petersen()).unwrap(), Verdict::Stable);
    }

    #[test]
    fn small_verdicts() {
        let k3 = aut_pi(&named::complete(3).unwrap()).unwrap();
        assert_eq!((k3.aut_order(), k3.aut_pi_order()), (6, 6));
        assert!(matches!(is_stable(&named::cycle(4).unwrap()).unwrap(), Verdict::TriviallyUnstable { .. }));
        match is_stable(&named::cycle(6).unwrap()).unwrap() {
            Verdict::TriviallyUnstable { reasons } => assert_eq!(reasons, vec!["bipartite"]),
            v => panic!("{v:?}"),
        }
        assert!(matches!(aut_pi(&named::cycle(4).unwrap()), Err(Error::NotReduced(..))));
    }

    #[test]
    fn gamma_laws_on_a_bipartite_graph() {
        // C6 is reduced; Aut^π permutes the two neighbourhood triangles freely
        let t = aut_pi(&named::cycle(6).unwrap()).unwrap();
        assert_eq!(t.aut_order(), 12);
        assert_eq!(t.aut_pi_order(), 72);
        assert_eq!(t.inst(), None);
        for i in 0..t.aut_pi_order() {
            let p = t.element(i);
            let g = t.gamma_of(p).unwrap();
            assert_eq!(&t.gamma_of(&g).unwrap(), p);
        }
    }

    #[test]
    fn refinement_examples() {
        let (p, _) = ne_refinement(&named::cycle(5).unwrap());
        assert_eq!(p.len(), 1);
        let (p, keys) = ne_refinement(&named::path(5).unwrap());
        assert_eq!(p.len(), 3);
        assert_eq!(keys[0], keys[4]);
    }

    #[test]
    fn aut_tau_of_edgeless_graph() {
        let t = aut_tau(&named::empty(3).unwrap()).unwrap();
        assert_eq!(t.aut_pi_order(), 6);
        let g = named::empty(3).unwrap();
        assert!(ball_theorem_violations(&g, &t, 2).is_empty());
        assert!(aut_tau(&named::complete(3).unwrap()).is_err());
    }

    #[test]
    fn distance_parity() {
        let c7 = named::cycle(7).unwrap();
        assert!(verify_distance_parity(&c7, &Permutation::identity(7)));
        // swapping two adjacent vertices of a path changes distance bands
        let p5 = named::path(5).unwrap();
        assert!(!verify_distance_parity(&p5, &Permutation::from_cycles(5, &[&[0, 1]]).unwrap()));
    }

    #[test]
    fn square_checks() {
        let r = square_subgroup_check(&named::petersen()).unwrap();
        assert!(r.ok && r.diameter_two_stable == Some(true));
        assert!(square_subgroup_check(&named::cycle(7).unwrap()).unwrap().contained);
        assert!(square_subgroup_check(&named::complete(3).unwrap()).unwrap().ok);
    }
}
