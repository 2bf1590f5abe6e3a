//! Two-fold isomorphism: graphs sharing a canonical double cover.
//!
//! For `ψ ∈ Ant(Γ)` the witness graph `Γ_ψ` has adjacency matrix `A·m_ψ`,
//! where column `i` of `m_ψ` is `e_{ψ(i)}`. Entry-wise
//! `(A·m_ψ)[i][j] = A[i][ψ(j)]`, so `i ~ j` in `Γ_ψ` iff `(i, ψ(j)) ∈ E`, and
//! `Γ_ψ` has a loop at `i` iff `(i, ψ(i)) ∈ E`.

use std::collections::BTreeSet;

use num_rational::Ratio;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::{FiniteGroup, GroupAutomorphism};
use crate::perm::Permutation;
use crate::search::{self, Mode, node_budget};
use crate::semidirect::SemidirectZ2;
use crate::twofold::{self, double_cover, NeighbourhoodIndex, TwoFoldStructure};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    NotAntimorphism,
    LoopAt { vertex: usize },
}

/// `A·m_ψ` as a graph, or the reason it is not one.
pub fn permutation_matrix_action(g: &Graph, psi: &Permutation, allow_loops: bool) -> Result<std::result::Result<Graph, Rejection>> {
    if let Some((u, v)) = g.twins() {
        return Err(Error::NotReduced(u, v));
    }
    if psi.degree() != g.order() {
        return Err(Error::DegreeMismatch(psi.degree(), g.order()));
    }
    match twofold::gamma_by_neighbourhoods(g, psi) {
        Some(gp) if gp == psi.inverse() => {}
        _ => return Ok(Err(Rejection::NotAntimorphism)),
    }
    if !allow_loops {
        if let Some(v) = (0..g.order()).find(|&v| g.has_edge(v, psi.apply(v))) {
            return Ok(Err(Rejection::LoopAt { vertex: v }));
        }
    }
    Ok(Ok(witness_graph(g, psi)))
}

/// `A·m_ψ` for a known antimorphism.
pub(crate) fn witness_graph(g: &Graph, psi: &Permutation) -> Graph {
    let n = g.order();
    let mut out = Graph::with_loops(n).expect("n >= 1");
    for i in 0..n {
        for j in i..n {
            if g.has_edge(i, psi.apply(j)) {
                debug_assert!(g.has_edge(j, psi.apply(i)), "antimorphisms give symmetric matrices");
                out.add_edge(i, j).unwrap();
            }
        }
    }
    if out.has_loops() { out } else { strip_loop_flag(&out) }
}

fn strip_loop_flag(g: &Graph) -> Graph {
    Graph::from_edges(g.order(), &g.edges()).expect("loopless")
}

/// A bijection carrying every neighbourhood of `g1` onto a neighbourhood of `g2`.
pub fn tf_isomorphic(g1: &Graph, g2: &Graph) -> Result<Option<Permutation>> {
    for g in [g1, g2] {
        if let Some((u, v)) = g.twins() {
            return Err(Error::NotReduced(u, v));
        }
    }
    if g1.order() != g2.order() {
        return Ok(None);
    }
    let n = g1.order();
    let (b1, b2) = (double_cover(g1), double_cover(g2));
    let sides: Vec<u64> = (0..2 * n).map(|x| (x >= n) as u64).collect();
    let found = search::isomorphisms(&b1, &sides, &b2, &sides, Mode::First, node_budget())?;
    Ok(found.first().map(|m| Permutation::from_images_unchecked(m[..n].to_vec())))
}

/// One isomorphism class of graphs TF-isomorphic to the base.
#[derive(Clone, Debug)]
pub struct CensusClass {
    /// Smallest member (in Aut^π element order); its witness graph represents the class.
    pub rep: usize,
    /// Indices into the base structure's Aut^π.
    pub members: Vec<usize>,
    /// `|Aut|` of the witness graph.
    pub aut_order: u64,
    /// Instability index of the witness graph.
    pub inst: u64,
    pub witness: Option<Graph>,
}

#[derive(Clone, Debug)]
pub struct TfCensus {
    pub base: Graph,
    pub loops_included: bool,
    pub aut_pi_order: usize,
    pub ant_size: usize,
    pub ant0_size: usize,
    pub classes: Vec<CensusClass>,
    /// Every `(ψ, Γ_ψ)`, only when requested.
    pub witnesses: Option<Vec<(Permutation, Graph)>>,
}

fn census_preconditions(g: &Graph) -> Result<()> {
    let mut failed = Vec::new();
    if !g.is_connected() {
        failed.push("connected");
    }
    if !g.is_reduced() {
        failed.push("reduced");
    }
    if g.is_bipartite() {
        failed.push("nonbipartite");
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::Precondition(format!("census needs a graph that is {}", failed.join(", "))))
    }
}

pub fn census(g: &Graph, allow_loops: bool) -> Result<TfCensus> {
    census_preconditions(g)?;
    census_from(&twofold::aut_pi(g)?, allow_loops, false)
}

/// Partition `Ant₀` (or `Ant` with loops) into isomorphism classes of witness
/// graphs using `ψ₁ ~ ψ₂ ⇔ ψ₁⁻¹ψ₂ ∈ Im(α_{Γ_ψ₁})`.
pub fn census_from(tfs: &TwoFoldStructure, allow_loops: bool, keep_all: bool) -> Result<TfCensus> {
    census_preconditions(tfs.graph())?;
    let g = tfs.graph();
    let group = tfs.aut_pi();
    let els = group.elements();
    let candidates: &[usize] = if allow_loops { tfs.ant() } else { tfs.ant0() };
    let mut unassigned: BTreeSet<usize> = candidates.iter().copied().collect();
    let mut classes = Vec::new();
    while let Some(&rep) = unassigned.iter().next() {
        let psi = &els[rep];
        let w = witness_graph(g, psi);
        let index = NeighbourhoodIndex::new(&w);
        // γ of the witness, computed from its own neighbourhoods
        let gamma_w: Vec<usize> = els
            .par_iter()
            .map(|p| {
                index
                    .gamma(p)
                    .and_then(|q| group.index_of(&q))
                    .ok_or_else(|| Error::Internal(format!("{p} is not a projection of the witness for {psi}")))
            })
            .collect::<Result<_>>()?;
        let fix = (0..els.len()).filter(|&i| gamma_w[i] == i).count();
        let im_alpha: BTreeSet<usize> = (0..els.len())
            .map(|i| group.index_of(&els[i].inverse().compose_unchecked(&els[gamma_w[i]])).unwrap())
            .collect();
        let members: Vec<usize> = im_alpha
            .iter()
            .map(|&a| group.index_of(&psi.compose_unchecked(&els[a])).unwrap())
            .collect();
        for m in &members {
            if !unassigned.remove(m) {
                return Err(Error::Internal(format!("class of {psi} leaves the candidate set at {}", els[*m])));
            }
        }
        let inst = (els.len() / fix) as u64;
        if members.len() as u64 != inst {
            return Err(Error::Internal(format!("class of {psi} has size {} but inst {inst}", members.len())));
        }
        let mut members = members;
        members.sort_unstable();
        classes.push(CensusClass { rep, members, aut_order: fix as u64, inst, witness: Some(w) });
    }
    let witnesses = keep_all.then(|| {
        candidates.iter().map(|&i| (els[i].clone(), witness_graph(g, &els[i]))).collect()
    });
    Ok(TfCensus {
        base: g.clone(),
        loops_included: allow_loops,
        aut_pi_order: group.order(),
        ant_size: tfs.ant().len(),
        ant0_size: tfs.ant0().len(),
        classes,
        witnesses,
    })
}

impl TfCensus {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn inst_sum(&self) -> u64 {
        self.classes.iter().map(|c| c.inst).sum()
    }

    /// `Σ 1/|Aut(Γ')|` over the classes.
    pub fn harmonic_sum(&self) -> Ratio<u64> {
        self.classes.iter().map(|c| Ratio::new(1, c.aut_order)).sum()
    }

    pub fn candidate_count(&self) -> usize {
        if self.loops_included { self.ant_size } else { self.ant0_size }
    }
}

/// `Aut^π ⋊_γ ℤ₂` for a structure, with element `(h, b)` at index `h + b·|Aut^π|`.
pub fn switching_group(tfs: &TwoFoldStructure) -> Result<(FiniteGroup, GroupAutomorphism)> {
    tfs.as_group_with_gamma()
}

/// `x·Ant₀`: the elements `(ψ, 1)` with `ψ ∈ Ant₀`, as semidirect indices.
pub fn strongly_switching_elements(tfs: &TwoFoldStructure) -> Result<Vec<usize>> {
    census_preconditions(tfs.graph())?;
    let m = tfs.aut_pi_order();
    let inverse = |i: usize| tfs.aut_pi().index_of(&tfs.element(i).inverse()).unwrap();
    let mut out: Vec<usize> = tfs.ant0().iter().map(|&i| inverse(i) + m).collect();
    out.sort_unstable();
    Ok(out)
}

/// Conjugacy classes of strongly switching elements, read off the census:
/// the class of `ψ` maps to the class of `x·ψ = (ψ⁻¹, 1)`.
pub fn switching_conjugacy_classes(tfs: &TwoFoldStructure, census: &TfCensus) -> Vec<Vec<usize>> {
    let m = tfs.aut_pi_order();
    let inverse = |i: usize| tfs.aut_pi().index_of(&tfs.element(i).inverse()).unwrap();
    let mut out: Vec<Vec<usize>> = census
        .classes
        .iter()
        .map(|c| {
            let mut v: Vec<usize> = c.members.iter().map(|&i| inverse(i) + m).collect();
            v.sort_unstable();
            v
        })
        .collect();
    out.sort();
    out
}

/// The same partition by brute-force conjugation inside the semidirect product.
pub fn switching_classes_by_conjugation(tfs: &TwoFoldStructure) -> Result<Vec<Vec<usize>>> {
    let (h, s) = switching_group(tfs)?;
    let sd = SemidirectZ2::new(&h, &s)?;
    let strong: BTreeSet<usize> = strongly_switching_elements(tfs)?.into_iter().collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &g in &strong {
        if seen.contains(&g) {
            continue;
        }
        let class = sd.conjugacy_class(g);
        if !class.is_subset(&strong) {
            return Err(Error::Internal("conjugation left the strongly switching set".into()));
        }
        seen.extend(class.iter().copied());
        out.push(class.into_iter().collect());
    }
    out.sort();
    Ok(out)
}

/// Whether every orbit of `ψ` induces an edgeless subgraph.
pub fn empty_orbit_check(g: &Graph, psi: &Permutation) -> bool {
    psi.cycles().iter().all(|c| g.is_coclique(c))
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub ant0_size: usize,
    pub inst_sum: u64,
    pub ant_size: usize,
    pub inst_sum_loops: u64,
    pub harmonic_lhs: String,
    pub harmonic_rhs: String,
    pub harmonic_lhs_loops: String,
    pub harmonic_rhs_loops: String,
    pub class_count: usize,
    pub class_count_loops: usize,
    /// Mean of `|Aut(Γ')|` over the loopless family, as a fraction.
    pub mean_aut: String,
    pub mean_inequality_holds: bool,
    /// `|Aut(Γ)|` next to the class count; the relation between them is open.
    pub base_aut_order: usize,
    pub ok: bool,
}

fn mean_aut(c: &TfCensus) -> Ratio<u64> {
    let total: u64 = c.classes.iter().map(|k| k.aut_order).sum();
    Ratio::new(total, c.class_count() as u64)
}

/// Check both counting identities and the mean inequality exactly.
pub fn verify_identities(tfs: &TwoFoldStructure) -> Result<IdentityReport> {
    let plain = census_from(tfs, false, false)?;
    let loops = census_from(tfs, true, false)?;
    let m = tfs.aut_pi_order() as u64;
    let h_lhs = Ratio::new(plain.ant0_size as u64, m);
    let h_lhs_loops = Ratio::new(loops.ant_size as u64, m);
    let mean = mean_aut(&plain);
    let count = plain.class_count() as u64;
    let mean_ok = mean >= Ratio::from_integer(count) && mean_aut(&loops) >= Ratio::from_integer(loops.class_count() as u64);
    let ok = plain.inst_sum() == plain.ant0_size as u64
        && loops.inst_sum() == loops.ant_size as u64
        && h_lhs == plain.harmonic_sum()
        && h_lhs_loops == loops.harmonic_sum()
        && mean_ok;
    Ok(IdentityReport {
        ant0_size: plain.ant0_size,
        inst_sum: plain.inst_sum(),
        ant_size: loops.ant_size,
        inst_sum_loops: loops.inst_sum(),
        harmonic_lhs: h_lhs.to_string(),
        harmonic_rhs: plain.harmonic_sum().to_string(),
        harmonic_lhs_loops: h_lhs_loops.to_string(),
        harmonic_rhs_loops: loops.harmonic_sum().to_string(),
        class_count: plain.class_count(),
        class_count_loops: loops.class_count(),
        mean_aut: mean.to_string(),
        mean_inequality_holds: mean_ok,
        base_aut_order: tfs.aut_order(),
        ok,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusClassJson {
    pub rep_psi: String,
    pub size: usize,
    pub inst: u64,
    pub aut_order: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_graph6: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityJson {
    pub lhs: u64,
    pub rhs: u64,
    pub harmonic_lhs: String,
    pub harmonic_rhs: String,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CensusJson {
    pub base_graph6: Option<String>,
    pub loops_included: bool,
    pub aut_pi_order: usize,
    pub ant_size: usize,
    pub ant0_size: usize,
    pub class_count: usize,
    pub classes: Vec<CensusClassJson>,
    pub identities: IdentityJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<(String, Option<String>)>>,
}

impl TfCensus {
    pub fn to_json(&self, tfs: &TwoFoldStructure) -> CensusJson {
        let g6 = |g: &Graph| crate::graph6::encode(g).ok();
        let lhs = self.candidate_count() as u64;
        let h_lhs = Ratio::new(lhs, self.aut_pi_order as u64);
        CensusJson {
            base_graph6: g6(&self.base),
            loops_included: self.loops_included,
            aut_pi_order: self.aut_pi_order,
            ant_size: self.ant_size,
            ant0_size: self.ant0_size,
            class_count: self.class_count(),
            classes: self
                .classes
                .iter()
                .map(|c| CensusClassJson {
                    rep_psi: tfs.element(c.rep).to_string(),
                    size: c.members.len(),
                    inst: c.inst,
                    aut_order: c.aut_order,
                    witness_graph6: c.witness.as_ref().and_then(g6),
                })
                .collect(),
            identities: IdentityJson {
                lhs,
                rhs: self.inst_sum(),
                harmonic_lhs: h_lhs.to_string(),
                harmonic_rhs: self.harmonic_sum().to_string(),
                ok: lhs == self.inst_sum() && h_lhs == self.harmonic_sum(),
            },
            witnesses: self.witnesses.as_ref().map(|ws| {
                ws.iter().map(|(p, g)| (p.to_string(), g6(g))).collect()
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn matrix_convention() {
        // Petersen: find a nontrivial element of Ant₀ and check m_{ψ⁻¹}A = A·m_ψ
        let p = named::petersen();
        let t = twofold::aut_pi(&p).unwrap();
        let psi = t.ant0().iter().map(|&i| t.element(i)).find(|e| !e.is_identity()).unwrap().clone();
        let n = 10;
        let a = |i: usize, j: usize| p.has_edge(i, j) as u8;
        // (A m_ψ)[i][j] = A[i][ψ(j)]; (m_{ψ⁻¹} A)[i][j] = A[ψ(i)][j]
        for i in 0..n {
            for j in 0..n {
                assert_eq!(a(i, psi.apply(j)), a(psi.apply(i), j));
            }
        }
        let w = permutation_matrix_action(&p, &psi, false).unwrap().unwrap();
        assert!(w.is_reduced());
        assert!(tf_isomorphic(&p, &w).unwrap().is_some());
    }

    #[test]
    fn identity_action_and_rejections() {
        let c5 = named::cycle(5).unwrap();
        let id = Permutation::identity(5);
        assert_eq!(permutation_matrix_action(&c5, &id, false).unwrap().unwrap(), c5);
        // the rotation is an automorphism, so γ(ρ) = ρ ≠ ρ⁻¹
        let rot = Permutation::from_images(vec![1, 2, 3, 4, 0]).unwrap();
        assert_eq!(permutation_matrix_action(&c5, &rot, false).unwrap(), Err(Rejection::NotAntimorphism));
        // the reflection fixing 0 is an involutive automorphism, so it is in Ant,
        // but it swaps the adjacent vertices 2 and 3
        let refl = Permutation::from_images(vec![0, 4, 3, 2, 1]).unwrap();
        assert_eq!(
            permutation_matrix_action(&c5, &refl, false).unwrap(),
            Err(Rejection::LoopAt { vertex: 2 })
        );
        // the reflection swapping 0,1 sends 0 to a neighbour
        let refl2 = Permutation::from_images(vec![1, 0, 4, 3, 2]).unwrap();
        assert_eq!(
            permutation_matrix_action(&c5, &refl2, false).unwrap(),
            Err(Rejection::LoopAt { vertex: 0 })
        );
        assert!(permutation_matrix_action(&c5, &refl2, true).unwrap().unwrap().has_loops());
    }

    #[test]
    fn tf_iso_basics() {
        let c5 = named::cycle(5).unwrap();
        assert_eq!(tf_isomorphic(&c5, &c5).unwrap().map(|p| p.degree()), Some(5));
        assert_eq!(tf_isomorphic(&c5, &named::cycle(6).unwrap()).unwrap(), None);
    }

    #[test]
    fn petersen_census() {
        let t = twofold::aut_pi(&named::petersen()).unwrap();
        let c = census_from(&t, false, false).unwrap();
        assert_eq!(c.inst_sum(), c.ant0_size as u64);
        let r = verify_identities(&t).unwrap();
        assert!(r.ok, "{r:?}");
        assert_eq!(switching_conjugacy_classes(&t, &c), switching_classes_by_conjugation(&t).unwrap());
        for &i in t.ant0() {
            assert!(empty_orbit_check(&p_graph(), t.element(i)));
        }
    }

    fn p_graph() -> Graph {
        named::petersen()
    }
}
