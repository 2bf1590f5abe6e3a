//! Graph families: the rigid skeleton `R(n₀)`, `(H,σ)`-graphs, generalized
//! Cayley graphs, achievable-set graphs, `M(k)`, `M₀(k)` and the
//! `ℤ₂^k` Cayley family with many TF-isomorphic mates.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::group::{FiniteGroup, GroupAutomorphism};
use crate::semidirect::SemidirectZ2;

/// A graph with one display label per vertex.
#[derive(Clone, Debug, Serialize)]
pub struct LabeledGraph {
    #[serde(skip)]
    pub graph: Graph,
    pub labels: Vec<String>,
}

impl LabeledGraph {
    fn new(graph: Graph, labels: Vec<String>) -> Self {
        debug_assert_eq!(graph.order(), labels.len());
        debug_assert_eq!(labels.iter().collect::<HashSet<_>>().len(), labels.len());
        LabeledGraph { graph, labels }
    }

    fn plain(graph: Graph) -> Self {
        let labels = (0..graph.order()).map(|v| v.to_string()).collect();
        LabeledGraph { graph, labels }
    }
}

/// Edges of `R(n₀)` on 1-based labels `1..=n₀+6`.
pub fn skeleton_edges(n0: usize) -> Result<Vec<(usize, usize)>> {
    if n0 < 6 {
        return Err(Error::Construction(format!("R(n0) needs n0 >= 6, got {n0}")));
    }
    let mut e: Vec<(usize, usize)> = (1..n0).map(|i| (i, i + 1)).collect();
    e.push((2, 4));
    // vertex n₀ is joined to both hubs as well; without it deg(n₀) would be 1
    for i in 1..=n0 {
        e.push((i, n0 + 1));
        e.push((i, n0 + 2));
    }
    e.extend((1..=5).map(|i| (n0 + i, n0 + i + 1)));
    e.extend([(n0 + 2, n0 + 4), (n0 + 2, n0 + 6), (n0 + 4, n0 + 6)]);
    Ok(e)
}

pub fn skeleton_r(n0: usize) -> Result<LabeledGraph> {
    let edges: Vec<(usize, usize)> = skeleton_edges(n0)?.into_iter().map(|(a, b)| (a - 1, b - 1)).collect();
    let g = Graph::from_edges(n0 + 6, &edges)?;
    Ok(LabeledGraph::new(g, (1..=n0 + 6).map(|i| i.to_string()).collect()))
}

/// `n₀ = 1 + max(rank, 5)`.
pub fn skeleton_size(rank: usize) -> usize {
    1 + rank.max(5)
}

/// Vertex index of `(h, i)` with 1-based skeleton coordinate `i`.
pub fn hsigma_index(order: usize, h: usize, i: usize) -> usize {
    (i - 1) * order + h
}

/// `Γ_{(H,σ),X}`; `X` defaults to the lexicographically first minimal generating set.
pub fn gamma_construction(h: &FiniteGroup, sigma: &GroupAutomorphism, x: Option<&[usize]>) -> Result<LabeledGraph> {
    let (rank, witness) = h.rank()?;
    let x: Vec<usize> = match x {
        Some(x) => {
            if x.len() != rank || !h.generates(x) {
                return Err(Error::Construction(format!(
                    "X must be a generating set of size rank(H) = {rank}"
                )));
            }
            x.to_vec()
        }
        None => witness,
    };
    if sigma.map().len() != h.order() {
        return Err(Error::Construction("sigma does not act on H".into()));
    }
    let n0 = skeleton_size(rank);
    let m = h.order();
    let mut g = Graph::new(m * (n0 + 6))?;
    for (i, j) in skeleton_edges(n0)? {
        let (i, j) = if j == n0 + 1 { (i, j) } else if i == n0 + 1 { (j, i) } else { (i, j) };
        for h1 in 0..m {
            let s = sigma.apply(h1);
            let h2 = if j == n0 + 1 && i <= rank { h.mul(s, x[i - 1]) } else { s };
            g.add_edge(hsigma_index(m, h1, i), hsigma_index(m, h2, j))?;
        }
    }
    let labels = (1..=n0 + 6).flat_map(|i| (0..m).map(move |hh| format!("(h{hh}, {i})"))).collect();
    Ok(LabeledGraph::new(g, labels))
}

/// Elements `h` with `h⁻¹σ(h) = s` for some `s`, i.e. the image of `α_σ`.
pub fn alpha_image(h: &FiniteGroup, sigma: &GroupAutomorphism) -> BTreeSet<usize> {
    (0..h.order()).map(|a| h.mul(h.inv(a), sigma.apply(a))).collect()
}

fn check_gcay_set(h: &FiniteGroup, sigma: &GroupAutomorphism, s: &BTreeSet<usize>) -> Result<()> {
    if let Some(&bad) = s.iter().find(|&&a| a >= h.order()) {
        return Err(Error::Construction(format!("{bad} is not an element of H")));
    }
    if let Some(&a) = s.iter().find(|&&a| !s.contains(&h.inv(sigma.apply(a)))) {
        return Err(Error::Construction(format!("S != sigma(S)^-1: sigma({a})^-1 is missing")));
    }
    let im = alpha_image(h, sigma);
    if let Some(a) = s.intersection(&im).next() {
        return Err(Error::Construction(format!("{a} lies in Im(alpha_sigma) and would create a loop")));
    }
    Ok(())
}

/// `GCay(H,σ,S)`: `h₁ ~ h₂` iff `h₁⁻¹σ(h₂) ∈ S`.
pub fn gcay(h: &FiniteGroup, sigma: &GroupAutomorphism, s: &[usize]) -> Result<LabeledGraph> {
    let set: BTreeSet<usize> = s.iter().copied().collect();
    check_gcay_set(h, sigma, &set)?;
    let m = h.order();
    let mut g = Graph::new(m)?;
    for h1 in 0..m {
        for h2 in h1 + 1..m {
            if set.contains(&h.mul(h.inv(h1), sigma.apply(h2))) {
                g.add_edge(h1, h2)?;
            }
        }
    }
    Ok(LabeledGraph::new(g, (0..m).map(|a| format!("h{a}")).collect()))
}

/// `Cay(H,S)`: `h₁ ~ h₂` iff `h₁⁻¹h₂ ∈ S`.
pub fn cayley(h: &FiniteGroup, s: &[usize]) -> Result<LabeledGraph> {
    let set: BTreeSet<usize> = s.iter().copied().collect();
    if set.contains(&h.identity()) {
        return Err(Error::Construction("the identity cannot be in S".into()));
    }
    if let Some(&a) = set.iter().find(|&&a| a >= h.order() || !set.contains(&h.inv(a))) {
        return Err(Error::Construction(format!("S is not closed under inverses at {a}")));
    }
    let m = h.order();
    let mut g = Graph::new(m)?;
    for h1 in 0..m {
        for h2 in h1 + 1..m {
            if set.contains(&h.mul(h.inv(h1), h2)) {
                g.add_edge(h1, h2)?;
            }
        }
    }
    Ok(LabeledGraph::new(g, (0..m).map(|a| format!("h{a}")).collect()))
}

/// Graph realising an achievable set `C ⊆ S(H,σ)` (given as semidirect indices):
/// `Γ_{(H,σ),X}` plus the edges of `GCay(H,σ, x·(S(H,σ) \ C))` on the cell `H × {n₀+2}`.
pub fn achievable_construction(h: &FiniteGroup, sigma: &GroupAutomorphism, c: &[usize]) -> Result<LabeledGraph> {
    let sd = SemidirectZ2::new(h, sigma)?;
    let s_all: BTreeSet<usize> = sd.s_set().into_iter().collect();
    let c: BTreeSet<usize> = c.iter().copied().collect();
    if !c.is_subset(&s_all) {
        return Err(Error::Construction("C is not contained in S(H,sigma)".into()));
    }
    if !c.contains(&sd.x()) {
        return Err(Error::Construction("C must contain the class of x".into()));
    }
    for &g in &c {
        if !sd.conjugacy_class(g).is_subset(&c) {
            return Err(Error::Construction(format!("C is not a union of conjugacy classes at {g}")));
        }
    }
    // x·(h,1) = (σ(h), 0)
    let s: Vec<usize> = s_all.difference(&c).map(|&g| sigma.apply(sd.parts(g).0)).collect();
    let base = gamma_construction(h, sigma, None)?;
    let extra = gcay(h, sigma, &s)?;
    let (rank, _) = h.rank()?;
    let cell = skeleton_size(rank) + 2;
    let mut g = base.graph;
    for (a, b) in extra.graph.edges() {
        g.add_edge(hsigma_index(h.order(), a, cell), hsigma_index(h.order(), b, cell))?;
    }
    Ok(LabeledGraph::new(g, base.labels))
}

/// Edges of `M(k)` on 1-based labels, sorted.
pub fn m_edges(k: usize) -> Result<Vec<(usize, usize)>> {
    if k < 13 {
        return Err(Error::Construction(format!("M(k) needs k >= 13, got {k}")));
    }
    let mut e = vec![
        (1, 2),
        (1, 3),
        (2, 4),
        (3, 5),
        (4, 5),
        (4, 7),
        (5, 6),
        (6, 8),
        (7, 8),
        (7, 9),
        (8, 10),
        (9, k),
    ];
    e.extend((10..k).map(|i| (i, i + 1)));
    e.sort_unstable();
    Ok(e)
}

pub fn m_graph(k: usize) -> Result<Graph> {
    let e: Vec<(usize, usize)> = m_edges(k)?.into_iter().map(|(a, b)| (a - 1, b - 1)).collect();
    Graph::from_edges(k, &e)
}

/// `M₀(k)`: vertices `(i,i)` at indices `0..k`, then the edges of `M(k)` in sorted order.
pub fn m0_graph(k: usize) -> Result<LabeledGraph> {
    let m = m_graph(k)?;
    let edges = m_edges(k)?;
    let sq = m.square();
    let nv = k + edges.len();
    let mut g = Graph::new(nv)?;
    for i in 0..k {
        for j in i + 1..k {
            if sq.has_edge(i, j) {
                g.add_edge(i, j)?;
            }
        }
    }
    for (idx, &(a, b)) in edges.iter().enumerate() {
        let v = k + idx;
        for i in 1..=k {
            let touches = i == a || i == b;
            let near = m.has_edge(i - 1, a - 1) || m.has_edge(i - 1, b - 1);
            if touches || near {
                g.add_edge(i - 1, v)?;
            }
        }
        for (jdx, &(c, d)) in edges.iter().enumerate().skip(idx + 1) {
            if a == c || a == d || b == c || b == d {
                g.add_edge(v, k + jdx)?;
            }
        }
    }
    let labels = (1..=k)
        .map(|i| format!("({i},{i})"))
        .chain(edges.iter().map(|(a, b)| format!("({a},{b})")))
        .collect();
    Ok(LabeledGraph::new(g, labels))
}

/// The connection set `{x_i} ∪ {x_i x_j : (i,j) ∈ E(M(k))}` as k-bit masks,
/// in the vertex order of `m0_graph(k)`.
pub fn grr_connection_set(k: usize) -> Result<Vec<u64>> {
    let edges = m_edges(k)?;
    if k > 63 {
        return Err(Error::Construction("k must fit in a machine word".into()));
    }
    Ok((0..k)
        .map(|i| 1u64 << i)
        .chain(edges.iter().map(|&(a, b)| (1u64 << (a - 1)) | (1u64 << (b - 1))))
        .collect())
}

/// Largest `k` for which the Cayley graph is materialized.
pub const GRR_MAX_K: usize = 16;

/// `Cay(ℤ₂^k, S)` with elements as k-bit masks; vertex index = mask.
pub fn grr_z2k(k: usize) -> Result<LabeledGraph> {
    let s: HashSet<u64> = grr_connection_set(k)?.into_iter().collect();
    if k > GRR_MAX_K {
        return Err(Error::Construction(format!("k = {k} exceeds the cap {GRR_MAX_K}")));
    }
    let n = 1usize << k;
    let mut g = Graph::new(n)?;
    for u in 0..n {
        for &x in &s {
            let v = u ^ x as usize;
            if u < v {
                g.add_edge(u, v)?;
            }
        }
    }
    let labels = (0..n).map(|u| format!("{u:0k$b}")).collect();
    Ok(LabeledGraph::new(g, labels))
}

/// `G′` on the connection set: `u ~ v` iff more than two ordered pairs
/// `(s₁, s₂) ∈ S × S` satisfy `s₁ s₂ = u v`. Vertex order matches `m0_graph(k)`.
pub fn local_graph(k: usize) -> Result<Graph> {
    let s = grr_connection_set(k)?;
    let mut g = Graph::new(s.len())?;
    for (a, &u) in s.iter().enumerate() {
        for (b, &v) in s.iter().enumerate().skip(a + 1) {
            let target = u ^ v;
            let pairs = s.iter().filter(|&&s1| s.contains(&(s1 ^ target))).count();
            if pairs > 2 {
                g.add_edge(a, b)?;
            }
        }
    }
    Ok(g)
}

/// Translations by `g ∉ S` are exactly the elements of `Ant₀` of the Cayley graph;
/// each one is checked against every vertex of the materialized graph.
pub fn grr_translation_ant0(k: usize, cay: &Graph) -> Result<Vec<u64>> {
    let n = 1usize << k;
    if cay.order() != n {
        return Err(Error::Construction("graph does not match k".into()));
    }
    Ok((0..n as u64)
        .filter(|&g| (0..n).all(|v| !cay.has_edge(v, v ^ g as usize)))
        .collect())
}

pub fn labeled(graph: Graph) -> LabeledGraph {
    LabeledGraph::plain(graph)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::builtin;
    use crate::twofold::ne_refinement;

    #[test]
    fn skeleton_degrees() {
        let r6 = skeleton_r(6).unwrap().graph;
        assert_eq!(r6.order(), 12);
        assert_eq!(r6.degree(6), 7);
        assert_eq!(r6.degree(7), 10);
        let r8 = skeleton_r(8).unwrap().graph;
        for v in [1, 8, 14] {
            assert_eq!(r8.degree(v - 1), 3, "vertex {v}");
        }
        for n0 in 6..=12 {
            assert!(ne_refinement(&skeleton_r(n0).unwrap().graph).0.is_discrete(), "n0 = {n0}");
        }
        assert!(skeleton_r(5).is_err());
    }

    #[test]
    fn hsigma_sizes() {
        let z3 = builtin::cyclic(3).unwrap();
        let inv = GroupAutomorphism::inversion(&z3).unwrap();
        let g = gamma_construction(&z3, &inv, None).unwrap();
        assert_eq!(g.graph.order(), 36);
        assert!(g.graph.is_reduced() && g.graph.is_connected() && !g.graph.is_bipartite());
        let t = builtin::trivial();
        assert_eq!(gamma_construction(&t, &GroupAutomorphism::identity(&t), None).unwrap().graph.order(), 12);
        let k = builtin::elementary_abelian_2(2).unwrap();
        assert_eq!(gamma_construction(&k, &GroupAutomorphism::identity(&k), None).unwrap().graph.order(), 48);
        assert!(gamma_construction(&k, &GroupAutomorphism::identity(&k), Some(&[1])).is_err());
    }

    #[test]
    fn gcay_examples() {
        let z4 = builtin::cyclic(4).unwrap();
        let inv = GroupAutomorphism::inversion(&z4).unwrap();
        let g = gcay(&z4, &inv, &[1, 3]).unwrap().graph;
        for a in 0..4 {
            for b in 0..4 {
                if a != b {
                    let expect = [1, 3].contains(&((8 - a - b) % 4));
                    assert_eq!(g.has_edge(a, b), expect);
                }
            }
        }
        assert_eq!(gcay(&z4, &inv, &[]).unwrap().graph.edge_count(), 0);
        let id = GroupAutomorphism::identity(&z4);
        assert_eq!(gcay(&z4, &id, &[1, 3]).unwrap().graph, cayley(&z4, &[1, 3]).unwrap().graph);
        assert!(gcay(&z4, &id, &[1]).is_err());
        assert!(gcay(&z4, &inv, &[2]).is_err());
        // odd order with inversion: Im(α) is everything
        let z3 = builtin::cyclic(3).unwrap();
        let inv3 = GroupAutomorphism::inversion(&z3).unwrap();
        assert_eq!(alpha_image(&z3, &inv3).len(), 3);
        assert!(gcay(&z3, &inv3, &[1, 2]).is_err());
    }

    #[test]
    fn cayley_examples() {
        let z5 = builtin::cyclic(5).unwrap();
        let c5 = cayley(&z5, &[1, 4]).unwrap().graph;
        assert!(c5.degrees().iter().all(|&d| d == 2) && c5.is_connected());
        let q3 = cayley(&builtin::elementary_abelian_2(3).unwrap(), &[1, 2, 4]).unwrap().graph;
        assert!(q3.degrees().iter().all(|&d| d == 3) && q3.is_bipartite() && q3.edge_count() == 12);
        assert!(cayley(&z5, &[0]).is_err());
        assert!(cayley(&z5, &[1]).is_err());
    }

    #[test]
    fn m_family() {
        assert_eq!(m_graph(13).unwrap().edge_count(), 15);
        let m0 = m0_graph(13).unwrap();
        assert_eq!(m0.graph.order(), 28);
        let deg11: Vec<&str> = (0..28)
            .filter(|&v| m0.graph.degree(v) == 11)
            .map(|v| m0.labels[v].as_str())
            .collect();
        assert_eq!(deg11, vec!["(5,5)", "(8,8)"]);
        assert_eq!(local_graph(13).unwrap(), m0.graph);
        assert_eq!(grr_connection_set(13).unwrap().len(), 28);
        assert!(m_graph(12).is_err());
    }
}
