//! Brute-force references over `Sym(V)` for small graphs.
//!
//! Nothing here shares code with the search engine: permutations are
//! enumerated in lexicographic order and each defining condition is tested
//! literally, pruning only once a condition is fully decided.

use std::collections::{BTreeSet, HashSet};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::perm::Permutation;

pub const ORACLE_MAX_N: usize = 10;

fn check_cap(g: &Graph) -> Result<()> {
    if g.order() > ORACLE_MAX_N {
        return Err(Error::ResourceCap { what: "oracle vertex count", cap: ORACLE_MAX_N as u64 });
    }
    Ok(())
}

fn neighbourhood_sets(g: &Graph) -> Vec<BTreeSet<usize>> {
    (0..g.order()).map(|v| g.neighbors(v).collect()).collect()
}

/// Lexicographic enumeration of permutations with a prefix predicate.
fn enumerate(n: usize, prefix_ok: &mut dyn FnMut(&[usize]) -> bool, out: &mut dyn FnMut(&[usize]) -> bool) {
    fn rec(
        n: usize,
        prefix: &mut Vec<usize>,
        used: &mut [bool],
        prefix_ok: &mut dyn FnMut(&[usize]) -> bool,
        out: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if prefix.len() == n {
            return out(prefix);
        }
        for x in 0..n {
            if used[x] {
                continue;
            }
            prefix.push(x);
            used[x] = true;
            let stop = prefix_ok(prefix) && rec(n, prefix, used, prefix_ok, out);
            used[x] = false;
            prefix.pop();
            if stop {
                return true;
            }
        }
        false
    }
    let mut used = vec![false; n];
    rec(n, &mut Vec::with_capacity(n), &mut used, prefix_ok, out);
}

/// Edge-preserving bijections from `g1` to `g2`.
fn brute_isos(g1: &Graph, g2: &Graph, first_only: bool) -> Vec<Permutation> {
    let n = g1.order();
    let mut found = Vec::new();
    if n != g2.order() || g1.edge_count() != g2.edge_count() {
        return found;
    }
    let mut prefix_ok = |p: &[usize]| {
        let k = p.len() - 1;
        (0..=k).all(|j| g1.has_edge(k, j) == g2.has_edge(p[k], p[j]))
    };
    let mut out = |p: &[usize]| {
        found.push(Permutation::from_images(p.to_vec()).unwrap());
        first_only
    };
    enumerate(n, &mut prefix_ok, &mut out);
    found
}

/// All automorphisms, sorted.
pub fn brute_aut(g: &Graph) -> Result<Vec<Permutation>> {
    check_cap(g)?;
    Ok(brute_isos(g, g, false))
}

pub fn brute_iso(g1: &Graph, g2: &Graph) -> Result<bool> {
    check_cap(g1)?;
    check_cap(g2)?;
    Ok(!brute_isos(g1, g2, true).is_empty())
}

/// Every `π ∈ Sym(V)` with `π(N(v))` a neighbourhood for all `v`, paired with
/// `γ(π)`, in lexicographic order.
pub fn brute_aut_pi(g: &Graph) -> Result<Vec<(Permutation, Permutation)>> {
    check_cap(g)?;
    if let Some((u, v)) = g.twins() {
        return Err(Error::NotReduced(u, v));
    }
    let n = g.order();
    let nbhd = neighbourhood_sets(g);
    let family: HashSet<BTreeSet<usize>> = nbhd.iter().cloned().collect();
    // neighbourhoods that become fully assigned once vertex k is placed
    let mut closes_at: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, s) in nbhd.iter().enumerate() {
        closes_at[s.iter().next_back().copied().unwrap_or(0)].push(v);
    }
    let mut prefix_ok = |p: &[usize]| {
        closes_at[p.len() - 1].iter().all(|&v| {
            let image: BTreeSet<usize> = nbhd[v].iter().map(|&w| p[w]).collect();
            family.contains(&image)
        })
    };
    let mut found = Vec::new();
    let mut out = |p: &[usize]| {
        let gamma: Vec<usize> = (0..n)
            .map(|v| {
                let image: BTreeSet<usize> = nbhd[v].iter().map(|&w| p[w]).collect();
                (0..n).find(|&w| nbhd[w] == image).unwrap()
            })
            .collect();
        found.push((Permutation::from_images(p.to_vec()).unwrap(), Permutation::from_images(gamma).unwrap()));
        false
    };
    enumerate(n, &mut prefix_ok, &mut out);
    Ok(found)
}

/// Census classes by pairwise isomorphism testing; each class is a sorted
/// list of its `ψ`, classes ordered by smallest member.
pub fn brute_census(g: &Graph, allow_loops: bool) -> Result<Vec<Vec<Permutation>>> {
    check_cap(g)?;
    if !g.is_connected() || g.is_bipartite() {
        return Err(Error::Precondition("census needs a connected nonbipartite graph".into()));
    }
    let n = g.order();
    let pairs = brute_aut_pi(g)?;
    let candidates: Vec<Permutation> = pairs
        .into_iter()
        .filter(|(p, gp)| *gp == p.inverse())
        .filter(|(p, _)| allow_loops || (0..n).all(|v| !g.has_edge(v, p.apply(v))))
        .map(|(p, _)| p)
        .collect();
    // A·m_ψ entry-wise: (i, j) is an edge iff A[i][ψ(j)] = 1
    let witness = |psi: &Permutation| -> Graph {
        let mut w = Graph::with_loops(n).unwrap();
        for i in 0..n {
            for j in 0..n {
                if g.has_edge(i, psi.apply(j)) {
                    w.add_edge(i, j).unwrap();
                }
            }
        }
        w
    };
    let mut classes: Vec<(Graph, Vec<Permutation>)> = Vec::new();
    for psi in candidates {
        let w = witness(&psi);
        match classes.iter_mut().find(|(rep, _)| !brute_isos(rep, &w, true).is_empty()) {
            Some((_, members)) => members.push(psi),
            None => classes.push((w, vec![psi])),
        }
    }
    let mut out: Vec<Vec<Permutation>> = classes.into_iter().map(|(_, m)| m).collect();
    for c in &mut out {
        c.sort();
    }
    out.sort();
    Ok(out)
}
