//! Individualization-refinement search for colour-preserving isomorphisms.
//!
//! Source and target are refined in lockstep with the same deterministic
//! colour-refinement rule; a branch survives only while both sides produce
//! identical refinement traces. Every discrete leaf is checked edge by edge,
//! so the refinement hash only ever prunes and never decides.

use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Default cap on visited search-tree nodes.
pub const DEFAULT_NODE_BUDGET: u64 = 100_000_000;

static NODE_BUDGET: AtomicU64 = AtomicU64::new(DEFAULT_NODE_BUDGET);

/// Node cap used by every search that does not take an explicit budget.
pub fn node_budget() -> u64 {
    NODE_BUDGET.load(Ordering::Relaxed)
}

/// Replace the process-wide node cap.
pub fn set_node_budget(budget: u64) {
    NODE_BUDGET.store(budget, Ordering::Relaxed);
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    All,
    First,
}

#[inline]
fn mix(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Relabel arbitrary colour values to `0..k` by sorted value, appending the
/// colour histogram to `trace`.
fn normalize(colors: &[u64], trace: &mut Vec<u64>) -> Vec<u32> {
    let mut distinct: Vec<u64> = colors.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mut counts = vec![0u64; distinct.len()];
    let out: Vec<u32> = colors
        .iter()
        .map(|c| {
            let id = distinct.binary_search(c).unwrap();
            counts[id] += 1;
            id as u32
        })
        .collect();
    for (d, c) in distinct.iter().zip(counts) {
        trace.extend([*d, c]);
    }
    out
}

/// Stable colour refinement: a vertex's new colour is its old colour together
/// with the multiset of its neighbours' colours. Colour ids stay `0..k`, sorted
/// first by old colour so refinement never reorders existing cells.
pub(crate) fn refine(adj: &[Vec<u32>], colors: &mut [u32], trace: &mut Vec<u64>) -> usize {
    let n = adj.len();
    let mut k = colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut sigs: Vec<(u32, u64)> = Vec::with_capacity(n);
    loop {
        sigs.clear();
        sigs.extend(adj.iter().enumerate().map(|(v, nb)| {
            let h = nb.iter().fold(0u64, |acc, &w| acc.wrapping_add(mix(colors[w as usize] as u64)));
            (colors[v], h)
        }));
        let mut distinct = sigs.clone();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() == k {
            trace.push(u64::MAX);
            return k;
        }
        let mut counts = vec![0u64; distinct.len()];
        for (v, s) in sigs.iter().enumerate() {
            let id = distinct.binary_search(s).unwrap();
            counts[id] += 1;
            colors[v] = id as u32;
        }
        for ((c, h), cnt) in distinct.iter().zip(counts) {
            trace.extend([*c as u64, *h, cnt]);
        }
        k = distinct.len();
    }
}

pub(crate) fn adjacency(g: &Graph) -> Vec<Vec<u32>> {
    (0..g.order()).map(|v| g.neighbors(v).map(|w| w as u32).collect()).collect()
}

struct Search<'a> {
    src: &'a Graph,
    dst: &'a Graph,
    src_adj: Vec<Vec<u32>>,
    dst_adj: Vec<Vec<u32>>,
    mode: Mode,
    budget: u64,
    nodes: u64,
    found: Vec<Vec<usize>>,
}

/// All (or the first) bijections `f` from `src` to `dst` with
/// `colour_src(v) = colour_dst(f(v))` and `u ~ v ⇔ f(u) ~ f(v)`.
pub fn isomorphisms(
    src: &Graph,
    src_colors: &[u64],
    dst: &Graph,
    dst_colors: &[u64],
    mode: Mode,
    budget: u64,
) -> Result<Vec<Vec<usize>>> {
    let n = src.order();
    if n != dst.order() || src.edge_count() != dst.edge_count() {
        return Ok(Vec::new());
    }
    let mut st = Vec::new();
    let mut dt = Vec::new();
    let mut sc = normalize(src_colors, &mut st);
    let mut dc = normalize(dst_colors, &mut dt);
    if st != dt {
        return Ok(Vec::new());
    }
    let mut s = Search {
        src,
        dst,
        src_adj: adjacency(src),
        dst_adj: adjacency(dst),
        mode,
        budget,
        nodes: 0,
        found: Vec::new(),
    };
    st.clear();
    dt.clear();
    let k1 = refine(&s.src_adj, &mut sc, &mut st);
    let k2 = refine(&s.dst_adj, &mut dc, &mut dt);
    if k1 == k2 && st == dt {
        s.descend(sc, dc, k1)?;
    }
    Ok(s.found)
}

/// Automorphisms of `g` preserving `colors`.
pub fn automorphisms(g: &Graph, colors: &[u64], mode: Mode, budget: u64) -> Result<Vec<Vec<usize>>> {
    isomorphisms(g, colors, g, colors, mode, budget)
}

impl Search<'_> {
    /// Returns `true` once the search should stop.
    fn descend(&mut self, sc: Vec<u32>, dc: Vec<u32>, k: usize) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::ResourceCap { what: "search-tree nodes", cap: self.budget });
        }
        let n = sc.len();
        if k == n {
            let mut inv = vec![0usize; n];
            for (w, &c) in dc.iter().enumerate() {
                inv[c as usize] = w;
            }
            let map: Vec<usize> = sc.iter().map(|&c| inv[c as usize]).collect();
            if self.verify(&map) {
                self.found.push(map);
                return Ok(self.mode == Mode::First);
            }
            return Ok(false);
        }
        let mut sizes = vec![0usize; k];
        for &c in &sc {
            sizes[c as usize] += 1;
        }
        let cell = (0..k).filter(|&c| sizes[c] > 1).min_by_key(|&c| (sizes[c], c)).unwrap() as u32;
        let v = sc.iter().position(|&c| c == cell).unwrap();
        let mut s2 = sc.clone();
        s2[v] = k as u32;
        let mut st = Vec::new();
        let k2 = refine(&self.src_adj, &mut s2, &mut st);
        for w in (0..n).filter(|&w| dc[w] == cell) {
            let mut d2 = dc.clone();
            d2[w] = k as u32;
            let mut dt = Vec::with_capacity(st.len());
            let kd = refine(&self.dst_adj, &mut d2, &mut dt);
            if kd == k2 && dt == st && self.descend(s2.clone(), d2, k2)? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn verify(&self, map: &[usize]) -> bool {
        (0..map.len()).all(|u| {
            let nb = &self.src_adj[u];
            nb.len() == self.dst_adj[map[u]].len()
                && nb.iter().all(|&w| self.dst.has_edge(map[u], map[w as usize]))
        }) && self.src.order() == self.dst.order()
    }
}

/// Colour refinement of `g` seeded with `colors`, after individualizing `v`.
/// Returns the number of cells reached.
pub fn cells_after_individualizing(g: &Graph, colors: &[u64], v: usize) -> usize {
    let mut t = Vec::new();
    let mut c = normalize(colors, &mut t);
    let k = c.iter().map(|&x| x as usize + 1).max().unwrap_or(0);
    c[v] = k as u32;
    refine(&adjacency(g), &mut c, &mut t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    fn count_auts(g: &Graph) -> usize {
        automorphisms(g, &vec![0; g.order()], Mode::All, DEFAULT_NODE_BUDGET).unwrap().len()
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(count_auts(&named::petersen()), 120);
        assert_eq!(count_auts(&named::cycle(5).unwrap()), 10);
        assert_eq!(count_auts(&named::complete(5).unwrap()), 120);
        assert_eq!(count_auts(&named::empty(4).unwrap()), 24);
        assert_eq!(count_auts(&named::path(4).unwrap()), 2);
        assert_eq!(count_auts(&Graph::new(1).unwrap()), 1);
    }

    #[test]
    fn every_result_is_an_isomorphism() {
        let p = named::petersen();
        for m in automorphisms(&p, &[0; 10], Mode::All, DEFAULT_NODE_BUDGET).unwrap() {
            for (u, v) in p.edges() {
                assert!(p.has_edge(m[u], m[v]));
            }
        }
    }

    #[test]
    fn colours_restrict_maps() {
        let c6 = named::cycle(6).unwrap();
        let colors = [1, 0, 0, 0, 0, 0];
        assert_eq!(automorphisms(&c6, &colors, Mode::All, 1000).unwrap().len(), 2);
    }

    #[test]
    fn cross_graph() {
        let c5 = named::cycle(5).unwrap();
        let comp = c5.complement().unwrap();
        assert_eq!(isomorphisms(&c5, &[0; 5], &comp, &[0; 5], Mode::First, 1000).unwrap().len(), 1);
        let p5 = named::path(5).unwrap();
        assert!(isomorphisms(&c5, &[0; 5], &p5, &[0; 5], Mode::All, 1000).unwrap().is_empty());
    }

    #[test]
    fn budget_trips() {
        let e = named::empty(8).unwrap();
        assert!(matches!(
            automorphisms(&e, &[0; 8], Mode::All, 10),
            Err(Error::ResourceCap { .. })
        ));
    }
}
