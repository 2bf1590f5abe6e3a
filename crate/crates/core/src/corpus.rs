//! Exhaustive and random graph corpora for sweeps.

use std::collections::HashSet;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::search::{adjacency, refine};

/// Largest order the exhaustive generator accepts.
pub const CORPUS_MAX_N: usize = 8;

/// Canonical code: the minimum upper-triangle bit string over all relabellings
/// that respect the colour-refinement cell order.
pub fn canonical_code(g: &Graph) -> u64 {
    let n = g.order();
    let mut colors = vec![0u32; n];
    refine(&adjacency(g), &mut colors, &mut Vec::new());
    let mut cells: Vec<Vec<usize>> = vec![Vec::new(); colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0)];
    for v in 0..n {
        cells[colors[v] as usize].push(v);
    }
    let mut best = u64::MAX;
    let mut order = Vec::with_capacity(n);
    search_orders(g, &cells, 0, &mut order, &mut best);
    best
}

fn search_orders(g: &Graph, cells: &[Vec<usize>], c: usize, order: &mut Vec<usize>, best: &mut u64) {
    if c == cells.len() {
        *best = (*best).min(code_of(g, order));
        return;
    }
    let k = cells[c].len();
    for perm in cells[c].iter().copied().permutations(k) {
        let len = order.len();
        order.extend(perm);
        search_orders(g, cells, c + 1, order, best);
        order.truncate(len);
    }
}

/// Bits for pairs (order[i], order[j]), i < j, most significant first.
fn code_of(g: &Graph, order: &[usize]) -> u64 {
    let mut code = 0u64;
    for j in 1..order.len() {
        for i in 0..j {
            code = code << 1 | g.has_edge(order[i], order[j]) as u64;
        }
    }
    code
}

/// One representative of every isomorphism class of graphs on `n` vertices.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    assert!((1..=CORPUS_MAX_N).contains(&n), "corpus order {n} out of range");
    let mut level = vec![Graph::new(1).unwrap()];
    for m in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for g in &level {
            for mask in 0u32..1 << (m - 1) {
                let mut h = Graph::new(m).unwrap();
                for (u, v) in g.edges() {
                    h.add_edge(u, v).unwrap();
                }
                for u in 0..m - 1 {
                    if mask >> u & 1 == 1 {
                        h.add_edge(u, m - 1).unwrap();
                    }
                }
                if seen.insert(canonical_code(&h)) {
                    next.push(h);
                }
            }
        }
        level = next;
    }
    level
}

/// All graphs on at most `n_max` vertices.
pub fn all_graphs_up_to(n_max: usize) -> Vec<Graph> {
    (1..=n_max).flat_map(all_graphs).collect()
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n).unwrap();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// `count` random reduced graphs with orders drawn from `orders`.
pub fn random_reduced(seed: u64, orders: &[usize], count: usize) -> Vec<Graph> {
    random_filtered(seed, orders, count, |g| g.is_reduced())
}

pub fn random_filtered(seed: u64, orders: &[usize], count: usize, keep: impl Fn(&Graph) -> bool) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = orders[rng.gen_range(0..orders.len())];
        let g = random_graph(&mut rng, n, 0.5);
        if keep(&g) {
            out.push(g);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    #[test]
    fn class_counts_match_known_sequence() {
        let counts: Vec<usize> = (1..=6).map(|n| all_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156]);
    }

    #[test]
    fn canonical_code_is_invariant() {
        let c = named::cycle(7).unwrap();
        let q = c.relabel(&crate::perm::Permutation::from_images(vec![3, 1, 4, 0, 2, 6, 5]).unwrap()).unwrap();
        assert_eq!(canonical_code(&c), canonical_code(&q));
        assert_ne!(canonical_code(&c), canonical_code(&named::path(7).unwrap()));
        let g = Graph::from_edges(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (5, 6)]).unwrap();
        let h = g.relabel(&crate::perm::Permutation::from_images(vec![6, 2, 0, 5, 1, 3, 4]).unwrap()).unwrap();
        assert_eq!(canonical_code(&g), canonical_code(&h));
    }

    #[test]
    fn random_reduced_graphs_are_reduced() {
        let gs = random_reduced(7, &[8, 9], 20);
        assert!(gs.iter().all(Graph::is_reduced));
        assert_eq!(gs, random_reduced(7, &[8, 9], 20));
    }
}
