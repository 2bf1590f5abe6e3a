//! Finite simple graphs stored as packed adjacency bit-rows.
//!
//! Every vertex owns a word-aligned bitset row, so neighbourhood equality,
//! subset tests, complement and square reduce to word-parallel loops. A graph
//! may optionally carry loops; that variant exists only for the loop census
//! and most derived operations reject it.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;

const WORD: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    allow_loops: bool,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .field("allow_loops", &self.allow_loops)
            .finish()
    }
}

impl Graph {
    /// Edgeless simple graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self> {
        Self::build(n, false)
    }

    /// Edgeless graph on `n` vertices that will accept loops.
    pub fn with_loops(n: usize) -> Result<Self> {
        Self::build(n, true)
    }

    fn build(n: usize, allow_loops: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let words = n.div_ceil(WORD);
        Ok(Graph { n, words, bits: vec![0; n * words], allow_loops })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn allows_loops(&self) -> bool {
        self.allow_loops
    }

    /// Number of words in one adjacency row.
    pub fn row_words(&self) -> usize {
        self.words
    }

    fn check(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        if u == v && !self.allow_loops {
            return Err(Error::Unsupported(format!("loop at vertex {u} in a simple graph")));
        }
        self.set(u, v, true);
        self.set(v, u, true);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.check(u)?;
        self.check(v)?;
        self.set(u, v, false);
        self.set(v, u, false);
        Ok(())
    }

    #[inline]
    fn set(&mut self, u: usize, v: usize, on: bool) {
        let w = &mut self.bits[u * self.words + v / WORD];
        let mask = 1u64 << (v % WORD);
        if on {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / WORD] >> (v % WORD) & 1 == 1
    }

    #[inline]
    pub fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|v| self.has_edge(v, v))
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        bits_iter(self.row(v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn edge_count(&self) -> usize {
        let total: usize = self.degrees().iter().sum();
        let loops = (0..self.n).filter(|&v| self.has_edge(v, v)).count();
        (total - loops) / 2 + loops
    }

    /// Edges as `(u, v)` with `u <= v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if u <= v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|v| self.neighbors(v).collect()).collect()
    }

    /// Open neighbourhood `N(v)`; contains `v` only when a loop sits on it.
    pub fn neighborhood(&self, v: usize) -> Result<Vec<usize>> {
        self.check(v)?;
        Ok(self.neighbors(v).collect())
    }

    /// All vertices at distance at most `r` from `v`.
    pub fn ball(&self, v: usize, r: usize) -> Result<Vec<usize>> {
        self.check(v)?;
        let dist = self.bfs(v);
        Ok((0..self.n).filter(|&w| matches!(dist[w], Some(d) if d <= r)).collect())
    }

    fn bfs(&self, s: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        dist[s] = Some(0);
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for w in self.neighbors(u) {
                if dist[w].is_none() {
                    dist[w] = Some(du + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// All-pairs shortest path lengths; `None` marks unreachable pairs.
    pub fn distance_matrix(&self) -> Vec<Vec<Option<usize>>> {
        (0..self.n).map(|s| self.bfs(s)).collect()
    }

    /// Largest finite distance, or `None` for a disconnected graph.
    pub fn diameter(&self) -> Option<usize> {
        let mut best = 0;
        for row in self.distance_matrix() {
            for d in row {
                best = best.max(d?);
            }
        }
        Some(best)
    }

    /// First pair of distinct vertices with equal neighbourhoods, if any.
    pub fn twins(&self) -> Option<(usize, usize)> {
        let mut seen: HashMap<&[u64], usize> = HashMap::with_capacity(self.n);
        for v in 0..self.n {
            if let Some(&u) = seen.get(self.row(v)) {
                return Some((u, v));
            }
            seen.insert(self.row(v), v);
        }
        None
    }

    pub fn is_reduced(&self) -> bool {
        self.twins().is_none()
    }

    pub fn is_connected(&self) -> bool {
        self.bfs(0).iter().all(Option::is_some)
    }

    /// A proper 2-colouring (`false`/`true` per vertex) when one exists.
    pub fn bipartition(&self) -> Option<Vec<bool>> {
        let mut side: Vec<Option<bool>> = vec![None; self.n];
        for s in 0..self.n {
            if side[s].is_some() {
                continue;
            }
            side[s] = Some(false);
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                let su = side[u].unwrap();
                for w in self.neighbors(u) {
                    match side[w] {
                        None => {
                            side[w] = Some(!su);
                            queue.push_back(w);
                        }
                        Some(sw) if sw == su => return None,
                        _ => {}
                    }
                }
            }
        }
        Some(side.into_iter().map(Option::unwrap).collect())
    }

    pub fn is_bipartite(&self) -> bool {
        self.bipartition().is_some()
    }

    pub fn complement(&self) -> Result<Graph> {
        if self.has_loops() {
            return Err(Error::Unsupported("complement of a graph with loops".into()));
        }
        let mut out = Graph::new(self.n)?;
        for (o, i) in out.bits.iter_mut().zip(&self.bits) {
            *o = !i;
        }
        out.mask_tail();
        for v in 0..self.n {
            out.set(v, v, false);
        }
        Ok(out)
    }

    fn mask_tail(&mut self) {
        let rem = self.n % WORD;
        if rem == 0 {
            return;
        }
        let mask = (1u64 << rem) - 1;
        for v in 0..self.n {
            self.bits[v * self.words + self.words - 1] &= mask;
        }
    }

    /// Vertices joined when they have a common neighbour; never adds loops.
    pub fn square(&self) -> Graph {
        let mut out = Graph::new(self.n).expect("n >= 1");
        for u in 0..self.n {
            let start = u * self.words;
            for w in self.neighbors(u) {
                let row = self.row(w);
                for (o, r) in out.bits[start..start + self.words].iter_mut().zip(row) {
                    *o |= r;
                }
            }
            out.set(u, u, false);
        }
        out
    }

    pub fn has_triangle(&self) -> bool {
        self.edges().iter().any(|&(u, v)| {
            u != v
                && self
                    .row(u)
                    .iter()
                    .zip(self.row(v))
                    .enumerate()
                    .any(|(i, (a, b))| {
                        let mut common = a & b;
                        // ignore u and v themselves (only relevant with loops)
                        for x in [u, v] {
                            if x / WORD == i {
                                common &= !(1u64 << (x % WORD));
                            }
                        }
                        common != 0
                    })
        })
    }

    /// Any cycle through six distinct vertices, induced or not.
    pub fn has_hexagon(&self) -> bool {
        let adj = self.adjacency_lists();
        let mut path = Vec::with_capacity(6);
        let mut on_path = vec![false; self.n];
        (0..self.n).any(|s| {
            path.clear();
            path.push(s);
            on_path[s] = true;
            let found = self.hexagon_dfs(&adj, s, &mut path, &mut on_path);
            on_path[s] = false;
            found
        })
    }

    fn hexagon_dfs(
        &self,
        adj: &[Vec<usize>],
        start: usize,
        path: &mut Vec<usize>,
        on_path: &mut [bool],
    ) -> bool {
        let last = *path.last().unwrap();
        if path.len() == 6 {
            return self.has_edge(last, start);
        }
        for &w in &adj[last] {
            // start is the smallest vertex of the cycle
            if w <= start || on_path[w] {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            let found = self.hexagon_dfs(adj, start, path, on_path);
            on_path[w] = false;
            path.pop();
            if found {
                return true;
            }
        }
        false
    }

    /// Whether some `N(u)` is a proper subset of another `N(v)`.
    pub fn has_nested_neighborhoods(&self) -> bool {
        (0..self.n).any(|u| {
            (0..self.n).any(|v| {
                u != v
                    && self.row(u) != self.row(v)
                    && self.row(u).iter().zip(self.row(v)).all(|(a, b)| a & !b == 0)
            })
        })
    }

    /// Image of the graph under a relabelling: edge `(u, v)` becomes `(p(u), p(v))`.
    pub fn relabel(&self, p: &Permutation) -> Result<Graph> {
        if p.degree() != self.n {
            return Err(Error::DegreeMismatch(p.degree(), self.n));
        }
        let mut out = Graph::build(self.n, self.allow_loops)?;
        for (u, v) in self.edges() {
            out.set(p.apply(u), p.apply(v), true);
            out.set(p.apply(v), p.apply(u), true);
        }
        Ok(out)
    }

    /// Whether `p` maps edges onto edges (and non-edges onto non-edges).
    pub fn is_automorphism(&self, p: &Permutation) -> bool {
        p.degree() == self.n
            && self.edges().iter().all(|&(u, v)| self.has_edge(p.apply(u), p.apply(v)))
    }

    /// Whether every vertex set `cells[i]` induces an edgeless subgraph.
    pub fn is_coclique(&self, vertices: &[usize]) -> bool {
        vertices
            .iter()
            .all(|&u| vertices.iter().all(|&v| !self.has_edge(u, v)))
    }

    /// Neighbourhood `N(v)` as a freshly allocated bit row.
    pub fn row_vec(&self, v: usize) -> Vec<u64> {
        self.row(v).to_vec()
    }

    /// Image of a bit row under `p`.
    pub fn permute_row(&self, row: &[u64], p: &Permutation) -> Vec<u64> {
        let mut out = vec![0u64; self.words];
        for x in bits_iter(row) {
            let y = p.apply(x);
            out[y / WORD] |= 1u64 << (y % WORD);
        }
        out
    }

    /// Adjacency-list text: first line `n`, then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{}\n", self.n);
        for (u, v) in self.edges() {
            s.push_str(&format!("{u} {v}\n"));
        }
        s
    }

    pub fn from_edge_list(text: &str) -> Result<Graph> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or_else(|| Error::parse(0, "empty input"))?;
        let n: usize = first
            .trim()
            .parse()
            .map_err(|_| Error::parse(0, format!("bad vertex count {first:?}")))?;
        let mut edges = Vec::new();
        for (lineno, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed: Option<Vec<usize>> = parts.iter().map(|p| p.parse().ok()).collect();
            match parsed.as_deref() {
                Some(&[u, v]) => edges.push((u, v)),
                _ => return Err(Error::parse(lineno, format!("expected `u v`, got {line:?}"))),
            }
        }
        let loops = edges.iter().any(|(u, v)| u == v);
        let mut g = if loops { Graph::with_loops(n)? } else { Graph::new(n)? };
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in 0..self.n {
            s.push_str(&format!("  {v};\n"));
        }
        for (u, v) in self.edges() {
            s.push_str(&format!("  {u} -- {v};\n"));
        }
        s.push_str("}\n");
        s
    }
}

pub(crate) fn bits_iter(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(i, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                None
            } else {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * WORD + b)
            }
        })
    })
}

/// Small named graphs used throughout tests and the CLI.
pub mod named {
    use super::Graph;
    use crate::error::Result;

    pub fn complete(n: usize) -> Result<Graph> {
        let mut g = Graph::new(n)?;
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v)?;
            }
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        let mut g = Graph::new(n)?;
        for v in 0..n {
            if n > 1 && v != (v + 1) % n {
                g.add_edge(v, (v + 1) % n)?;
            }
        }
        Ok(g)
    }

    pub fn path(n: usize) -> Result<Graph> {
        let mut g = Graph::new(n)?;
        for v in 1..n {
            g.add_edge(v - 1, v)?;
        }
        Ok(g)
    }

    pub fn empty(n: usize) -> Result<Graph> {
        Graph::new(n)
    }

    pub fn star(leaves: usize) -> Result<Graph> {
        let mut g = Graph::new(leaves + 1)?;
        for v in 1..=leaves {
            g.add_edge(0, v)?;
        }
        Ok(g)
    }

    /// Outer 5-cycle 0..5, inner pentagram 5..10, spokes `i -- i+5`.
    pub fn petersen() -> Graph {
        let mut g = Graph::new(10).unwrap();
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5).unwrap();
            g.add_edge(5 + i, 5 + (i + 2) % 5).unwrap();
            g.add_edge(i, i + 5).unwrap();
        }
        g
    }

    /// Disjoint union of two graphs, the second shifted by `a.order()`.
    pub fn disjoint_union(a: &Graph, b: &Graph) -> Result<Graph> {
        let mut g = Graph::new(a.order() + b.order())?;
        for (u, v) in a.edges() {
            g.add_edge(u, v)?;
        }
        for (u, v) in b.edges() {
            g.add_edge(u + a.order(), v + a.order())?;
        }
        Ok(g)
    }

    /// Parse short names: `petersen`, `K:n`, `C:n`, `P:n`, `E:n`, `star:n`.
    pub fn by_name(name: &str) -> Option<Result<Graph>> {
        if name.eq_ignore_ascii_case("petersen") {
            return Some(Ok(petersen()));
        }
        let (kind, arg) = name.split_once(':')?;
        let n: usize = arg.parse().ok()?;
        Some(match kind {
            "K" => complete(n),
            "C" => cycle(n),
            "P" => path(n),
            "E" => empty(n),
            "star" => star(n),
            _ => return None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    #[test]
    fn neighborhood_examples() {
        let k3 = complete(3).unwrap();
        assert_eq!(k3.neighborhood(0).unwrap(), vec![1, 2]);
        let p = petersen();
        for v in 0..10 {
            assert_eq!(p.neighborhood(v).unwrap().len(), 3);
        }
        assert!(Graph::new(1).unwrap().neighborhood(0).unwrap().is_empty());
        assert!(matches!(k3.neighborhood(3), Err(Error::VertexOutOfRange { .. })));
    }

    #[test]
    fn ball_examples() {
        let c5 = cycle(5).unwrap();
        assert_eq!(c5.ball(0, 1).unwrap(), vec![0, 1, 4]);
        assert_eq!(c5.ball(0, 2).unwrap(), vec![0, 1, 2, 3, 4]);
        let two = empty(2).unwrap();
        assert_eq!(two.ball(0, 5).unwrap(), vec![0]);
    }

    #[test]
    fn reduced_connected_bipartite() {
        assert!(complete(3).unwrap().is_reduced());
        assert!(!cycle(4).unwrap().is_reduced());
        assert!(petersen().is_reduced());
        let c6 = cycle(6).unwrap();
        assert!(c6.is_connected() && c6.is_bipartite());
        let coloring = c6.bipartition().unwrap();
        for (u, v) in c6.edges() {
            assert_ne!(coloring[u], coloring[v]);
        }
        assert!(!cycle(5).unwrap().is_bipartite());
        let two_k2 = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(!two_k2.is_connected());
    }

    #[test]
    fn complement_examples() {
        let k4 = complete(4).unwrap();
        assert_eq!(k4.complement().unwrap().edge_count(), 0);
        let g = Graph::from_edges(70, &[(0, 69), (3, 64), (10, 11)]).unwrap();
        assert_eq!(g.complement().unwrap().complement().unwrap(), g);
        let c5 = cycle(5).unwrap().complement().unwrap();
        assert_eq!(c5.edge_count(), 5);
        assert!(c5.degrees().iter().all(|&d| d == 2) && c5.is_connected());
        let mut l = Graph::with_loops(2).unwrap();
        l.add_edge(0, 0).unwrap();
        assert!(matches!(l.complement(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn square_examples() {
        assert_eq!(path(3).unwrap().square().edges(), vec![(0, 2)]);
        let sq = cycle(5).unwrap().square();
        assert_eq!(sq.edge_count(), 5);
        assert_eq!(sq.edges(), vec![(0, 2), (0, 3), (1, 3), (1, 4), (2, 4)]);
        assert_eq!(complete(3).unwrap().square(), complete(3).unwrap());
    }

    #[test]
    fn distances() {
        let c5 = cycle(5).unwrap();
        assert_eq!(c5.distance_matrix()[0][2], Some(2));
        assert_eq!(empty(2).unwrap().distance_matrix()[0][1], None);
        assert_eq!(petersen().diameter(), Some(2));
        assert_eq!(empty(2).unwrap().diameter(), None);
    }

    #[test]
    fn cycle_and_nesting_predicates() {
        assert!(complete(3).unwrap().has_triangle());
        let c6 = cycle(6).unwrap();
        assert!(c6.has_hexagon() && !c6.has_triangle());
        assert!(!cycle(5).unwrap().has_hexagon());
        assert!(!cycle(7).unwrap().has_hexagon());
        assert!(complete(6).unwrap().has_hexagon());
        // leaves of a star share N = {centre}: equal, not nested
        assert!(!star(3).unwrap().has_nested_neighborhoods());
        assert!(!path(3).unwrap().has_nested_neighborhoods());
        // P4 plus a pendant on vertex 2: N(0) = {1} is inside N(2) = {1, 3, 4}
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (2, 4)]).unwrap();
        assert!(g.has_nested_neighborhoods());
    }

    #[test]
    fn nested_matches_brute_force() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (3, 5)]).unwrap();
        let sets: Vec<Vec<usize>> = (0..6).map(|v| g.neighborhood(v).unwrap()).collect();
        let brute = (0..6).any(|u| {
            (0..6).any(|v| {
                sets[u] != sets[v] && sets[u].iter().all(|x| sets[v].contains(x))
            })
        });
        assert_eq!(brute, g.has_nested_neighborhoods());
    }

    #[test]
    fn edge_list_round_trip() {
        let p = petersen();
        assert_eq!(Graph::from_edge_list(&p.to_edge_list()).unwrap(), p);
        assert!(Graph::from_edge_list("3\n0 x\n").is_err());
        assert!(p.to_dot().contains("0 -- 1;"));
    }

    #[test]
    fn loops_are_neighbors_of_themselves() {
        let mut g = Graph::with_loops(3).unwrap();
        g.add_edge(1, 1).unwrap();
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.neighborhood(1).unwrap(), vec![0, 1]);
        assert_eq!(g.edge_count(), 2);
        assert!(Graph::new(2).unwrap().add_edge(0, 0).is_err());
    }
}
