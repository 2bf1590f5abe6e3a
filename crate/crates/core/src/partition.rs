use serde::Serialize;

use crate::error::{Error, Result};

/// An ordered partition of `0..n` into disjoint cells.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct VertexPartition {
    cells: Vec<Vec<usize>>,
}

impl VertexPartition {
    /// Cells from per-vertex keys, ordered by `(key, smallest vertex)`.
    pub fn from_keys<K: Ord + Clone>(keys: &[K]) -> Self {
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by(|&a, &b| keys[a].cmp(&keys[b]).then(a.cmp(&b)));
        let mut cells: Vec<Vec<usize>> = Vec::new();
        for v in order {
            match cells.last_mut() {
                Some(cell) if keys[cell[0]] == keys[v] => cell.push(v),
                _ => cells.push(vec![v]),
            }
        }
        VertexPartition { cells }
    }

    pub fn from_cells(n: usize, mut cells: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for cell in &mut cells {
            cell.sort_unstable();
            for &v in cell.iter() {
                if v >= n || seen[v] {
                    return Err(Error::Precondition(format!("vertex {v} repeated or out of range")));
                }
                seen[v] = true;
            }
        }
        if seen.iter().any(|s| !s) || cells.iter().any(Vec::is_empty) {
            return Err(Error::Precondition("cells do not cover every vertex".into()));
        }
        cells.sort_by_key(|c| c[0]);
        Ok(VertexPartition { cells })
    }

    pub fn cells(&self) -> &[Vec<usize>] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn is_discrete(&self) -> bool {
        self.cells.iter().all(|c| c.len() == 1)
    }

    /// Cell index of every vertex.
    pub fn cell_of(&self) -> Vec<usize> {
        let n = self.cells.iter().map(Vec::len).sum();
        let mut out = vec![0; n];
        for (i, cell) in self.cells.iter().enumerate() {
            for &v in cell {
                out[v] = i;
            }
        }
        out
    }

    /// Whether every cell of `finer` lies inside a single cell of `self`.
    pub fn is_coarsening_of(&self, finer: &VertexPartition) -> bool {
        let mine = self.cell_of();
        finer.cells.iter().all(|c| c.iter().all(|&v| mine[v] == mine[c[0]]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_and_refinement() {
        let p = VertexPartition::from_keys(&[2, 1, 2, 1, 0]);
        assert_eq!(p.cells(), &[vec![4], vec![1, 3], vec![0, 2]]);
        let q = VertexPartition::from_cells(5, vec![vec![2], vec![0], vec![1, 3], vec![4]]).unwrap();
        assert!(p.is_coarsening_of(&q));
        assert!(!q.is_coarsening_of(&p));
        assert!(VertexPartition::from_cells(3, vec![vec![0, 1]]).is_err());
        assert_eq!(p.cell_of(), vec![2, 1, 2, 1, 0]);
    }
}
