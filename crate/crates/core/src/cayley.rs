//! The mixed Cayley graph Cay(D_N, {a, b}).
//!
//! Vertex `(s, r)` stands for `b^s a^r`. Generator `a` gives two directed
//! N-cycles of opposite orientation (inner `s = 0`, outer `s = 1`); the
//! involution `b` gives undirected edges `(0, r) – (1, r)`.

use std::collections::VecDeque;
use std::fmt::Write;

use serde::Serialize;

use crate::error::{input, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DihedralVertex {
    pub s: u8,
    pub r: usize,
}

impl DihedralVertex {
    pub fn new(s: u8, r: usize) -> Self {
        Self { s, r }
    }
}

/// Position of vertex `(s, r)` in the canonical ordering `s·n + r`.
pub fn vertex_index(s: u8, r: usize, n: usize) -> Result<usize> {
    if s > 1 {
        return input(format!("reflection bit must be 0 or 1, got {s}"));
    }
    if r >= n {
        return input(format!("rotation index {r} out of range for n = {n}"));
    }
    Ok(s as usize * n + r)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CayleyGraph {
    n: usize,
    directed_arcs: Vec<(DihedralVertex, DihedralVertex)>,
    undirected_edges: Vec<(DihedralVertex, DihedralVertex)>,
}

pub fn build_cayley(n: usize) -> Result<CayleyGraph> {
    if n < 3 {
        return input(format!("dihedral Cayley graph needs n >= 3, got {n}"));
    }
    let v = DihedralVertex::new;
    let inner = (0..n).map(|r| (v(0, r), v(0, (r + 1) % n)));
    let outer = (0..n).map(|r| (v(1, r), v(1, (r + n - 1) % n)));
    Ok(CayleyGraph {
        n,
        directed_arcs: inner.chain(outer).collect(),
        undirected_edges: (0..n).map(|r| (v(0, r), v(1, r))).collect(),
    })
}

impl CayleyGraph {
    /// Assembles an arbitrary arc/edge set on the 2n dihedral vertices.
    pub fn from_parts(
        n: usize,
        directed_arcs: Vec<(DihedralVertex, DihedralVertex)>,
        undirected_edges: Vec<(DihedralVertex, DihedralVertex)>,
    ) -> Result<Self> {
        for &(a, b) in directed_arcs.iter().chain(&undirected_edges) {
            vertex_index(a.s, a.r, n)?;
            vertex_index(b.s, b.r, n)?;
        }
        Ok(Self { n, directed_arcs, undirected_edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        2 * self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = DihedralVertex> + '_ {
        (0..2u8).flat_map(move |s| (0..self.n).map(move |r| DihedralVertex::new(s, r)))
    }

    pub fn directed_arcs(&self) -> &[(DihedralVertex, DihedralVertex)] {
        &self.directed_arcs
    }

    pub fn undirected_edges(&self) -> &[(DihedralVertex, DihedralVertex)] {
        &self.undirected_edges
    }

    fn index(&self, v: DihedralVertex) -> usize {
        v.s as usize * self.n + v.r
    }

    /// Out-neighbours with undirected edges counted both ways.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count()];
        for &(a, b) in &self.directed_arcs {
            adj[self.index(a)].push(self.index(b));
        }
        for &(a, b) in &self.undirected_edges {
            adj[self.index(a)].push(self.index(b));
            adj[self.index(b)].push(self.index(a));
        }
        adj
    }

    /// `D s r s' r'` per arc, then `U s r s' r'` per undirected edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (a, b) in &self.directed_arcs {
            writeln!(out, "D {} {} {} {}", a.s, a.r, b.s, b.r).unwrap();
        }
        for (a, b) in &self.undirected_edges {
            writeln!(out, "U {} {} {} {}", a.s, a.r, b.s, b.r).unwrap();
        }
        out
    }
}

fn reachable(adj: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([from]);
    seen[from] = true;
    while let Some(u) = queue.pop_front() {
        if u == to {
            return true;
        }
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    false
}

/// Every directed arc `u → v` has a return path `v ⇝ u`.
pub fn is_reversible(g: &CayleyGraph) -> bool {
    let adj = g.adjacency();
    g.directed_arcs
        .iter()
        .all(|&(u, v)| reachable(&adj, g.index(v), g.index(u)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn d4_arcs_and_edges() {
        let g = build_cayley(4).unwrap();
        assert_eq!(g.vertex_count(), 8);
        assert_eq!(g.directed_arcs().len(), 8);
        assert_eq!(g.undirected_edges().len(), 4);
        let v = DihedralVertex::new;
        // inner cycle e → a → a² → a³ → e
        for r in 0..4 {
            assert!(g.directed_arcs().contains(&(v(0, r), v(0, (r + 1) % 4))));
        }
        // outer cycle b → ba³ → ba² → ba → b
        for (from, to) in [(0, 3), (3, 2), (2, 1), (1, 0)] {
            assert!(g.directed_arcs().contains(&(v(1, from), v(1, to))));
        }
    }

    #[test]
    fn d3_counts() {
        let g = build_cayley(3).unwrap();
        assert_eq!((g.vertex_count(), g.directed_arcs().len(), g.undirected_edges().len()), (6, 6, 3));
    }

    #[test]
    fn too_small() {
        assert!(build_cayley(2).is_err());
        assert!(build_cayley(0).is_err());
    }

    #[test]
    fn vertex_index_examples() {
        assert_eq!(vertex_index(0, 0, 4).unwrap(), 0);
        assert_eq!(vertex_index(1, 2, 4).unwrap(), 6);
        assert!(vertex_index(1, 4, 4).is_err());
        assert!(vertex_index(2, 0, 4).is_err());
    }

    #[test]
    fn degrees() {
        let g = build_cayley(7).unwrap();
        for v in g.vertices() {
            let out = g.directed_arcs().iter().filter(|(a, _)| *a == v).count();
            let und = g.undirected_edges().iter().filter(|(a, b)| *a == v || *b == v).count();
            assert_eq!((out, und), (1, 1));
        }
    }

    #[test]
    fn edge_list_format() {
        let text = build_cayley(3).unwrap().to_edge_list();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        assert_eq!(lines[0], "D 0 0 0 1");
        assert_eq!(lines[3], "D 1 0 1 2");
        assert_eq!(lines[6], "U 0 0 1 0");
    }
}
