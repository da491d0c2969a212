//! Erdős–Rényi comparison graphs.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::stream::{self, tag};

/// Undirected simple graph over `n` objects.
///
/// Neighbor lists are sorted, so `neighbors(i)` enumerates N(i) in O(d_i).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonGraph {
    n: usize,
    adjacency: Vec<Vec<usize>>,
    edge_count: usize,
    d_max: usize,
    d_min: usize,
}

impl ComparisonGraph {
    /// Builds a graph from an edge list. Self-loops and duplicate pairs are rejected.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("graph needs at least one object"));
        }
        let mut adjacency = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(Error::param(format!("edge ({a}, {b}) out of range for n = {n}")));
            }
            if a == b {
                return Err(Error::param(format!("self-loop at {a}")));
            }
            adjacency[a].push(b);
            adjacency[b].push(a);
        }
        for (i, nbrs) in adjacency.iter_mut().enumerate() {
            nbrs.sort_unstable();
            if nbrs.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::param(format!("duplicate edge at object {i}")));
            }
        }
        Ok(Self::from_sorted_adjacency(adjacency))
    }

    fn from_sorted_adjacency(adjacency: Vec<Vec<usize>>) -> Self {
        let n = adjacency.len();
        let degrees = adjacency.iter().map(Vec::len);
        let d_max = degrees.clone().max().unwrap_or(0);
        let d_min = degrees.clone().min().unwrap_or(0);
        let edge_count = degrees.sum::<usize>() / 2;
        Self { n, adjacency, edge_count, d_max, d_min }
    }

    /// Complete graph on `n` objects.
    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n).map(|i| (0..n).filter(|&j| j != i).collect()).collect();
        Self::from_sorted_adjacency(adjacency)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adjacency[i].len()
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn d_min(&self) -> usize {
        self.d_min
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].binary_search(&j).is_ok()
    }

    /// Position of `j` inside `neighbors(i)`.
    pub fn neighbor_index(&self, i: usize, j: usize) -> Option<usize> {
        self.adjacency[i].binary_search(&j).ok()
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(i, nbrs)| nbrs.iter().filter(move |&&j| j > i).map(move |&j| (i, j)))
    }

    /// True iff the graph is a single connected component.
    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return false;
        }
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        reached == self.n
    }

    /// Relabels objects: object `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::param("relabeling permutation has wrong length"));
        }
        let edges: Vec<_> = self.edges().map(|(a, b)| (perm[a], perm[b])).collect();
        Self::from_edges(self.n, &edges)
    }

    /// Debug dump: one `i j` pair per line, 0-indexed.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::with_capacity(self.edge_count * 8);
        for (a, b) in self.edges() {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }
}

/// Samples G(n, p): every unordered pair is included independently with probability `p`.
pub fn generate_er_graph(n: usize, p: f64, seed: u64) -> Result<ComparisonGraph> {
    if n < 2 {
        return Err(Error::param(format!("need n >= 2 objects, got {n}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::param(format!("edge probability {p} outside [0, 1]")));
    }
    let mut adjacency = vec![Vec::new(); n];
    for a in 0..n {
        for b in (a + 1)..n {
            if stream::unit(seed, &[tag::GRAPH, a as u64, b as u64]) < p {
                adjacency[a].push(b);
                adjacency[b].push(a);
            }
        }
    }
    // pairs are visited in lexicographic order, so every list is already sorted
    Ok(ComparisonGraph::from_sorted_adjacency(adjacency))
}

/// `C · ln n / n`, clamped to 1.
pub fn er_probability(n: usize, coefficient: f64) -> f64 {
    (coefficient * (n as f64).ln() / n as f64).min(1.0)
}

/// Draws G(n, p) until connected. Returns the graph and the number of rejected draws.
pub fn generate_connected_er_graph(
    n: usize,
    p: f64,
    seed: u64,
    max_attempts: usize,
) -> Result<(ComparisonGraph, usize)> {
    for attempt in 0..max_attempts.max(1) {
        let s = if attempt == 0 { seed } else { stream::derive(seed, &[tag::RESAMPLE, attempt as u64]) };
        let g = generate_er_graph(n, p, s)?;
        if g.is_connected() {
            return Ok((g, attempt));
        }
    }
    Err(Error::Disconnected)
}
