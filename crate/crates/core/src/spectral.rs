//! Rank-Centrality: a random walk whose stationary distribution estimates the scores.
//!
//! For an edge `(i, j)` the walk moves from `i` to `j` with probability
//! `A_ij / d_max`, where `A_ij` is the fraction of votes in which `j` beat `i`.
//! The remaining mass stays on `i`. Under exact BTL fractions the true weights
//! satisfy detailed balance, `w_i P_ij = w_j P_ji`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::ComparisonGraph;
use crate::scalar::Scalar;
use crate::voting::{PairAggregates, VoteLedger};

/// Sparse row-stochastic matrix on the comparison graph.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix<S> {
    n: usize,
    d_max: usize,
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<S>,
    diag: Vec<S>,
}

impl<S: Scalar> TransitionMatrix<S> {
    /// `P_ij = A_ij / d_max` off the diagonal, `P_ii = 1 - sum_j P_ij`.
    pub fn from_aggregates(graph: &ComparisonGraph, a: &PairAggregates<S>) -> Result<Self> {
        let n = graph.n();
        let d_max = graph.d_max();
        if d_max == 0 {
            return Err(Error::param("comparison graph has no edges"));
        }
        if a.rows.len() != n {
            return Err(Error::param("aggregates do not match the graph"));
        }
        let scale = S::of_usize(d_max);
        let mut row_ptr = Vec::with_capacity(n + 1);
        let mut cols = Vec::with_capacity(2 * graph.edge_count());
        let mut vals = Vec::with_capacity(2 * graph.edge_count());
        let mut diag = Vec::with_capacity(n);
        row_ptr.push(0);
        for i in 0..n {
            let nbrs = graph.neighbors(i);
            if a.rows[i].len() != nbrs.len() {
                return Err(Error::param(format!("aggregate row {i} does not match degree {}", nbrs.len())));
            }
            let mut off = S::zero();
            for (&j, &aij) in nbrs.iter().zip(&a.rows[i]) {
                if !(aij >= S::zero() && aij <= S::one()) {
                    return Err(Error::param(format!("A[{i}][{j}] = {aij} outside [0, 1]")));
                }
                let p = aij / scale;
                cols.push(j);
                vals.push(p);
                off = off + p;
            }
            diag.push(S::one() - off);
            row_ptr.push(cols.len());
        }
        Ok(Self { n, d_max, row_ptr, cols, vals, diag })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_max(&self) -> usize {
        self.d_max
    }

    pub fn diagonal(&self, i: usize) -> S {
        self.diag[i]
    }

    /// Off-diagonal entries of row `i` as `(column, value)`.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, S)> + '_ {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        self.cols[r.clone()].iter().copied().zip(self.vals[r].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        if i == j {
            return self.diag[i];
        }
        self.row(i).find(|&(c, _)| c == j).map_or(S::zero(), |(_, v)| v)
    }

    pub fn row_sum(&self, i: usize) -> S {
        self.row(i).fold(self.diag[i], |acc, (_, v)| acc + v)
    }

    /// Row vector times matrix: `out = pᵀ P`.
    pub fn left_multiply(&self, p: &[S], out: &mut [S]) {
        for (o, (&pi, &d)) in out.iter_mut().zip(p.iter().zip(&self.diag)) {
            *o = pi * d;
        }
        for (i, &pi) in p.iter().enumerate().take(self.n) {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                out[self.cols[k]] = out[self.cols[k]] + pi * self.vals[k];
            }
        }
    }

    /// `‖pᵀP − pᵀ‖∞`.
    pub fn left_residual(&self, p: &[S]) -> S {
        let mut out = vec![S::zero(); self.n];
        self.left_multiply(p, &mut out);
        out.iter().zip(p).fold(S::zero(), |m, (&a, &b)| m.max((a - b).abs()))
    }

    /// Dense copy, row-major.
    pub fn to_dense(&self) -> Vec<Vec<S>> {
        let mut m = vec![vec![S::zero(); self.n]; self.n];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = self.diag[i];
            for (j, v) in self.row(i) {
                row[j] = v;
            }
        }
        m
    }

    /// Debug dump: `i j P_ij` triplets including the diagonal.
    pub fn to_triplets(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n {
            let mut entries: Vec<(usize, S)> = self.row(i).collect();
            entries.push((i, self.diag[i]));
            entries.sort_by_key(|e| e.0);
            for (j, v) in entries {
                let _ = writeln!(out, "{i} {j} {v}");
            }
        }
        out
    }
}

/// Transition matrix from the surviving votes of a ledger.
pub fn build_transition<S: Scalar>(ledger: &VoteLedger, graph: &ComparisonGraph) -> Result<TransitionMatrix<S>> {
    TransitionMatrix::from_aggregates(graph, &ledger.aggregates(graph)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions<S> {
    /// Stop once the L1 change between iterates is at most this.
    pub tol: S,
    /// Iteration cap; `None` means `100 · n`.
    pub max_iters: Option<usize>,
}

impl<S: Scalar> Default for SpectralOptions<S> {
    fn default() -> Self {
        Self { tol: S::of(1e-10), max_iters: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationaryDistribution<S> {
    pub pi: Vec<S>,
    pub iterations: usize,
    /// L1 change of the last iteration.
    pub residual: S,
}

/// Power iteration `p_{t+1}ᵀ = p_tᵀ P` from the uniform vector, renormalizing each step.
pub fn stationary<S: Scalar>(p: &TransitionMatrix<S>, opts: SpectralOptions<S>) -> Result<StationaryDistribution<S>> {
    let n = p.n();
    let max_iters = opts.max_iters.unwrap_or(100 * n);
    let mut cur = vec![S::one() / S::of_usize(n); n];
    let mut next = vec![S::zero(); n];
    let mut change = S::infinity();
    for iter in 1..=max_iters {
        p.left_multiply(&cur, &mut next);
        let total: S = next.iter().copied().sum();
        for x in next.iter_mut() {
            *x = *x / total;
        }
        change = cur.iter().zip(&next).map(|(&a, &b)| (a - b).abs()).sum();
        std::mem::swap(&mut cur, &mut next);
        if change <= opts.tol {
            return Ok(StationaryDistribution { pi: cur, iterations: iter, residual: change });
        }
    }
    Err(Error::Convergence { iterations: max_iters, residual: change.as_f64() })
}

/// Builds the transition matrix from the ledger and returns its stationary distribution.
pub fn rank_centrality<S: Scalar>(
    ledger: &VoteLedger,
    graph: &ComparisonGraph,
    opts: SpectralOptions<S>,
) -> Result<StationaryDistribution<S>> {
    stationary(&build_transition(ledger, graph)?, opts)
}
