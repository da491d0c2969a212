use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::ComparisonGraph;
use crate::scalar::Scalar;

use super::assign::Assignment;
use super::population::VoterPopulation;
use super::weights::WeightVector;

/// Votes of one query unit.
///
/// `votes` is a `voters.len() × neighbors.len()` row-major 0/1 matrix; entry
/// `(v, c)` is 1 when `neighbors[c]` beat `focal` in voter `v`'s answer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryBlock {
    pub focal: usize,
    pub bucket: usize,
    pub neighbors: Vec<usize>,
    pub voters: Vec<usize>,
    pub votes: Vec<u8>,
}

impl QueryBlock {
    pub fn k(&self) -> usize {
        self.voters.len()
    }

    pub fn d(&self) -> usize {
        self.neighbors.len()
    }

    pub fn row(&self, v: usize) -> &[u8] {
        let d = self.d();
        &self.votes[v * d..(v + 1) * d]
    }

    /// Copy keeping only the voters whose `keep` flag is set.
    pub fn retain(&self, keep: &[bool]) -> QueryBlock {
        let mut voters = Vec::with_capacity(self.k());
        let mut votes = Vec::with_capacity(self.votes.len());
        for (v, &voter) in self.voters.iter().enumerate() {
            if keep[v] {
                voters.push(voter);
                votes.extend_from_slice(self.row(v));
            }
        }
        QueryBlock { focal: self.focal, bucket: self.bucket, neighbors: self.neighbors.clone(), voters, votes }
    }
}

/// All recorded votes, one block per query unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteLedger {
    pub n: usize,
    pub blocks: Vec<QueryBlock>,
}

/// Per-pair win fractions `A_ij`, stored along each object's sorted neighbor list.
///
/// `rows[i][c]` is the fraction of votes from `i`'s query sets in which
/// `neighbors(i)[c]` beat `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct PairAggregates<S> {
    pub rows: Vec<Vec<S>>,
}

impl<S: Scalar> PairAggregates<S> {
    /// Fills `A_ij = f(i, j)` on every directed edge.
    pub fn from_fn(graph: &ComparisonGraph, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let rows = (0..graph.n()).map(|i| graph.neighbors(i).iter().map(|&j| f(i, j)).collect()).collect();
        Self { rows }
    }

    /// Noise-free BTL fractions `A_ij = w_j / (w_i + w_j)`.
    pub fn exact_btl(graph: &ComparisonGraph, weights: &WeightVector<S>) -> Self {
        let w = weights.as_slice();
        Self::from_fn(graph, |i, j| w[j] / (w[i] + w[j]))
    }

    pub fn get(&self, graph: &ComparisonGraph, i: usize, j: usize) -> Option<S> {
        graph.neighbor_index(i, j).map(|c| self.rows[i][c])
    }
}

impl VoteLedger {
    /// Win fractions from the recorded votes. Every directed edge must have at
    /// least one vote from its focal object's query sets.
    pub fn aggregates<S: Scalar>(&self, graph: &ComparisonGraph) -> Result<PairAggregates<S>> {
        if graph.n() != self.n {
            return Err(Error::param("ledger and graph disagree on the object count"));
        }
        let mut wins: Vec<Vec<u64>> = (0..self.n).map(|i| vec![0; graph.degree(i)]).collect();
        let mut totals = wins.clone();
        for block in &self.blocks {
            for (c, &j) in block.neighbors.iter().enumerate() {
                let slot = graph.neighbor_index(block.focal, j).ok_or_else(|| {
                    Error::param(format!("ledger pair ({}, {j}) is not a graph edge", block.focal))
                })?;
                let d = block.d();
                let jwins: u64 = (0..block.k()).map(|v| u64::from(block.votes[v * d + c])).sum();
                wins[block.focal][slot] += jwins;
                totals[block.focal][slot] += block.k() as u64;
            }
        }
        let mut rows = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let mut row = Vec::with_capacity(graph.degree(i));
            for (c, &j) in graph.neighbors(i).iter().enumerate() {
                if totals[i][c] == 0 {
                    return Err(Error::DegenerateFilter(format!(
                        "edge ({i}, {j}) has no surviving votes from object {i}'s query set"
                    )));
                }
                row.push(S::of(wins[i][c] as f64) / S::of(totals[i][c] as f64));
            }
            rows.push(row);
        }
        Ok(PairAggregates { rows })
    }

    /// Checks that every (voter, unordered pair) has a single recorded outcome.
    pub fn check_consistency(&self) -> Result<()> {
        let mut seen: HashMap<(usize, usize, usize), usize> = HashMap::new();
        for block in &self.blocks {
            for (v, &voter) in block.voters.iter().enumerate() {
                for (c, &j) in block.neighbors.iter().enumerate() {
                    let winner = if block.row(v)[c] == 1 { j } else { block.focal };
                    let key = (voter, block.focal.min(j), block.focal.max(j));
                    if let Some(prev) = seen.insert(key, winner) {
                        if prev != winner {
                            return Err(Error::Invariant(format!(
                                "voter {voter} answered pair ({}, {}) inconsistently",
                                key.1, key.2
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn total_votes(&self) -> usize {
        self.blocks.iter().map(|b| b.votes.len()).sum()
    }
}

/// Queries every assigned voter and records the answers.
pub fn collect_votes(graph: &ComparisonGraph, population: &VoterPopulation, assignment: &Assignment) -> VoteLedger {
    let blocks = assignment
        .units
        .par_iter()
        .map(|unit| {
            let mut votes = Vec::with_capacity(unit.voters.len() * unit.neighbors.len());
            for &voter in &unit.voters {
                for &j in &unit.neighbors {
                    let winner = population.response(Some(graph), voter, unit.focal, j);
                    votes.push(u8::from(winner == j));
                }
            }
            QueryBlock {
                focal: unit.focal,
                bucket: unit.bucket,
                neighbors: unit.neighbors.clone(),
                voters: unit.voters.clone(),
                votes,
            }
        })
        .collect();
    VoteLedger { n: graph.n(), blocks }
}
