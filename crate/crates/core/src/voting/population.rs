use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::ComparisonGraph;
use crate::scalar::Scalar;
use crate::stream::{self, tag};

use super::strategy::{byzantine_vote, good_vote, AdversaryContext, Strategy};
use super::weights::WeightVector;

/// How good voters answer.
#[derive(Debug, Clone)]
enum GoodModel {
    /// Stochastic BTL votes under the true weights.
    Btl,
    /// Each voter holds a complete ranking; `positions[v][x]` is the rank of object x.
    Rankings(Vec<Vec<u32>>),
}

/// `K` voters of which `F` are Byzantine, bound to one strategy.
///
/// Every answer is a pure function of `(seed, voter, unordered pair)`, so the
/// response cache is implicit: asking again reproduces the recorded vote.
#[derive(Debug, Clone)]
pub struct VoterPopulation {
    seed: u64,
    weights: Vec<f64>,
    byzantine: Vec<bool>,
    byzantine_ids: Vec<usize>,
    strategy: Strategy,
    good: GoodModel,
    fixed_positions: Vec<u32>,
    flip_positions: Vec<Option<Vec<u32>>>,
}

fn positions_of(order: &[usize]) -> Vec<u32> {
    let mut pos = vec![0u32; order.len()];
    for (rank, &obj) in order.iter().enumerate() {
        pos[obj] = rank as u32;
    }
    pos
}

fn is_permutation(order: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    order.len() == n && order.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

impl VoterPopulation {
    /// BTL population with `byzantine_count` Byzantine voters drawn uniformly from `[K]`.
    pub fn new<S: Scalar>(
        voters: usize,
        byzantine_count: usize,
        strategy: Strategy,
        weights: &WeightVector<S>,
        seed: u64,
    ) -> Result<Self> {
        if byzantine_count > voters {
            return Err(Error::param(format!("F = {byzantine_count} exceeds K = {voters}")));
        }
        let mut rng = stream::rng(seed, &[tag::BYZANTINE_IDS]);
        let mut ids = index::sample(&mut rng, voters, byzantine_count).into_vec();
        ids.sort_unstable();
        Self::with_byzantine_ids(voters, ids, strategy, weights, seed)
    }

    /// BTL population with an explicit Byzantine set.
    pub fn with_byzantine_ids<S: Scalar>(
        voters: usize,
        byzantine_ids: Vec<usize>,
        strategy: Strategy,
        weights: &WeightVector<S>,
        seed: u64,
    ) -> Result<Self> {
        Self::build(voters, byzantine_ids, strategy, weights.to_f64(), GoodModel::Btl, seed)
    }

    /// Population whose good voters answer from fixed complete rankings
    /// (`rankings[v]` lists objects most-preferred first). `weights` are the
    /// reference scores the adversary sees.
    pub fn from_rankings<S: Scalar>(
        rankings: &[Vec<usize>],
        byzantine_ids: Vec<usize>,
        strategy: Strategy,
        weights: &WeightVector<S>,
        seed: u64,
    ) -> Result<Self> {
        let n = weights.len();
        if let Some(v) = rankings.iter().position(|r| !is_permutation(r, n)) {
            return Err(Error::param(format!("ranking of voter {v} is not a permutation of {n} objects")));
        }
        let positions = rankings.iter().map(|r| positions_of(r)).collect();
        Self::build(rankings.len(), byzantine_ids, strategy, weights.to_f64(), GoodModel::Rankings(positions), seed)
    }

    fn build(
        voters: usize,
        mut byzantine_ids: Vec<usize>,
        strategy: Strategy,
        weights: Vec<f64>,
        good: GoodModel,
        seed: u64,
    ) -> Result<Self> {
        let n = weights.len();
        byzantine_ids.sort_unstable();
        byzantine_ids.dedup();
        if byzantine_ids.iter().any(|&v| v >= voters) {
            return Err(Error::param("Byzantine voter id out of range"));
        }
        let mut byzantine = vec![false; voters];
        for &v in &byzantine_ids {
            byzantine[v] = true;
        }

        let fixed_positions = match &strategy {
            Strategy::FixedOrder(Some(order)) => {
                if !is_permutation(order, n) {
                    return Err(Error::param("fixed order is not a permutation of the objects"));
                }
                positions_of(order)
            }
            Strategy::FixedOrder(None) => {
                let mut order: Vec<usize> = (0..n).collect();
                order.shuffle(&mut stream::rng(seed, &[tag::FIXED_ORDER]));
                positions_of(&order)
            }
            _ => Vec::new(),
        };

        let mut flip_positions = vec![None; voters];
        if let Strategy::OppositeRandomFlips { num_swaps } = strategy {
            // ascending true weight: the reverse of the true ranking
            let reversed: Vec<usize> = {
                let w = WeightVector::new(weights.clone())?;
                let mut r = w.ranking();
                r.reverse();
                r
            };
            for &v in &byzantine_ids {
                let mut order = reversed.clone();
                let mut rng = stream::rng(seed, &[tag::FLIP_PERM, v as u64]);
                for _ in 0..num_swaps {
                    let x = rng.random_range(0..n);
                    let y = rng.random_range(0..n);
                    order.swap(x, y);
                }
                flip_positions[v] = Some(positions_of(&order));
            }
        }

        Ok(Self { seed, weights, byzantine, byzantine_ids, strategy, good, fixed_positions, flip_positions })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn voters(&self) -> usize {
        self.byzantine.len()
    }

    pub fn byzantine_count(&self) -> usize {
        self.byzantine_ids.len()
    }

    pub fn byzantine_ids(&self) -> &[usize] {
        &self.byzantine_ids
    }

    pub fn is_byzantine(&self, voter: usize) -> bool {
        self.byzantine[voter]
    }

    pub fn strategy(&self) -> &Strategy {
        &self.strategy
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn objects(&self) -> usize {
        self.weights.len()
    }

    /// Answer good-voter behavior gives for `voter` on `(i, j)`.
    pub fn good_response(&self, voter: usize, i: usize, j: usize) -> usize {
        match &self.good {
            GoodModel::Btl => good_vote(&self.weights, self.seed, voter, i, j),
            GoodModel::Rankings(pos) => {
                if pos[voter][i] < pos[voter][j] {
                    i
                } else {
                    j
                }
            }
        }
    }

    /// Recorded answer of `voter` on `(i, j)`: the winning object.
    pub fn response(&self, graph: Option<&ComparisonGraph>, voter: usize, i: usize, j: usize) -> usize {
        if self.byzantine[voter] {
            let ctx = AdversaryContext { weights: &self.weights, graph, population: self };
            byzantine_vote(&self.strategy, &ctx, voter, i, j)
        } else {
            self.good_response(voter, i, j)
        }
    }

    pub(crate) fn fixed_order_winner(&self, a: usize, b: usize) -> usize {
        if self.fixed_positions[a] < self.fixed_positions[b] {
            a
        } else {
            b
        }
    }

    pub(crate) fn flip_order_winner(&self, voter: usize, a: usize, b: usize) -> usize {
        let pos = self.flip_positions[voter].as_ref().expect("flip order built for every Byzantine voter");
        if pos[a] < pos[b] {
            a
        } else {
            b
        }
    }
}
