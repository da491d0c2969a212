use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::ComparisonGraph;
use crate::stream::{self, tag};

use super::population::VoterPopulation;

/// Everything a Byzantine adversary is allowed to know when answering a query:
/// the true weights, the comparison graph and every good voter's answers.
pub struct AdversaryContext<'a> {
    pub weights: &'a [f64],
    pub graph: Option<&'a ComparisonGraph>,
    pub population: &'a VoterPopulation,
}

impl AdversaryContext<'_> {
    /// The answer good voter behavior would give for `voter` on `(i, j)`.
    /// Any good voter's recorded vote can be read through this.
    pub fn good_vote(&self, voter: usize, i: usize, j: usize) -> usize {
        self.population.good_response(voter, i, j)
    }
}

/// A user-defined Byzantine strategy. Implementations must be deterministic in
/// `(voter, {i, j})` so that repeated queries get identical answers.
pub trait Adversary: Send + Sync + fmt::Debug {
    /// Returns the winning object, `i` or `j`.
    fn winner(&self, ctx: &AdversaryContext<'_>, voter: usize, i: usize, j: usize) -> usize;
}

/// Byzantine voting strategies.
#[derive(Clone)]
pub enum Strategy {
    /// Vote by a predetermined order shared by all Byzantine voters; `None`
    /// draws a uniformly random order from the population seed.
    FixedOrder(Option<Vec<usize>>),
    /// Vote for the lower-weight object.
    Opposite,
    /// A good voter with the answer flipped: `i` wins with probability `w_j / (w_i + w_j)`.
    OppositeProbabilistic,
    /// Per (voter, pair) a fair coin picks good behavior or [`Strategy::Opposite`].
    RandomSubset,
    /// Each voter starts from the reversed true order and applies `num_swaps`
    /// random transpositions.
    OppositeRandomFlips { num_swaps: usize },
    Custom(Arc<dyn Adversary>),
}

impl fmt::Debug for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::FixedOrder(p) => f.debug_tuple("FixedOrder").field(p).finish(),
            Strategy::Opposite => f.write_str("Opposite"),
            Strategy::OppositeProbabilistic => f.write_str("OppositeProbabilistic"),
            Strategy::RandomSubset => f.write_str("RandomSubset"),
            Strategy::OppositeRandomFlips { num_swaps } => {
                f.debug_struct("OppositeRandomFlips").field("num_swaps", num_swaps).finish()
            }
            Strategy::Custom(a) => f.debug_tuple("Custom").field(a).finish(),
        }
    }
}

impl Strategy {
    /// Parses a strategy id. Accepts the long snake-case names and the short
    /// table labels (`fov`, `ov`, `ovp`, `rs`, `orf`), case-insensitively.
    pub fn parse(id: &str, num_swaps: usize) -> Result<Self> {
        match id.to_ascii_lowercase().replace('-', "_").as_str() {
            "fixed_order" | "fov" => Ok(Strategy::FixedOrder(None)),
            "opposite" | "ov" => Ok(Strategy::Opposite),
            "opposite_probabilistic" | "ovp" => Ok(Strategy::OppositeProbabilistic),
            "random_subset" | "rs" => Ok(Strategy::RandomSubset),
            "opposite_random_flips" | "orf" => Ok(Strategy::OppositeRandomFlips { num_swaps }),
            other => Err(Error::param(format!("unknown strategy '{other}'"))),
        }
    }

    /// Short label used in result tables.
    pub fn label(&self) -> &'static str {
        match self {
            Strategy::FixedOrder(_) => "FOV",
            Strategy::Opposite => "OV",
            Strategy::OppositeProbabilistic => "OVP",
            Strategy::RandomSubset => "RS",
            Strategy::OppositeRandomFlips { .. } => "ORF",
            Strategy::Custom(_) => "CUSTOM",
        }
    }
}

#[inline]
fn canonical(i: usize, j: usize) -> (usize, usize) {
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

/// BTL vote: `i` wins with probability `w_i / (w_i + w_j)`.
///
/// The uniform draw is keyed by `(seed, voter, min(i,j), max(i,j))`, so a
/// voter asked the same unordered pair twice gives the same answer.
pub fn good_vote(weights: &[f64], seed: u64, voter: usize, i: usize, j: usize) -> usize {
    let (a, b) = canonical(i, j);
    let u = stream::unit(seed, &[tag::GOOD_VOTE, voter as u64, a as u64, b as u64]);
    if u < weights[a] / (weights[a] + weights[b]) {
        a
    } else {
        b
    }
}

/// Opposite-weight vote: the lower-weight object wins (the smaller index on ties).
pub fn opposite_vote(weights: &[f64], i: usize, j: usize) -> usize {
    let (a, b) = canonical(i, j);
    if weights[a] <= weights[b] {
        a
    } else {
        b
    }
}

/// Answer of a Byzantine voter under `strategy`.
pub fn byzantine_vote(strategy: &Strategy, ctx: &AdversaryContext<'_>, voter: usize, i: usize, j: usize) -> usize {
    let pop = ctx.population;
    let w = ctx.weights;
    let (a, b) = canonical(i, j);
    match strategy {
        Strategy::FixedOrder(_) => pop.fixed_order_winner(a, b),
        Strategy::Opposite => opposite_vote(w, a, b),
        Strategy::OppositeProbabilistic => {
            let u = stream::unit(pop.seed(), &[tag::FLIPPED_VOTE, voter as u64, a as u64, b as u64]);
            if u < w[b] / (w[a] + w[b]) {
                a
            } else {
                b
            }
        }
        Strategy::RandomSubset => {
            let coin = stream::unit(pop.seed(), &[tag::SUBSET_COIN, voter as u64, a as u64, b as u64]);
            if coin < 0.5 {
                good_vote(w, pop.seed(), voter, a, b)
            } else {
                opposite_vote(w, a, b)
            }
        }
        Strategy::OppositeRandomFlips { .. } => pop.flip_order_winner(voter, a, b),
        Strategy::Custom(adv) => adv.winner(ctx, voter, a, b),
    }
}

/// A Byzantine voter that answers like a BTL voter under alternative weights,
/// sharing the good voters' per-(voter, pair) randomness.
#[derive(Debug, Clone)]
pub struct BtlMimic {
    pub weights: Vec<f64>,
}

impl Adversary for BtlMimic {
    fn winner(&self, ctx: &AdversaryContext<'_>, voter: usize, i: usize, j: usize) -> usize {
        good_vote(&self.weights, ctx.population.seed(), voter, i, j)
    }
}
