//! Voter population, weight generators, voter assignment and vote recording.

pub mod assign;
pub mod dataset;
pub mod ledger;
pub mod population;
pub mod strategy;
pub mod weights;

pub use assign::{assign_voters, split_buckets, Assignment, AssignmentMode, QueryUnit};
pub use ledger::{collect_votes, PairAggregates, QueryBlock, VoteLedger};
pub use population::VoterPopulation;
pub use strategy::{byzantine_vote, good_vote, opposite_vote, Adversary, AdversaryContext, BtlMimic, Strategy};
pub use weights::{make_mirrored_skewed_weights, make_skewed_weights, sample_uniform_weights, WeightVector};
