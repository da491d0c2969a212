use rand::seq::index;
use rayon::prelude::*;

use super::config::{Algorithm, DatasetReference, ExperimentConfig};
use super::synthetic::{run_algorithm, spectral_options};
use super::table::{ResultTable, TrialScore};
use crate::error::{Error, Result};
use crate::graph::ComparisonGraph;
use crate::metrics::{kendall_tau_weights, rel_l2_weights};
use crate::spectral::rank_centrality;
use crate::stream::{self, tag};
use crate::voting::dataset::RankingSet;
use crate::voting::{assign_voters, collect_votes, AssignmentMode, VoterPopulation, WeightVector};

/// Voters per query unit for a dataset run: `cfg.k`, where 0 means every voter.
pub fn dataset_k(cfg: &ExperimentConfig, voters: usize) -> usize {
    if cfg.k == 0 {
        voters
    } else {
        cfg.k.min(voters)
    }
}

/// Reference scores: Rank-Centrality on the uncorrupted rankings, every voter on every pair.
pub fn dataset_truth(set: &RankingSet, cfg: &ExperimentConfig) -> Result<WeightVector<f64>> {
    let m = set.objects();
    let graph = ComparisonGraph::complete(m);
    let flat = WeightVector::new(vec![1.0; m])?.normalized();
    let pop = VoterPopulation::from_rankings(&set.rankings, Vec::new(), crate::voting::Strategy::Opposite, &flat, cfg.seed)?;
    let assignment = assign_voters(&graph, set.len(), set.len(), AssignmentMode::PerEdge, cfg.seed)?;
    let ledger = collect_votes(&graph, &pop, &assignment);
    WeightVector::from_distribution(rank_centrality(&ledger, &graph, spectral_options(cfg))?.pi)
}

/// Complete-ranking experiment on a complete graph: a BF fraction of the
/// voters is replaced by Byzantine voters. Adversaries see [`dataset_truth`];
/// estimates are scored against the reference chosen by `cfg.reference`.
pub fn run_ranking_dataset(set: &RankingSet, cfg: &ExperimentConfig) -> Result<ResultTable> {
    cfg.validate()?;
    if set.is_empty() {
        return Err(Error::param("ranking dataset is empty"));
    }
    let strategies = cfg.strategies()?;
    let m = set.objects();
    let voters = set.len();
    let k = dataset_k(cfg, voters);
    let graph = ComparisonGraph::complete(m);
    let truth = dataset_truth(set, cfg)?;
    let clean = VoterPopulation::from_rankings(&set.rankings, Vec::new(), strategies[0].clone(), &truth, cfg.seed)?;
    let references: Vec<WeightVector<f64>> = cfg
        .algorithms
        .iter()
        .map(|&algo| match cfg.reference {
            DatasetReference::Rc => Ok(truth.clone()),
            DatasetReference::Own => Ok(run_algorithm(cfg, algo, &graph, &clean, k, cfg.seed)?.estimate),
        })
        .collect::<Result<_>>()?;

    let jobs: Vec<(f64, usize)> = cfg
        .byzantine_fraction
        .iter()
        .flat_map(|&bf| (0..cfg.trials).map(move |t| (bf, t)))
        .collect();
    let per_job: Vec<(Vec<TrialScore>, usize)> = jobs
        .par_iter()
        .map(|&(bf, trial)| {
            let seed = stream::derive(cfg.seed, &[tag::TRIAL, m as u64, bf.to_bits(), trial as u64]);
            let f = cfg.byzantine_count(bf, voters);
            let mut rng = stream::rng(seed, &[tag::BYZANTINE_IDS]);
            let byz = index::sample(&mut rng, voters, f).into_vec();
            let mut rows = Vec::new();
            let mut clamped = 0;
            for strategy in &strategies {
                let pop = VoterPopulation::from_rankings(&set.rankings, byz.clone(), strategy.clone(), &truth, seed)?;
                for (&algo, reference) in cfg.algorithms.iter().zip(&references) {
                    let out = run_algorithm(cfg, algo, &graph, &pop, k, seed)?;
                    clamped += out.report.as_ref().map_or(0, |r| r.clamped_units);
                    rows.push(TrialScore {
                        strategy: strategy.label().to_string(),
                        algorithm: algo.label().to_string(),
                        byzantine_fraction: bf,
                        n: m,
                        k,
                        trial,
                        seed,
                        graph_resamples: 0,
                        rel_l2: rel_l2_weights(&out.estimate, reference)?,
                        kendall_tau: kendall_tau_weights(&out.estimate, reference)?,
                    });
                }
            }
            Ok((rows, clamped))
        })
        .collect::<Result<_>>()?;

    let mut scored = Vec::new();
    let mut clamped = 0;
    for (job, (rows, c)) in per_job.into_iter().enumerate() {
        clamped += c;
        scored.extend(rows.into_iter().enumerate().map(|(slot, r)| (slot, job, r)));
    }
    scored.sort_by_key(|&(slot, job, _)| (slot, job));
    let mut table = ResultTable { rows: scored.into_iter().map(|(_, _, r)| r).collect(), warnings: Vec::new() };
    if clamped > 0 {
        table.warnings.push(format!("{clamped} filter units had max_out clamped to k"));
    }
    if cfg.algorithms.contains(&Algorithm::Fbsr) {
        table.warnings.push("FBSR on a complete graph of ranking data buckets the neighbors; BSR is the usual choice here".into());
    }
    Ok(table)
}
