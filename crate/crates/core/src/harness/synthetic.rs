use rayon::prelude::*;

use super::config::{Algorithm, ExperimentConfig, WeightGenerator};
use super::table::{ResultTable, TrialScore};
use crate::error::Result;
use crate::filter::{bsr_rank, fbsr_rank, FilterReport};
use crate::graph::{generate_connected_er_graph, ComparisonGraph};
use crate::metrics::{kendall_tau_weights, rel_l2_weights};
use crate::spectral::{rank_centrality, SpectralOptions};
use crate::stream::{self, tag};
use crate::voting::{
    assign_voters, collect_votes, make_skewed_weights, sample_uniform_weights, AssignmentMode, Strategy,
    VoterPopulation, WeightVector,
};

/// Graph and weights shared by every algorithm and strategy of one trial.
#[derive(Debug, Clone)]
pub struct TrialInstance {
    pub seed: u64,
    pub graph: ComparisonGraph,
    pub weights: WeightVector<f64>,
    pub graph_resamples: usize,
}

/// Output of one algorithm on one population.
#[derive(Debug, Clone)]
pub struct AlgorithmOutput {
    pub estimate: WeightVector<f64>,
    pub report: Option<FilterReport>,
}

/// Trial seed. Depends on `(n, bf, trial)` only, so every algorithm and
/// strategy in a cell sees the same graph, weights and Byzantine ids.
pub fn trial_seed(root: u64, n: usize, bf: f64, trial: usize) -> u64 {
    stream::derive(root, &[tag::TRIAL, n as u64, bf.to_bits(), trial as u64])
}

pub fn build_instance(cfg: &ExperimentConfig, n: usize, bf: f64, trial: usize) -> Result<TrialInstance> {
    let seed = trial_seed(cfg.seed, n, bf, trial);
    let p = cfg.edge_probability(n);
    let (graph, graph_resamples) =
        generate_connected_er_graph(n, p, stream::derive(seed, &[tag::GRAPH]), cfg.max_graph_attempts)?;
    let weights = match cfg.weights {
        WeightGenerator::Uniform => {
            sample_uniform_weights(n, cfg.weight_lo, cfg.weight_hi, stream::derive(seed, &[tag::WEIGHTS]))?
        }
        WeightGenerator::Skewed => make_skewed_weights(n, cfg.skew)?,
    };
    Ok(TrialInstance { seed, graph, weights, graph_resamples })
}

pub fn spectral_options(cfg: &ExperimentConfig) -> SpectralOptions<f64> {
    SpectralOptions { tol: cfg.tol, max_iters: cfg.max_iters }
}

/// Runs one algorithm. RC gets one k-voter sample per edge.
pub fn run_algorithm(
    cfg: &ExperimentConfig,
    algorithm: Algorithm,
    graph: &ComparisonGraph,
    population: &VoterPopulation,
    k: usize,
    seed: u64,
) -> Result<AlgorithmOutput> {
    let opts = spectral_options(cfg);
    let params = cfg.filter_params();
    let (pi, report) = match algorithm {
        Algorithm::Rc => {
            let assignment = assign_voters(graph, population.voters(), k, AssignmentMode::PerEdge, seed)?;
            let ledger = collect_votes(graph, population, &assignment);
            (rank_centrality(&ledger, graph, opts)?.pi, None)
        }
        Algorithm::Bsr => {
            let r = bsr_rank(graph, population, k, &params, opts, seed)?;
            (r.distribution.pi, Some(r.report))
        }
        Algorithm::Fbsr => {
            let r = fbsr_rank(graph, population, k, cfg.fbsr_c(), cfg.max_size, &params, opts, seed)?;
            (r.distribution.pi, Some(r.report))
        }
    };
    Ok(AlgorithmOutput { estimate: WeightVector::from_distribution(pi)?, report })
}

/// Result of one `(n, k, bf, trial)` job across strategies and algorithms.
struct JobOutput {
    rows: Vec<TrialScore>,
    clamped_units: usize,
}

fn run_job(cfg: &ExperimentConfig, strategies: &[Strategy], n: usize, k: usize, bf: f64, trial: usize) -> Result<JobOutput> {
    let inst = build_instance(cfg, n, bf, trial)?;
    let f = cfg.byzantine_count(bf, cfg.voters);
    let mut rows = Vec::new();
    let mut clamped_units = 0;
    for strategy in strategies {
        let pop = VoterPopulation::new(cfg.voters, f, strategy.clone(), &inst.weights, inst.seed)?;
        for &algo in &cfg.algorithms {
            let out = run_algorithm(cfg, algo, &inst.graph, &pop, k, inst.seed)?;
            clamped_units += out.report.as_ref().map_or(0, |r| r.clamped_units);
            rows.push(TrialScore {
                strategy: strategy.label().to_string(),
                algorithm: algo.label().to_string(),
                byzantine_fraction: bf,
                n,
                k,
                trial,
                seed: inst.seed,
                graph_resamples: inst.graph_resamples,
                rel_l2: rel_l2_weights(&out.estimate, &inst.weights)?,
                kendall_tau: kendall_tau_weights(&out.estimate, &inst.weights)?,
            });
        }
    }
    Ok(JobOutput { rows, clamped_units })
}

/// Runs every `(n, k)` pair against the strategy, algorithm and BF grids.
/// Jobs run in parallel; rows are ordered by (strategy, algorithm, n, bf, trial).
pub fn run_grid(cfg: &ExperimentConfig, sizes: &[(usize, usize)]) -> Result<ResultTable> {
    cfg.validate()?;
    let strategies = cfg.strategies()?;
    let jobs: Vec<(usize, usize, f64, usize)> = sizes
        .iter()
        .flat_map(|&(n, k)| {
            cfg.byzantine_fraction
                .iter()
                .flat_map(move |&bf| (0..cfg.trials).map(move |t| (n, k, bf, t)))
        })
        .collect();
    let outputs: Vec<JobOutput> =
        jobs.par_iter().map(|&(n, k, bf, t)| run_job(cfg, &strategies, n, k, bf, t)).collect::<Result<_>>()?;

    let mut scored = Vec::new();
    let mut clamped = 0;
    for (job, out) in outputs.into_iter().enumerate() {
        clamped += out.clamped_units;
        for (slot, row) in out.rows.into_iter().enumerate() {
            scored.push((slot, job, row));
        }
    }
    // slot enumerates (strategy, algorithm) in config order, job enumerates (n, bf, trial)
    scored.sort_by_key(|&(slot, job, _)| (slot, job));

    let mut table = ResultTable { rows: scored.into_iter().map(|(_, _, r)| r).collect(), warnings: Vec::new() };
    if clamped > 0 {
        table.warnings.push(format!(
            "{clamped} filter units had max_out > k and were clamped: the theoretical regime k >= 18 d_max / eps^2 is not met, so no removal can trigger there"
        ));
    }
    Ok(table)
}

/// BF sweep at fixed `n` and `k`.
pub fn run_synthetic_sweep(cfg: &ExperimentConfig) -> Result<ResultTable> {
    run_grid(cfg, &[(cfg.n, cfg.k)])
}

/// Sweep over `n_grid` with `k = n`.
pub fn run_scaling_sweep(cfg: &ExperimentConfig) -> Result<ResultTable> {
    let sizes: Vec<(usize, usize)> = cfg.n_grid.iter().map(|&n| (n, n)).collect();
    run_grid(cfg, &sizes)
}
