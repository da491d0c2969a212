use std::sync::Arc;

use super::config::{Algorithm, ExperimentConfig, WeightGenerator};
use super::synthetic::run_synthetic_sweep;
use super::table::ResultTable;
use crate::error::{Error, Result};
use crate::graph::ComparisonGraph;
use crate::metrics::rel_l2;
use crate::voting::{
    assign_voters, collect_votes, make_mirrored_skewed_weights, make_skewed_weights, AssignmentMode, BtlMimic,
    Strategy, VoteLedger, VoterPopulation,
};

/// Pearson correlation coefficient; `None` when either series is constant.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some(sxy / (sxx * syy).sqrt())
}

#[derive(Debug, Clone)]
pub struct FailureDemo {
    pub table: ResultTable,
    /// `(bf, mean rel_l2)` for each grid point, in grid order.
    pub curve: Vec<(f64, f64)>,
    /// Correlation of mean RC error with BF over the nonzero grid points.
    pub correlation: Option<f64>,
}

/// Rank-Centrality under the opposite strategy with half-low/half-high weights.
/// Graph, `k`, grid, trials and seed come from `cfg`; weights, strategy and
/// algorithm are forced.
pub fn run_failure_demo(cfg: &ExperimentConfig) -> Result<FailureDemo> {
    if !(cfg.skew > 1.0) {
        return Err(Error::param(format!("skew b must exceed 1, got {}", cfg.skew)));
    }
    let cfg = ExperimentConfig {
        weights: WeightGenerator::Skewed,
        strategy: vec!["ov".into()],
        algorithms: vec![Algorithm::Rc],
        ..cfg.clone()
    };
    let table = run_synthetic_sweep(&cfg)?;
    let curve: Vec<(f64, f64)> = cfg
        .byzantine_fraction
        .iter()
        .filter_map(|&bf| table.cell("OV", "RC", bf, None).map(|c| (bf, c.rel_l2_mean)))
        .collect();
    let (xs, ys): (Vec<f64>, Vec<f64>) = curve.iter().filter(|(bf, _)| *bf > 0.0).copied().unzip();
    Ok(FailureDemo { correlation: pearson(&xs, &ys), table, curve })
}

/// Outcome of the two-instance construction.
#[derive(Debug, Clone, PartialEq)]
pub struct IndistinguishabilityReport {
    pub n: usize,
    pub b: f64,
    pub voters: usize,
    pub k: usize,
    pub seed: u64,
    /// Every vote of the two ledgers agrees.
    pub identical: bool,
    pub votes_compared: usize,
    /// `(b - 1) / 2b`, the large-n bound.
    pub asymptotic_bound: f64,
    /// `½ (b-1) sqrt(n-1) / sqrt(b² ceil(n/2) + floor(n/2))`.
    pub finite_bound: f64,
    /// `‖π̃ − π̃′‖ / (‖π̃‖ + ‖π̃′‖)`, the error that one output must incur on
    /// at least one of the two instances.
    pub separation: f64,
}

impl std::fmt::Display for IndistinguishabilityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "n = {}, b = {}, K = {}, k = {}, seed = {}", self.n, self.b, self.voters, self.k, self.seed)?;
        writeln!(f, "ledgers identical: {} ({} votes compared)", self.identical, self.votes_compared)?;
        writeln!(f, "lower bound (b-1)/2b: {:.6}", self.asymptotic_bound)?;
        writeln!(f, "finite-n bound: {:.6}", self.finite_bound)?;
        write!(f, "separation of the two instances: {:.6}", self.separation)
    }
}

pub fn asymptotic_bound(b: f64) -> f64 {
    (b - 1.0) / (2.0 * b)
}

pub fn finite_bound(n: usize, b: f64) -> f64 {
    let hi = n.div_ceil(2) as f64;
    let lo = (n / 2) as f64;
    0.5 * (b - 1.0) * ((n - 1) as f64).sqrt() / (b * b * hi + lo).sqrt()
}

/// The two instance ledgers: good voters `0..K/2` follow π̃ and the rest
/// mimic π̃′ in the first; the roles and weights swap in the second.
pub fn indistinguishable_ledgers(n: usize, b: f64, voters: usize, k: usize, seed: u64) -> Result<(VoteLedger, VoteLedger)> {
    if voters == 0 || !voters.is_multiple_of(2) {
        return Err(Error::param(format!("K must be even and positive, got {voters}")));
    }
    let w = make_skewed_weights(n, b)?;
    let w_mirror = make_mirrored_skewed_weights(n, b)?;
    let graph = ComparisonGraph::complete(n);
    let first_half: Vec<usize> = (0..voters / 2).collect();
    let second_half: Vec<usize> = (voters / 2..voters).collect();

    let mimic = |target: &crate::voting::WeightVector<f64>| {
        Strategy::Custom(Arc::new(BtlMimic { weights: target.as_slice().to_vec() }))
    };
    let one = VoterPopulation::with_byzantine_ids(voters, second_half, mimic(&w_mirror), &w, seed)?;
    let two = VoterPopulation::with_byzantine_ids(voters, first_half, mimic(&w), &w_mirror, seed)?;

    let assignment = assign_voters(&graph, voters, k, AssignmentMode::PerObject, seed)?;
    Ok((collect_votes(&graph, &one, &assignment), collect_votes(&graph, &two, &assignment)))
}

pub fn run_indistinguishability_demo(n: usize, b: f64, voters: usize, k: usize, seed: u64) -> Result<IndistinguishabilityReport> {
    let (one, two) = indistinguishable_ledgers(n, b, voters, k, seed)?;
    if one != two {
        let block = one.blocks.iter().zip(&two.blocks).position(|(x, y)| x != y).unwrap_or(0);
        return Err(Error::Invariant(format!("instance ledgers differ in query block {block}")));
    }
    let w = make_skewed_weights(n, b)?;
    let w_mirror = make_mirrored_skewed_weights(n, b)?;
    let diff: f64 = w.as_slice().iter().zip(w_mirror.as_slice()).map(|(a, c)| (a - c) * (a - c)).sum::<f64>().sqrt();
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let separation = diff / (norm(w.as_slice()) + norm(w_mirror.as_slice()));
    debug_assert!((rel_l2(w_mirror.as_slice(), w.as_slice())? - diff / norm(w.as_slice())).abs() < 1e-12);
    Ok(IndistinguishabilityReport {
        n,
        b,
        voters,
        k,
        seed,
        identical: true,
        votes_compared: one.total_votes(),
        asymptotic_bound: asymptotic_bound(b),
        finite_bound: finite_bound(n, b),
        separation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn small_instance_matches_and_reports_quarter() {
        let r = run_indistinguishability_demo(4, 2.0, 4, 2, 9).unwrap();
        assert!(r.identical);
        assert_eq!(r.votes_compared, 4 * 2 * 3);
        assert_relative_eq!(r.asymptotic_bound, 0.25);
        assert_relative_eq!(r.separation, 1.0 / 10f64.sqrt(), epsilon = 1e-12);
        assert!(r.separation >= r.asymptotic_bound);
    }

    #[test]
    fn bound_vanishes_as_b_approaches_one() {
        assert!(asymptotic_bound(1.0 + 1e-9) < 1e-8);
        assert!(finite_bound(10, 1.0 + 1e-9) < 1e-8);
    }

    #[test]
    fn odd_population_is_rejected() {
        assert!(run_indistinguishability_demo(4, 2.0, 5, 2, 0).is_err());
    }

    #[test]
    fn pearson_basic() {
        assert_relative_eq!(pearson(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]).unwrap(), 1.0);
        assert_relative_eq!(pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap(), -1.0);
        assert!(pearson(&[1.0, 1.0], &[1.0, 2.0]).is_none());
    }
}
