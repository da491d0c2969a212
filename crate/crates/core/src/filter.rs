//! Voter filtering ahead of Rank-Centrality.
//!
//! For one focal object and a set of `d` neighbors, every assigned voter
//! contributes a 0/1 row `T_v`. For each sign vector `ξ ∈ {±1}^d` the signed
//! sums `U = Tξ` are compared against their median; voters far from the median
//! are flagged, and if one `ξ` flags at least `max_out` voters all of them are
//! removed. Good voters concentrate around the median for every `ξ`, so a
//! coordinated Byzantine deviation shows up as a large flagged group.
//!
//! BSR runs this on each object's full neighbor set. FBSR splits the neighbors
//! into buckets of at most `max_size` (default `ceil(log2 n)`), each with its own
//! voter sample, which keeps the `2^d` enumeration small.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::ComparisonGraph;
use crate::scalar::Scalar;
use crate::spectral::{rank_centrality, SpectralOptions, StationaryDistribution};
use crate::voting::{assign_voters, collect_votes, AssignmentMode, QueryBlock, VoteLedger, VoterPopulation};

/// Largest neighbor set the exact enumeration accepts by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterMode {
    /// `5δ` with `δ = sqrt(Q/2 · d · ln k)` and `max_out = 8k^(1-Q) + 8k^(1-α)`.
    Theoretical,
    /// Deviation radius `1 + sqrt(d)`; `max_out = k/20` unless disabled.
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterParams {
    pub q: f64,
    pub mode: FilterMode,
    /// Empirical mode only: use `max_out = k/20` instead of the theoretical formula.
    pub empirical_max_out: bool,
    pub enumeration_cap: usize,
}

/// Thresholds resolved for one `(d, k, α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    pub alpha: f64,
    pub delta: f64,
    /// Flagging radius: `5δ`, or `1 + sqrt(d)` in empirical mode.
    pub deviation: f64,
    pub max_out: f64,
    /// The formula gave `max_out > k` and it was clamped to `k`.
    pub clamped: bool,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self::empirical()
    }
}

impl FilterParams {
    pub fn theoretical(q: f64) -> Self {
        Self { q, mode: FilterMode::Theoretical, empirical_max_out: false, enumeration_cap: DEFAULT_ENUMERATION_CAP }
    }

    /// Both practical modifications: radius `1 + sqrt(d)` and `max_out = k/20`.
    pub fn empirical() -> Self {
        Self { q: 1.0, mode: FilterMode::Empirical, empirical_max_out: true, enumeration_cap: DEFAULT_ENUMERATION_CAP }
    }

    /// Radius `1 + sqrt(d)` with the theoretical `max_out` (large voter pools).
    pub fn empirical_radius_only() -> Self {
        Self { empirical_max_out: false, ..Self::empirical() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.q >= 1.0) {
            return Err(Error::param(format!("Q must be >= 1, got {}", self.q)));
        }
        if self.enumeration_cap == 0 || self.enumeration_cap > 62 {
            return Err(Error::param("enumeration cap must be in 1..=62"));
        }
        Ok(())
    }

    /// `δ = sqrt(Q/2 · d · ln k)`.
    pub fn delta(&self, d: usize, k: usize) -> f64 {
        (self.q / 2.0 * d as f64 * (k as f64).ln()).sqrt()
    }

    /// `8 k^(1-Q) + 8 k^(1-α)`.
    pub fn theoretical_max_out(&self, k: usize, alpha: f64) -> f64 {
        let k = k as f64;
        8.0 * k.powf(1.0 - self.q) + 8.0 * k.powf(1.0 - alpha)
    }

    pub fn thresholds(&self, d: usize, k: usize, alpha: f64) -> Thresholds {
        let delta = self.delta(d, k);
        let deviation = match self.mode {
            FilterMode::Theoretical => 5.0 * delta,
            FilterMode::Empirical => 1.0 + (d as f64).sqrt(),
        };
        let raw = if self.mode == FilterMode::Empirical && self.empirical_max_out {
            k as f64 / 20.0
        } else {
            self.theoretical_max_out(k, alpha)
        };
        let clamped = raw > k as f64;
        Thresholds { alpha, delta, deviation, max_out: raw.min(k as f64), clamped }
    }
}

/// BSR: `α = 1 − ln(d_max) / ln(k)`.
pub fn bsr_alpha(d_max: usize, k: usize) -> f64 {
    1.0 - (d_max as f64).ln() / (k as f64).ln()
}

/// FBSR: `α = 1 − ln((2 + C/8) · ln n) / ln(k)`.
pub fn fbsr_alpha(c: f64, n: usize, k: usize) -> f64 {
    1.0 - ((2.0 + c / 8.0) * (n as f64).ln()).ln() / (k as f64).ln()
}

/// Default FBSR bucket size `ceil(log2 n)`.
pub fn default_bucket_size(n: usize) -> usize {
    ((n as f64).log2().ceil() as usize).max(1)
}

/// Signed vote sums `U_v = Σ_j ξ_j T_vj` by direct evaluation.
pub fn ksi_scan(votes: &[u8], d: usize, xi: &[i8]) -> Vec<i32> {
    assert_eq!(xi.len(), d, "sign vector length must match the vote width");
    votes
        .chunks_exact(d)
        .map(|row| row.iter().zip(xi).map(|(&t, &s)| i32::from(t) * i32::from(s)).sum())
        .collect()
}

/// Walks all `2^d` sign vectors in Gray-code order, keeping `U = Tξ` current
/// with one O(k) update per step.
pub struct GrayScan<'a> {
    votes: &'a [u8],
    d: usize,
    xi: Vec<i8>,
    u: Vec<i32>,
    step: u64,
}

impl<'a> GrayScan<'a> {
    /// Starts at `ξ = (1, …, 1)`, where `U` is the row sum.
    pub fn new(votes: &'a [u8], d: usize) -> Self {
        let u = votes.chunks_exact(d).map(|row| row.iter().map(|&t| i32::from(t)).sum()).collect();
        Self { votes, d, xi: vec![1; d], u, step: 0 }
    }

    pub fn xi(&self) -> &[i8] {
        &self.xi
    }

    pub fn u(&self) -> &[i32] {
        &self.u
    }

    /// Moves to the next sign vector; false once all `2^d` have been visited.
    pub fn advance(&mut self) -> bool {
        self.step += 1;
        if self.step >= 1u64 << self.d {
            return false;
        }
        let bit = self.step.trailing_zeros() as usize;
        let delta = -2 * i32::from(self.xi[bit]);
        self.xi[bit] = -self.xi[bit];
        for (u, row) in self.u.iter_mut().zip(self.votes.chunks_exact(self.d)) {
            *u += delta * i32::from(row[bit]);
        }
        true
    }
}

/// Lower median of small integers in `[-d, d]` via a histogram.
fn lower_median(u: &[i32], d: usize, hist: &mut [u32]) -> i32 {
    hist.iter_mut().for_each(|h| *h = 0);
    for &x in u {
        hist[(x + d as i32) as usize] += 1;
    }
    let rank = (u.len() as u32 - 1) / 2;
    let mut seen = 0;
    for (idx, &h) in hist.iter().enumerate() {
        seen += h;
        if seen > rank {
            return idx as i32 - d as i32;
        }
    }
    unreachable!("histogram covers all values")
}

/// Outcome of one filtering call.
#[derive(Debug, Clone, PartialEq)]
pub struct Survivors {
    /// `keep[v]` for the v-th assigned voter.
    pub keep: Vec<bool>,
    pub thresholds: Thresholds,
    /// Sign vectors whose flag count reached `max_out`.
    pub triggering_xi: usize,
    /// Largest flag count over all sign vectors.
    pub max_flagged: usize,
}

impl Survivors {
    pub fn removed(&self) -> usize {
        self.keep.iter().filter(|&&k| !k).count()
    }
}

/// Filters the `k × d` vote matrix of one query unit (`votes` row-major, 0/1).
pub fn bound_sum_deviations(
    object: usize,
    neighbors: &[usize],
    votes: &[u8],
    params: &FilterParams,
    alpha: f64,
) -> Result<Survivors> {
    let d = neighbors.len();
    if d == 0 {
        return Err(Error::param(format!("object {object}: empty neighbor set")));
    }
    if d > params.enumeration_cap {
        return Err(Error::Feasibility { object, size: d, cap: params.enumeration_cap });
    }
    if votes.is_empty() || !votes.len().is_multiple_of(d) {
        return Err(Error::param(format!("object {object}: vote matrix is not k × {d} with k >= 1")));
    }
    let k = votes.len() / d;
    let th = params.thresholds(d, k, alpha);

    let mut removed = vec![false; k];
    let mut hist = vec![0u32; 2 * d + 1];
    let mut triggering_xi = 0;
    let mut max_flagged = 0;
    let mut scan = GrayScan::new(votes, d);
    loop {
        let u = scan.u();
        let m = lower_median(u, d, &mut hist);
        let flagged_count: u32 = hist
            .iter()
            .enumerate()
            .filter(|(idx, _)| f64::from((*idx as i32 - d as i32 - m).abs()) >= th.deviation)
            .map(|(_, &h)| h)
            .sum();
        let flagged_count = flagged_count as usize;
        max_flagged = max_flagged.max(flagged_count);
        if flagged_count > 0 && flagged_count as f64 >= th.max_out {
            triggering_xi += 1;
            for (r, &x) in removed.iter_mut().zip(u) {
                if f64::from((x - m).abs()) >= th.deviation {
                    *r = true;
                }
            }
        }
        if !scan.advance() {
            break;
        }
    }
    if removed.iter().all(|&r| r) {
        return Err(Error::DegenerateFilter(format!("object {object}: every assigned voter was removed")));
    }
    Ok(Survivors { keep: removed.into_iter().map(|r| !r).collect(), thresholds: th, triggering_xi, max_flagged })
}

/// Per-unit filtering diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitReport {
    pub object: usize,
    pub bucket: usize,
    pub assigned: usize,
    pub removed_ids: Vec<usize>,
    /// Ground truth, available when the population is known.
    pub removed_good: Option<usize>,
    pub removed_byz: Option<usize>,
    pub surviving_good: Option<usize>,
    pub surviving_byz: Option<usize>,
    pub triggering_xi: usize,
    pub max_flagged: usize,
}

impl UnitReport {
    pub fn removed(&self) -> usize {
        self.removed_ids.len()
    }

    pub fn surviving(&self) -> usize {
        self.assigned - self.removed()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FilterReport {
    pub units: Vec<UnitReport>,
    /// Units where the theoretical `max_out` exceeded `k` and was clamped.
    pub clamped_units: usize,
}

impl FilterReport {
    pub fn total_removed(&self) -> usize {
        self.units.iter().map(UnitReport::removed).sum()
    }

    /// CSV: `object,bucket,assigned,removed,removed_good,removed_byz`; the last
    /// two are empty without ground truth.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["object", "bucket", "assigned", "removed", "removed_good", "removed_byz"])?;
        let opt = |x: Option<usize>| x.map(|v| v.to_string()).unwrap_or_default();
        for u in &self.units {
            w.write_record([
                u.object.to_string(),
                u.bucket.to_string(),
                u.assigned.to_string(),
                u.removed().to_string(),
                opt(u.removed_good),
                opt(u.removed_byz),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Runs [`bound_sum_deviations`] on every block and returns the surviving votes.
pub fn filter_ledger(
    ledger: &VoteLedger,
    params: &FilterParams,
    alpha: f64,
    population: Option<&VoterPopulation>,
) -> Result<(VoteLedger, FilterReport)> {
    params.validate()?;
    let results: Vec<Result<(QueryBlock, UnitReport, bool)>> = ledger
        .blocks
        .par_iter()
        .map(|block| {
            let s = bound_sum_deviations(block.focal, &block.neighbors, &block.votes, params, alpha)?;
            let removed_ids: Vec<usize> =
                block.voters.iter().zip(&s.keep).filter(|(_, &k)| !k).map(|(&v, _)| v).collect();
            let truth = population.map(|pop| {
                let byz_removed = removed_ids.iter().filter(|&&v| pop.is_byzantine(v)).count();
                let byz_total = block.voters.iter().filter(|&&v| pop.is_byzantine(v)).count();
                let removed = removed_ids.len();
                (removed - byz_removed, byz_removed, block.k() - byz_total - (removed - byz_removed), byz_total - byz_removed)
            });
            let report = UnitReport {
                object: block.focal,
                bucket: block.bucket,
                assigned: block.k(),
                removed_ids,
                removed_good: truth.map(|t| t.0),
                removed_byz: truth.map(|t| t.1),
                surviving_good: truth.map(|t| t.2),
                surviving_byz: truth.map(|t| t.3),
                triggering_xi: s.triggering_xi,
                max_flagged: s.max_flagged,
            };
            Ok((block.retain(&s.keep), report, s.thresholds.clamped))
        })
        .collect();
    let mut blocks = Vec::with_capacity(results.len());
    let mut report = FilterReport::default();
    for r in results {
        let (block, unit, clamped) = r?;
        blocks.push(block);
        report.units.push(unit);
        report.clamped_units += usize::from(clamped);
    }
    Ok((VoteLedger { n: ledger.n, blocks }, report))
}

/// Result of a filtered ranking run.
#[derive(Debug, Clone)]
pub struct FilteredRanking<S> {
    pub distribution: StationaryDistribution<S>,
    pub report: FilterReport,
    /// All collected votes, before filtering.
    pub votes: VoteLedger,
    /// Votes that survived filtering.
    pub surviving: VoteLedger,
    pub alpha: f64,
}

#[allow(clippy::too_many_arguments)]
fn filtered_rank<S: Scalar>(
    graph: &ComparisonGraph,
    population: &VoterPopulation,
    k: usize,
    mode: AssignmentMode,
    alpha: f64,
    params: &FilterParams,
    opts: SpectralOptions<S>,
    seed: u64,
) -> Result<FilteredRanking<S>> {
    if k < 2 {
        return Err(Error::param("filtering needs k >= 2 voters per unit"));
    }
    let assignment = assign_voters(graph, population.voters(), k, mode, seed)?;
    let votes = collect_votes(graph, population, &assignment);
    let (surviving, report) = filter_ledger(&votes, params, alpha, Some(population))?;
    let distribution = rank_centrality(&surviving, graph, opts)?;
    Ok(FilteredRanking { distribution, report, votes, surviving, alpha })
}

/// BSR: per-object voter sets, filtering over each object's full neighbor set.
pub fn bsr_rank<S: Scalar>(
    graph: &ComparisonGraph,
    population: &VoterPopulation,
    k: usize,
    params: &FilterParams,
    opts: SpectralOptions<S>,
    seed: u64,
) -> Result<FilteredRanking<S>> {
    params.validate()?;
    if let Some(i) = (0..graph.n()).find(|&i| graph.degree(i) > params.enumeration_cap) {
        return Err(Error::Feasibility { object: i, size: graph.degree(i), cap: params.enumeration_cap });
    }
    let alpha = bsr_alpha(graph.d_max(), k);
    filtered_rank(graph, population, k, AssignmentMode::PerObject, alpha, params, opts, seed)
}

/// FBSR: neighbors split into buckets of at most `max_size` (default
/// `ceil(log2 n)`), a fresh k-voter sample and filter per bucket.
#[allow(clippy::too_many_arguments)]
pub fn fbsr_rank<S: Scalar>(
    graph: &ComparisonGraph,
    population: &VoterPopulation,
    k: usize,
    c: f64,
    max_size: Option<usize>,
    params: &FilterParams,
    opts: SpectralOptions<S>,
    seed: u64,
) -> Result<FilteredRanking<S>> {
    params.validate()?;
    let max_size = max_size.unwrap_or_else(|| default_bucket_size(graph.n()));
    if max_size > params.enumeration_cap {
        return Err(Error::Feasibility { object: 0, size: max_size, cap: params.enumeration_cap });
    }
    let alpha = fbsr_alpha(c, graph.n(), k);
    filtered_rank(graph, population, k, AssignmentMode::PerBucket { max_size }, alpha, params, opts, seed)
}
