use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::Result;

/// Score of one algorithm on one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialScore {
    pub strategy: String,
    pub algorithm: String,
    pub byzantine_fraction: f64,
    pub n: usize,
    pub k: usize,
    pub trial: usize,
    pub seed: u64,
    pub graph_resamples: usize,
    pub rel_l2: f64,
    pub kendall_tau: f64,
}

/// Mean and sample standard deviation over the trials of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub strategy: String,
    pub algorithm: String,
    pub byzantine_fraction: f64,
    pub n: usize,
    pub k: usize,
    pub trials: usize,
    pub rel_l2_mean: f64,
    pub rel_l2_std: f64,
    pub tau_mean: f64,
    pub tau_std: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ResultTable {
    pub rows: Vec<TrialScore>,
    /// Human-readable notices, e.g. units whose theoretical `max_out` was clamped to `k`.
    pub warnings: Vec<String>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    stat: &'a str,
    strategy: &'a str,
    algorithm: &'a str,
    byzantine_fraction: f64,
    n: usize,
    k: usize,
    trial: Option<usize>,
    seed: Option<u64>,
    graph_resamples: Option<usize>,
    rel_l2: f64,
    kendall_tau: f64,
}

/// Mean and sample standard deviation (zero for a single value).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

impl ResultTable {
    /// Cells in first-appearance order of the raw rows.
    pub fn summaries(&self) -> Vec<CellSummary> {
        let mut keys: Vec<(&str, &str, u64, usize, usize)> = Vec::new();
        for r in &self.rows {
            let key = (r.strategy.as_str(), r.algorithm.as_str(), r.byzantine_fraction.to_bits(), r.n, r.k);
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        keys.into_iter()
            .map(|(s, a, bf, n, k)| {
                let cell: Vec<&TrialScore> = self
                    .rows
                    .iter()
                    .filter(|r| r.strategy == s && r.algorithm == a && r.byzantine_fraction.to_bits() == bf && r.n == n && r.k == k)
                    .collect();
                let l2: Vec<f64> = cell.iter().map(|r| r.rel_l2).collect();
                let tau: Vec<f64> = cell.iter().map(|r| r.kendall_tau).collect();
                let (rel_l2_mean, rel_l2_std) = mean_std(&l2);
                let (tau_mean, tau_std) = mean_std(&tau);
                CellSummary {
                    strategy: s.to_string(),
                    algorithm: a.to_string(),
                    byzantine_fraction: f64::from_bits(bf),
                    n,
                    k,
                    trials: cell.len(),
                    rel_l2_mean,
                    rel_l2_std,
                    tau_mean,
                    tau_std,
                }
            })
            .collect()
    }

    /// Summary of the cell matching `(strategy, algorithm, bf)` and, when given, `n`.
    pub fn cell(&self, strategy: &str, algorithm: &str, bf: f64, n: Option<usize>) -> Option<CellSummary> {
        self.summaries().into_iter().find(|c| {
            c.strategy.eq_ignore_ascii_case(strategy)
                && c.algorithm.eq_ignore_ascii_case(algorithm)
                && (c.byzantine_fraction - bf).abs() < 1e-12
                && n.is_none_or(|n| c.n == n)
        })
    }

    /// CSV with a `stat` column: `raw` rows per trial, then `mean` and `std` rows per cell.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(CsvRow {
                stat: "raw",
                strategy: &r.strategy,
                algorithm: &r.algorithm,
                byzantine_fraction: r.byzantine_fraction,
                n: r.n,
                k: r.k,
                trial: Some(r.trial),
                seed: Some(r.seed),
                graph_resamples: Some(r.graph_resamples),
                rel_l2: r.rel_l2,
                kendall_tau: r.kendall_tau,
            })?;
        }
        for c in self.summaries() {
            for (stat, l2, tau) in [("mean", c.rel_l2_mean, c.tau_mean), ("std", c.rel_l2_std, c.tau_std)] {
                w.serialize(CsvRow {
                    stat,
                    strategy: &c.strategy,
                    algorithm: &c.algorithm,
                    byzantine_fraction: c.byzantine_fraction,
                    n: c.n,
                    k: c.k,
                    trial: None,
                    seed: None,
                    graph_resamples: None,
                    rel_l2: l2,
                    kendall_tau: tau,
                })?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(trial: usize, l2: f64) -> TrialScore {
        TrialScore {
            strategy: "OV".into(),
            algorithm: "RC".into(),
            byzantine_fraction: 0.1,
            n: 10,
            k: 5,
            trial,
            seed: 7,
            graph_resamples: 0,
            rel_l2: l2,
            kendall_tau: 0.5,
        }
    }

    #[test]
    fn aggregates_match_raw_rows() {
        let t = ResultTable { rows: vec![row(0, 0.1), row(1, 0.2), row(2, 0.3)], ..Default::default() };
        let c = t.cell("ov", "rc", 0.1, None).unwrap();
        assert!((c.rel_l2_mean - 0.2).abs() < 1e-12);
        assert!((c.rel_l2_std - 0.1).abs() < 1e-12);
        assert_eq!(c.tau_std, 0.0);
        assert_eq!(c.trials, 3);
    }

    #[test]
    fn csv_layout() {
        let t = ResultTable { rows: vec![row(0, 0.25)], ..Default::default() };
        let s = t.to_csv_string().unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "stat,strategy,algorithm,byzantine_fraction,n,k,trial,seed,graph_resamples,rel_l2,kendall_tau");
        assert_eq!(lines[1], "raw,OV,RC,0.1,10,5,0,7,0,0.25,0.5");
        assert_eq!(lines[2], "mean,OV,RC,0.1,10,5,,,,0.25,0.5");
        assert_eq!(lines[3], "std,OV,RC,0.1,10,5,,,,0.0,0.0");
    }
}
