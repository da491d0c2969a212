use std::path::{Path, PathBuf};
use std::process::ExitCode;

use byzrank::harness::plot::{write_figures, XAxis};
use byzrank::harness::{
    run_failure_demo, run_indistinguishability_demo, run_ranking_dataset, run_scaling_sweep, run_synthetic_sweep,
    Algorithm, ExperimentConfig, ResultTable,
};
use byzrank::voting::dataset::{bundled_corpus, load_rankings};
use byzrank::{Error, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "byzrank", version, about = "Byzantine-robust rank aggregation experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Byzantine-fraction sweep on Erdős–Rényi graphs.
    Synthetic(Common),
    /// Sweep over the object count with k = n.
    Scaling(Common),
    /// Complete-ranking data set (bundled Plackett–Luce corpus when no input is given).
    Dataset {
        #[command(flatten)]
        common: Common,
        /// Ranking file: one complete ranking per line, most preferred first.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Drop the two leading count tokens of every line (Sushi `.order` files).
        #[arg(long)]
        sushi_format: bool,
    },
    /// Rank-Centrality under the opposite strategy with half-low/half-high weights.
    FailureDemo {
        #[command(flatten)]
        common: Common,
        /// Weight ratio b between the high and low halves.
        #[arg(long)]
        b: Option<f64>,
    },
    /// Two instances with swapped good/Byzantine roles that yield identical votes.
    ImpossibilityDemo {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        b: Option<f64>,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// TOML file with ExperimentConfig keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    /// Population size K.
    #[arg(long)]
    voters: Option<usize>,
    /// Byzantine fractions, comma separated.
    #[arg(long, value_delimiter = ',')]
    bf: Option<Vec<f64>>,
    /// Strategies (fov, ov, ovp, rs, orf), comma separated.
    #[arg(long, value_delimiter = ',')]
    strategy: Option<Vec<String>>,
    /// Algorithms (rc, bsr, fbsr), comma separated.
    #[arg(long = "algo", value_delimiter = ',')]
    algo: Option<Vec<String>>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// CSV output path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write per-figure CSV and SVG files next to `--out`.
    #[arg(long)]
    figures: bool,
}

impl Common {
    fn resolve(&self, base: ExperimentConfig) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path, base)?,
            None => base,
        };
        if let Some(n) = self.n {
            cfg.n = n;
        }
        if let Some(k) = self.k {
            cfg.k = k;
        }
        if let Some(v) = self.voters {
            cfg.voters = v;
        }
        if let Some(bf) = &self.bf {
            cfg.byzantine_fraction = bf.clone();
        }
        if let Some(s) = &self.strategy {
            cfg.strategy = s.clone();
        }
        if let Some(a) = &self.algo {
            cfg.algorithms = a.iter().map(|s| Algorithm::parse(s)).collect::<Result<_>>()?;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(out) = &self.out {
            cfg.output = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn emit(table: &ResultTable, cfg: &ExperimentConfig, figures: bool, x: XAxis) -> Result<()> {
    for w in &table.warnings {
        eprintln!("warning: {w}");
    }
    match &cfg.output {
        Some(path) => {
            table.save(path)?;
            eprintln!("wrote {}", path.display());
            if figures {
                for f in write_figures(table, x, path)? {
                    eprintln!("wrote {}", f.display());
                }
            }
        }
        None => {
            if figures {
                return Err(Error::Config("--figures needs --out".into()));
            }
            table.write_csv(std::io::stdout().lock())?;
        }
    }
    Ok(())
}

fn print_summary(table: &ResultTable) {
    for c in table.summaries() {
        eprintln!(
            "{:>4} {:>5} n={:<4} bf={:<5} rel_l2 {:.4} ± {:.4}  tau {:.4} ± {:.4}",
            c.strategy, c.algorithm, c.n, c.byzantine_fraction, c.rel_l2_mean, c.rel_l2_std, c.tau_mean, c.tau_std
        );
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synthetic(common) => {
            let cfg = common.resolve(ExperimentConfig::synthetic())?;
            let table = run_synthetic_sweep(&cfg)?;
            print_summary(&table);
            emit(&table, &cfg, common.figures, XAxis::ByzantineFraction)
        }
        Command::Scaling(common) => {
            let cfg = common.resolve(ExperimentConfig::scaling())?;
            let table = run_scaling_sweep(&cfg)?;
            print_summary(&table);
            emit(&table, &cfg, common.figures, XAxis::ObjectCount)
        }
        Command::Dataset { common, input, sushi_format } => {
            let mut cfg = common.resolve(ExperimentConfig::dataset())?;
            if let Some(path) = input {
                cfg.dataset = Some(path);
            }
            if sushi_format {
                cfg.skip_tokens = 2;
            }
            let set = match &cfg.dataset {
                Some(path) => load_rankings(path, cfg.skip_tokens)?,
                None => {
                    eprintln!("no ranking file given, using the bundled Plackett-Luce corpus");
                    bundled_corpus()
                }
            };
            let table = run_ranking_dataset(&set, &cfg)?;
            print_summary(&table);
            emit(&table, &cfg, common.figures, XAxis::ByzantineFraction)
        }
        Command::FailureDemo { common, b } => {
            let mut cfg = common.resolve(ExperimentConfig::failure_demo())?;
            if let Some(b) = b {
                cfg.skew = b;
            }
            let demo = run_failure_demo(&cfg)?;
            for (bf, l2) in &demo.curve {
                eprintln!("bf={bf:<5} RC rel_l2 {l2:.4}");
            }
            match demo.correlation {
                Some(r) => eprintln!("Pearson correlation of rel_l2 with BF: {r:.4}"),
                None => eprintln!("Pearson correlation undefined (fewer than two nonzero BF values)"),
            }
            emit(&demo.table, &cfg, common.figures, XAxis::ByzantineFraction)
        }
        Command::ImpossibilityDemo { common, b } => {
            let base = ExperimentConfig { n: 4, k: 2, voters: 4, ..ExperimentConfig::synthetic() };
            let cfg = common.resolve(base)?;
            let b = b.unwrap_or(2.0);
            let report = run_indistinguishability_demo(cfg.n, b, cfg.voters, cfg.k, cfg.seed)?;
            println!("{report}");
            if let Some(path) = &cfg.output {
                write_report(path, &report)?;
            }
            Ok(())
        }
    }
}

fn write_report(path: &Path, r: &byzrank::harness::IndistinguishabilityReport) -> Result<()> {
    let text = format!(
        "n,b,voters,k,seed,identical,votes_compared,asymptotic_bound,finite_bound,separation\n{},{},{},{},{},{},{},{},{},{}\n",
        r.n, r.b, r.voters, r.k, r.seed, r.identical, r.votes_compared, r.asymptotic_bound, r.finite_bound, r.separation
    );
    std::fs::write(path, text)?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error [{}]: {e}", e.category());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
