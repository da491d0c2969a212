//! Acceptance suite. Runs every criterion in order, prints one line per
//! criterion and exits non-zero if any of them fails.

use std::time::Instant;

use byzrank::graph::generate_connected_er_graph;
use byzrank::harness::{
    build_instance, run_algorithm, run_failure_demo, run_indistinguishability_demo, run_ranking_dataset,
    run_scaling_sweep, run_synthetic_sweep, Algorithm, DatasetReference, ExperimentConfig, ResultTable,
};
use byzrank::metrics::kendall_tau;
use byzrank::spectral::stationary;
use byzrank::voting::dataset::bundled_corpus;
use byzrank::voting::{sample_uniform_weights, PairAggregates, Strategy, VoterPopulation};
use byzrank::{Result, Spectral, Transition};
use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome { pass, detail: detail.into() })
}

fn mean_of(table: &ResultTable, strategy: &str, algo: &str, bf: f64, n: Option<usize>) -> (f64, f64) {
    let c = table.cell(strategy, algo, bf, n).unwrap_or_else(|| panic!("missing cell {strategy}/{algo} bf={bf}"));
    (c.rel_l2_mean, c.tau_mean)
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn fixed_point() -> Result<Outcome> {
    let mut worst_residual = 0.0f64;
    let mut worst_gap = 0.0f64;
    for seed in 0..20 {
        let (g, _) = generate_connected_er_graph(50, 0.5, seed, 50)?;
        let w = sample_uniform_weights::<f64>(50, 1.0, 100.0, seed)?;
        let t = Transition::from_aggregates(&g, &PairAggregates::exact_btl(&g, &w))?;
        worst_residual = worst_residual.max(t.left_residual(w.as_slice()));
        let pi = stationary(&t, Spectral::default())?.pi;
        worst_gap = worst_gap.max(linf(&pi, w.as_slice()));
    }
    outcome(
        worst_residual <= 1e-12 && worst_gap <= 1e-8,
        format!("20 instances n=50 p=0.5: max residual {worst_residual:.2e} (<= 1e-12), max |pi - w| {worst_gap:.2e} (<= 1e-8)"),
    )
}

fn dense_left_eigenvector(t: &Transition) -> Vec<f64> {
    let n = t.n();
    let dense = t.to_dense();
    let mut m = DMatrix::from_fn(n, n, |r, c| dense[c][r] - if r == c { 1.0 } else { 0.0 });
    for c in 0..n {
        m[(n - 1, c)] = 1.0;
    }
    let mut rhs = DVector::zeros(n);
    rhs[n - 1] = 1.0;
    let x = m.lu().solve(&rhs).expect("irreducible chain has a unique stationary vector");
    x.iter().copied().collect()
}

fn eigen_oracle() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.random_range(2..=8);
        let p = rng.random_range(0.2..1.0);
        let (g, _) = generate_connected_er_graph(n, p, rng.random(), 1000)?;
        let a = PairAggregates::from_fn(&g, |_, _| rng.random_range(0.05..0.95));
        let t = Transition::from_aggregates(&g, &a)?;
        let opts = Spectral { tol: 1e-13, max_iters: Some(1_000_000) };
        let pi = stationary(&t, opts)?.pi;
        worst = worst.max(linf(&pi, &dense_left_eigenvector(&t)));
    }
    outcome(worst <= 1e-8, format!("100 chains n<=8: max L-inf gap to the LU solve {worst:.2e} (<= 1e-8)"))
}

fn synthetic_table() -> Result<ResultTable> {
    let cfg = ExperimentConfig { byzantine_fraction: vec![0.0, 0.3], strategy: vec!["ov".into()], ..ExperimentConfig::synthetic() };
    run_synthetic_sweep(&cfg)
}

fn clean_baseline(t: &ResultTable) -> Result<Outcome> {
    let (rc, _) = mean_of(t, "OV", "RC", 0.0, None);
    let (fb, _) = mean_of(t, "OV", "FBSR", 0.0, None);
    let ok = (0.01..=0.04).contains(&rc) && (0.01..=0.04).contains(&fb);
    outcome(ok, format!("BF=0 mean rel_l2: RC {rc:.4}, FBSR {fb:.4} (both in [0.01, 0.04])"))
}

fn rc_failure(t: &ResultTable) -> Result<Outcome> {
    let (rc, _) = mean_of(t, "OV", "RC", 0.3, None);
    outcome((0.40..=0.52).contains(&rc), format!("OV BF=0.3 RC mean rel_l2 {rc:.4} (in [0.40, 0.52])"))
}

fn fbsr_robust(t: &ResultTable) -> Result<Outcome> {
    let (fb, _) = mean_of(t, "OV", "FBSR", 0.3, None);
    outcome(fb <= 0.12, format!("OV BF=0.3 FBSR mean rel_l2 {fb:.4} (<= 0.12)"))
}

fn ranking_quality(t: &ResultTable) -> Result<Outcome> {
    let (_, rc) = mean_of(t, "OV", "RC", 0.3, None);
    let (_, fb) = mean_of(t, "OV", "FBSR", 0.3, None);
    outcome(rc <= 0.45 && fb >= 0.90, format!("OV BF=0.3 mean tau: RC {rc:.4} (<= 0.45), FBSR {fb:.4} (>= 0.90)"))
}

fn scaling_trend() -> Result<Outcome> {
    let cfg = ExperimentConfig { byzantine_fraction: vec![0.1], ..ExperimentConfig::scaling() };
    let t = run_scaling_sweep(&cfg)?;
    let mut ok = true;
    let mut parts = Vec::new();
    for &n in &cfg.n_grid {
        let (rc, _) = mean_of(&t, "FOV", "RC", 0.1, Some(n));
        let (fb, _) = mean_of(&t, "FOV", "FBSR", 0.1, Some(n));
        ok &= (0.11..=0.17).contains(&rc) && fb <= rc;
        parts.push(format!("n={n} RC {rc:.3} FBSR {fb:.3}"));
    }
    let first = mean_of(&t, "FOV", "FBSR", 0.1, Some(cfg.n_grid[0])).0;
    let last = mean_of(&t, "FOV", "FBSR", 0.1, Some(*cfg.n_grid.last().unwrap())).0;
    ok &= last <= first;
    outcome(ok, format!("FOV BF=0.1 k=n: {}", parts.join(", ")))
}

fn failure_demo() -> Result<Outcome> {
    let demo = run_failure_demo(&ExperimentConfig::failure_demo())?;
    let at = |bf: f64| demo.curve.iter().find(|p| p.0 == bf).map(|p| p.1).unwrap_or(f64::NAN);
    let (clean, worst) = (at(0.0), at(0.3));
    let r = demo.correlation.unwrap_or(f64::NAN);
    outcome(
        worst >= 0.2 && clean <= 0.03 && r >= 0.9,
        format!("skewed b=10 n=200: RC rel_l2 {clean:.4} at BF=0 (<= 0.03), {worst:.4} at BF=0.3 (>= 0.2), Pearson r {r:.4} (>= 0.9)"),
    )
}

fn retention() -> Result<Outcome> {
    let cfg = ExperimentConfig { algorithms: vec![Algorithm::Fbsr], ..ExperimentConfig::synthetic() };
    let (mut units, mut kept, mut worst) = (0usize, 0usize, 0usize);
    for trial in 0..cfg.trials {
        let inst = build_instance(&cfg, cfg.n, 0.0, trial)?;
        let pop = VoterPopulation::new(cfg.voters, 0, Strategy::Opposite, &inst.weights, inst.seed)?;
        let out = run_algorithm(&cfg, Algorithm::Fbsr, &inst.graph, &pop, cfg.k, inst.seed)?;
        for u in &out.report.expect("FBSR reports its filter").units {
            units += 1;
            kept += usize::from(6 * u.surviving() >= 5 * u.assigned);
            worst = worst.max(u.removed());
        }
    }
    let share = kept as f64 / units as f64;
    outcome(
        share >= 0.99,
        format!("F=0 FBSR: {kept}/{units} units ({:.2}%) keep >= 5/6 of k (>= 99%), most removed in one unit {worst}", 100.0 * share),
    )
}

fn indistinguishability() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = Vec::new();
    for seed in 0..20u64 {
        let n = 4 + seed as usize % 17;
        let b = rng.random_range(1.5..10.0);
        let voters = 2 * rng.random_range(2..=20);
        let k = rng.random_range(1..=voters);
        let r = run_indistinguishability_demo(n, b, voters, k, seed)?;
        if !r.identical {
            return outcome(false, format!("seed {seed} n={n}: ledgers differ"));
        }
        checked.push(n);
    }
    let (lo, hi) = (checked.iter().min().unwrap(), checked.iter().max().unwrap());
    outcome(true, format!("20 seeds, n in [{lo}, {hi}]: every ledger pair bit-identical"))
}

fn kendall_oracle() -> Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for case in 0..100 {
        let n = rng.random_range(2..=200);
        let mut a: Vec<usize> = (0..n).collect();
        let mut b = a.clone();
        a.shuffle(&mut rng);
        b.shuffle(&mut rng);
        let (mut pa, mut pb) = (vec![0; n], vec![0; n]);
        for r in 0..n {
            pa[a[r]] = r;
            pb[b[r]] = r;
        }
        let mut score = 0i64;
        for i in 0..n {
            for j in (i + 1)..n {
                score += if (pa[i] < pa[j]) == (pb[i] < pb[j]) { 1 } else { -1 };
            }
        }
        let expected = score as f64 / (n * (n - 1) / 2) as f64;
        let got = kendall_tau(&a, &b)?;
        if got != expected {
            return outcome(false, format!("case {case} n={n}: merge count {got} vs pair count {expected}"));
        }
    }
    outcome(true, "100 permutation pairs n<=200: merge-sort tau equals the pair-count oracle exactly")
}

fn dataset_ordering(reference: DatasetReference) -> Result<(usize, f64, f64)> {
    let cfg = ExperimentConfig {
        byzantine_fraction: vec![0.2],
        strategy: vec!["orf".into()],
        reference,
        ..ExperimentConfig::dataset()
    };
    let t = run_ranking_dataset(&bundled_corpus(), &cfg)?;
    let rc: Vec<f64> = t.rows.iter().filter(|r| r.algorithm == "RC").map(|r| r.rel_l2).collect();
    let bsr: Vec<f64> = t.rows.iter().filter(|r| r.algorithm == "BSR").map(|r| r.rel_l2).collect();
    let wins = rc.iter().zip(&bsr).filter(|(r, b)| b <= r).count();
    Ok((wins, mean_of(&t, "ORF", "RC", 0.2, None).0, mean_of(&t, "ORF", "BSR", 0.2, None).0))
}

fn dataset_check() -> Result<Outcome> {
    let (wins, rc, bsr) = dataset_ordering(DatasetReference::Own)?;
    outcome(
        wins >= 9,
        format!("bundled corpus ORF BF=0.2: BSR <= RC in {wins}/10 trials (>= 9), mean rel_l2 BSR {bsr:.3} vs RC {rc:.3}"),
    )
}

fn determinism() -> Result<Outcome> {
    let cfg = ExperimentConfig {
        n: 60,
        k: 40,
        byzantine_fraction: vec![0.0, 0.2],
        strategy: vec!["ov".into(), "rs".into(), "orf".into()],
        algorithms: vec![Algorithm::Rc, Algorithm::Fbsr],
        trials: 4,
        ..ExperimentConfig::synthetic()
    };
    let data_cfg = ExperimentConfig { byzantine_fraction: vec![0.1], trials: 3, ..ExperimentConfig::dataset() };
    let corpus = bundled_corpus();
    let run = |threads: usize| -> Result<(String, String)> {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().expect("thread pool");
        pool.install(|| Ok((run_synthetic_sweep(&cfg)?.to_csv_string()?, run_ranking_dataset(&corpus, &data_cfg)?.to_csv_string()?)))
    };
    let one = run(1)?;
    let again = run(1)?;
    let many = run(4)?;
    let ok = one == again && one == many;
    outcome(
        ok,
        format!("synthetic and dataset sweeps rerun on 1 and 4 threads: CSV byte-identical ({} + {} bytes)", one.0.len(), one.1.len()),
    )
}

fn main() {
    let started = Instant::now();
    let mut failures = 0;
    let mut report = |id: usize, name: &str, f: &dyn Fn() -> Result<Outcome>| {
        let t0 = Instant::now();
        let (pass, detail) = match f() {
            Ok(o) => (o.pass, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        failures += usize::from(!pass);
        println!(
            "criterion {id:>2}: {} {name}: {detail} [{:.1} s]",
            if pass { "PASS" } else { "FAIL" },
            t0.elapsed().as_secs_f64()
        );
    };

    report(1, "fixed point", &fixed_point);
    report(2, "eigen oracle", &eigen_oracle);
    let t0 = Instant::now();
    let synthetic = synthetic_table();
    println!("  (synthetic OV sweep for criteria 3-6: {:.1} s)", t0.elapsed().as_secs_f64());
    let with_table = |check: fn(&ResultTable) -> Result<Outcome>| {
        let synthetic = &synthetic;
        move || match synthetic {
            Ok(t) => check(t),
            Err(e) => outcome(false, format!("sweep failed: {e}")),
        }
    };
    report(3, "clean baseline", &with_table(clean_baseline));
    report(4, "RC failure", &with_table(rc_failure));
    report(5, "FBSR robustness", &with_table(fbsr_robust));
    report(6, "ranking quality", &with_table(ranking_quality));
    report(7, "scaling trend", &scaling_trend);
    report(8, "failure demo", &failure_demo);
    report(9, "good-voter retention", &retention);
    report(10, "indistinguishability", &indistinguishability);
    report(11, "Kendall tau oracle", &kendall_oracle);
    report(12, "dataset ordering", &dataset_check);
    match dataset_ordering(DatasetReference::Rc) {
        Ok((wins, rc, bsr)) => println!(
            "  info: same run scored against clean-data RC instead: BSR <= RC in {wins}/10, mean BSR {bsr:.3} vs RC {rc:.3}"
        ),
        Err(e) => println!("  info: RC-reference run failed: {e}"),
    }
    report(13, "determinism", &determinism);

    println!("acceptance: {} of 13 criteria passed in {:.1} s", 13 - failures, started.elapsed().as_secs_f64());
    if failures > 0 {
        std::process::exit(1);
    }
}
