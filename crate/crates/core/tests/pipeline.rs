use std::path::Path;

use byzrank::filter::{bsr_rank, fbsr_rank};
use byzrank::graph::{er_probability, generate_er_graph};
use byzrank::harness::{build_instance, run_synthetic_sweep, Algorithm, ExperimentConfig};
use byzrank::voting::dataset::parse_rankings;
use byzrank::voting::{assign_voters, AssignmentMode, Strategy, VoterPopulation};
use byzrank::{ComparisonGraph, Error, FilterParams, Spectral};

fn small_cfg() -> ExperimentConfig {
    ExperimentConfig {
        n: 30,
        p: Some(0.17),
        byzantine_fraction: vec![0.3],
        strategy: vec!["ov".into()],
        algorithms: vec![Algorithm::Rc, Algorithm::Bsr],
        ..ExperimentConfig::synthetic()
    }
}

#[test]
fn er_edge_count_matches_binomial_mean() {
    let n = 200;
    let p = er_probability(n, 20.0);
    let pairs = (n * (n - 1) / 2) as f64;
    let mean = pairs * p;
    assert!((mean - 10543.0).abs() < 1.0, "expected mean {mean}");
    let sigma = (pairs * p * (1.0 - p)).sqrt();
    let seeds = 20;
    let total: usize = (0..seeds).map(|s| generate_er_graph(n, p, 1000 + s).unwrap().edge_count()).sum();
    let avg = total as f64 / seeds as f64;
    assert!((avg - mean).abs() <= 3.0 * sigma / (seeds as f64).sqrt(), "average edge count {avg}");
}

#[test]
fn per_edge_byzantine_share_is_hypergeometric() {
    let g = generate_er_graph(200, er_probability(200, 20.0), 5).unwrap();
    let w = byzrank::voting::sample_uniform_weights::<f64>(200, 1.0, 100.0, 5).unwrap();
    let pop = VoterPopulation::new(1000, 300, Strategy::Opposite, &w, 5).unwrap();
    assert_eq!(pop.byzantine_count(), 300);
    let a = assign_voters(&g, 1000, 100, AssignmentMode::PerEdge, 5).unwrap();
    let shares: Vec<f64> = a
        .units
        .iter()
        .map(|u| u.voters.iter().filter(|&&v| pop.is_byzantine(v)).count() as f64 / 100.0)
        .collect();
    let mean = shares.iter().sum::<f64>() / shares.len() as f64;
    assert!((mean - 0.3).abs() <= 0.02, "mean share {mean}");
    // hypergeometric variance of the share: p(1-p)/k · (K-k)/(K-1)
    let var = shares.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (shares.len() - 1) as f64;
    let expected = 0.3 * 0.7 / 100.0 * 900.0 / 999.0;
    assert!((var / expected - 1.0).abs() < 0.1, "variance {var} vs {expected}");
}

#[test]
fn bsr_beats_rank_centrality_trial_by_trial() {
    let cfg = small_cfg();
    for t in 0..cfg.trials {
        let inst = build_instance(&cfg, cfg.n, 0.3, t).unwrap();
        assert!(inst.graph.d_max() <= 12, "trial {t}: d_max {}", inst.graph.d_max());
    }
    let table = run_synthetic_sweep(&cfg).unwrap();
    let rc: Vec<_> = table.rows.iter().filter(|r| r.algorithm == "RC").collect();
    let bsr: Vec<_> = table.rows.iter().filter(|r| r.algorithm == "BSR").collect();
    assert_eq!(rc.len(), cfg.trials);
    assert!(rc.iter().zip(&bsr).all(|(a, b)| a.seed == b.seed && a.trial == b.trial));
    let rc_mean = table.cell("OV", "RC", 0.3, None).unwrap().rel_l2_mean;
    let bsr_mean = table.cell("OV", "BSR", 0.3, None).unwrap().rel_l2_mean;
    assert!(bsr_mean < rc_mean, "BSR {bsr_mean} vs RC {rc_mean}");
}

#[test]
fn one_bucket_fbsr_is_bsr() {
    let cfg = small_cfg();
    let params = FilterParams::empirical();
    for t in 0..3 {
        let inst = build_instance(&cfg, cfg.n, 0.3, t).unwrap();
        let pop = VoterPopulation::new(cfg.voters, 300, Strategy::Opposite, &inst.weights, inst.seed).unwrap();
        let d = inst.graph.d_max();
        let bsr = bsr_rank(&inst.graph, &pop, 100, &params, Spectral::default(), inst.seed).unwrap();
        let fbsr = fbsr_rank(&inst.graph, &pop, 100, 20.0, Some(d), &params, Spectral::default(), inst.seed).unwrap();
        assert_eq!(bsr.distribution.pi, fbsr.distribution.pi);
        assert_eq!(bsr.report.units, fbsr.report.units);
        assert!(bsr.report.total_removed() > 0);
    }
}

#[test]
fn enumeration_cap_is_a_feasibility_error() {
    let g = ComparisonGraph::complete(30);
    let w = byzrank::voting::sample_uniform_weights::<f64>(30, 1.0, 2.0, 1).unwrap();
    let pop = VoterPopulation::new(200, 0, Strategy::Opposite, &w, 1).unwrap();
    let err = bsr_rank(&g, &pop, 50, &FilterParams::empirical(), Spectral::default(), 1).unwrap_err();
    assert!(matches!(err, Error::Feasibility { size: 29, cap: 25, .. }));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn filter_removes_mostly_byzantine_voters() {
    let cfg = ExperimentConfig { n: 60, k: 60, ..small_cfg() };
    let inst = build_instance(&cfg, 60, 0.3, 0).unwrap();
    let pop = VoterPopulation::new(cfg.voters, 300, Strategy::Opposite, &inst.weights, inst.seed).unwrap();
    let r = fbsr_rank(&inst.graph, &pop, 60, 20.0, None, &FilterParams::empirical(), Spectral::default(), inst.seed)
        .unwrap();
    let byz: usize = r.report.units.iter().map(|u| u.removed_byz.unwrap()).sum();
    let good: usize = r.report.units.iter().map(|u| u.removed_good.unwrap()).sum();
    assert!(byz > 3 * good, "removed {byz} Byzantine vs {good} good");
}

#[test]
fn config_round_trips_through_toml() {
    let cfg = ExperimentConfig { n: 77, byzantine_fraction: vec![0.0, 0.25], c: Some(4.0), ..ExperimentConfig::synthetic() };
    let text = cfg.to_toml_string().unwrap();
    let back = ExperimentConfig::from_toml_str(&text, ExperimentConfig::dataset()).unwrap();
    assert_eq!(back, cfg);

    let partial = ExperimentConfig::from_toml_str("n = 40\nk = 20\ntrials = 3\n", ExperimentConfig::synthetic()).unwrap();
    assert_eq!((partial.n, partial.k, partial.trials, partial.voters), (40, 20, 3, 1000));

    let unknown = ExperimentConfig::from_toml_str("bogus_key = 1\n", ExperimentConfig::synthetic()).unwrap_err();
    assert_eq!(unknown.exit_code(), 2);
    let invalid = ExperimentConfig::from_toml_str("trials = 0\n", ExperimentConfig::synthetic()).unwrap_err();
    assert_eq!(invalid.exit_code(), 2);
}

#[test]
fn ranking_parse_errors_carry_line_numbers() {
    let path = Path::new("votes.txt");
    let ok = parse_rankings("# header\n2 0 1\n\n1 0 2\n", 0, path).unwrap();
    assert_eq!(ok.len(), 2);
    assert_eq!(ok.objects(), 3);

    match parse_rankings("0 1 2\n0 1\n", 0, path).unwrap_err() {
        Error::Parse { line, .. } => assert_eq!(line, 2),
        e => panic!("unexpected error {e}"),
    }
    match parse_rankings("0 1 2\n0 0 2\n", 0, path).unwrap_err() {
        Error::Parse { line, .. } => assert_eq!(line, 2),
        e => panic!("unexpected error {e}"),
    }
    let sushi = parse_rankings("0 3 2 0 1\n0 3 0 1 2\n", 2, path).unwrap();
    assert_eq!(sushi.rankings[0], vec![2, 0, 1]);
}
