use std::path::Path;
use std::process::{Command, Output};

fn byzrank(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_byzrank")).args(args).output().expect("binary runs")
}

fn small_synthetic(out: &Path) -> Output {
    byzrank(&[
        "synthetic", "--n", "30", "--k", "20", "--voters", "200", "--bf", "0,0.2", "--strategy", "ov",
        "--trials", "2", "--out", out.to_str().unwrap(),
    ])
}

#[test]
fn synthetic_writes_the_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("syn.csv");
    let run = small_synthetic(&out);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "stat,strategy,algorithm,byzantine_fraction,n,k,trial,seed,graph_resamples,rel_l2,kendall_tau"
    );
    // 2 algorithms x 2 fractions x 2 trials raw rows, then mean and std per cell
    assert_eq!(text.lines().filter(|l| l.starts_with("raw,")).count(), 8);
    assert_eq!(text.lines().filter(|l| l.starts_with("mean,")).count(), 4);
    assert_eq!(text.lines().filter(|l| l.starts_with("std,")).count(), 4);

    let again = dir.path().join("again.csv");
    assert!(small_synthetic(&again).status.success());
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&again).unwrap());
}

#[test]
fn figures_land_next_to_the_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("fig.csv");
    let run = byzrank(&[
        "failure-demo", "--n", "20", "--k", "10", "--voters", "100", "--bf", "0,0.3", "--trials", "1", "--figures",
        "--out", out.to_str().unwrap(),
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    for name in ["fig_rel_l2.csv", "fig_rel_l2.svg", "fig_kendall_tau.csv", "fig_kendall_tau.svg"] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
    assert!(String::from_utf8_lossy(&run.stderr).contains("Pearson"));
}

#[test]
fn impossibility_demo_reports_identical_ledgers() {
    let run = byzrank(&["impossibility-demo", "--seed", "3"]);
    assert!(run.status.success());
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.contains("ledgers identical: true"), "{stdout}");
    assert!(stdout.contains("lower bound (b-1)/2b: 0.250000"), "{stdout}");
}

#[test]
fn dataset_reads_a_ranking_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("r.order");
    let mut text = String::from("10 4\n");
    for v in 0..60 {
        text.push_str(if v % 3 == 0 { "0 4 3 1 0 2\n" } else { "0 4 3 0 1 2\n" });
    }
    std::fs::write(&input, text).unwrap();
    let run = byzrank(&[
        "dataset", "--input", input.to_str().unwrap(), "--sushi-format", "--bf", "0,0.1", "--strategy", "ov",
        "--trials", "2",
    ]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let stdout = String::from_utf8_lossy(&run.stdout);
    assert!(stdout.starts_with("stat,strategy,algorithm"));
    assert!(stdout.lines().any(|l| l.starts_with("mean,OV,BSR,0.0,4,")), "{stdout}");
}

#[test]
fn errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad_config = dir.path().join("bad.toml");
    std::fs::write(&bad_config, "unknown_key = 3\n").unwrap();
    let run = byzrank(&["synthetic", "--config", bad_config.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&run.stderr).contains("unknown_key"));

    let run = byzrank(&["synthetic", "--n", "30", "--bf", "1.5"]);
    assert_eq!(run.status.code(), Some(2));

    let bad_rankings = dir.path().join("bad.txt");
    std::fs::write(&bad_rankings, "0 1 2\n0 1\n").unwrap();
    let run = byzrank(&["dataset", "--input", bad_rankings.to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(7));
    assert!(String::from_utf8_lossy(&run.stderr).contains("bad.txt:2"));

    let run = byzrank(&["synthetic", "--n", "40", "--k", "20", "--voters", "100", "--trials", "1", "--bf", "0", "--algo", "bsr"]);
    assert_eq!(run.status.code(), Some(3), "{}", String::from_utf8_lossy(&run.stderr));

    let run = byzrank(&["dataset", "--input", dir.path().join("missing.txt").to_str().unwrap()]);
    assert_eq!(run.status.code(), Some(1));
}
