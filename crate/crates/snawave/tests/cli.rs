use std::path::Path;
use std::process::{Command, Output};

fn snawave(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_snawave"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("SNAWAVE_OUT")
        .output()
        .expect("binary runs")
}

fn read(path: impl AsRef<Path>) -> String {
    std::fs::read_to_string(path).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

#[test]
fn weierstrass_single_point_is_exact_in_theory_column() {
    let dir = tempfile::tempdir().unwrap();
    let out = snawave(&["weierstrass", "--grid", "0.5", "--J", "12"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = read(dir.path().join("weierstrass.csv"));
    assert!(table.starts_with("A,s_theoretical,s_estimated,abs_error,pearson,"));
    assert_eq!(column(&table, "s_theoretical"), vec!["1"]);
    assert!(dir.path().join("weierstrass_levels.csv").exists());
}

#[test]
fn weierstrass_rejects_an_invalid_grid() {
    let dir = tempfile::tempdir().unwrap();
    let out = snawave(&["weierstrass", "--grid", "0.3,0.7", "--J", "10"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = snawave(&["weierstrass", "--grid", "0.5:0.7", "--J", "10"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["weierstrass", "--grid", "0.6:0.8:3", "--J", "12"];
    assert!(snawave(&args, a.path()).status.success());
    assert!(snawave(&args, b.path()).status.success());
    assert_eq!(read(a.path().join("weierstrass.csv")), read(b.path().join("weierstrass.csv")));
    assert_eq!(read(a.path().join("weierstrass_levels.csv")), read(b.path().join("weierstrass_levels.csv")));
}

#[test]
fn sweep_is_ordered_and_independent_of_workers() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["sweep", "--grid", "1.9,1.2,1.6,1.45", "--J", "10", "--N0", "2000", "--p", "4"];
    let one = snawave(&[&args[..], &["--workers", "1"]].concat(), a.path());
    let four = snawave(&[&args[..], &["--workers", "4"]].concat(), b.path());
    assert!(one.status.success() && four.status.success());
    let table = read(a.path().join("sweep.csv"));
    assert_eq!(table, read(b.path().join("sweep.csv")));
    assert_eq!(read(a.path().join("sweep_norm.csv")), read(b.path().join("sweep_norm.csv")));
    assert_eq!(column(&table, "sigma"), vec!["1.2", "1.45", "1.6", "1.9"]);
    assert_eq!(column(&table, "epsilon")[..2], ["0", "0"]);
    assert!(!table.contains("wall_time_seconds"));
}

#[test]
fn sweep_records_timing_only_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let out = snawave(&["sweep", "--grid", "1.7", "--J", "8", "--N0", "100", "--record-timing"], dir.path());
    assert!(out.status.success());
    assert!(read(dir.path().join("sweep.csv")).lines().next().unwrap().ends_with(",wall_time_seconds"));
}

#[test]
fn sweep_scans_orders() {
    let dir = tempfile::tempdir().unwrap();
    let out = snawave(&["sweep", "--grid", "1.7", "--J", "10", "--N0", "1000", "--scan-orders"], dir.path());
    assert!(out.status.success());
    let orders = read(dir.path().join("sweep_orders.csv"));
    assert_eq!(column(&orders, "p"), ["4", "6", "8", "10", "12", "14", "16", "18", "20"]);
    assert_eq!(column(&orders, "best").iter().filter(|b| *b == "1").count(), 1);
}

#[test]
fn sweep_along_epsilon() {
    let dir = tempfile::tempdir().unwrap();
    let out = snawave(
        &["sweep", "--sigma", "1.5", "--epsilon-grid", "0.01,1,0.1", "--J", "10", "--N0", "1000"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let norms = read(dir.path().join("sweep_norm.csv"));
    assert_eq!(column(&norms, "epsilon"), ["1", "0.1", "0.01"]);
    let out = snawave(&["sweep", "--epsilon-grid", "0.1", "--J", "10"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    let out = snawave(&["sweep", "--grid", "0.5,1.5", "--J", "10"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn collapsed_attractor_is_a_numeric_failure_with_a_warning() {
    let dir = tempfile::tempdir().unwrap();
    let out = snawave(&["sna", "--sigma", "0.5", "--J", "10", "--N0", "10000"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    let row = read(dir.path().join("sna_estimate.csv"));
    assert_eq!(column(&row, "kappa_warning"), ["1"]);
    assert!(column(&row, "status")[0].starts_with("degenerate input"));
}

#[test]
fn sna_writes_requested_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = snawave(
        &["sna", "--preset", "nopinch", "--J", "12", "--N0", "1e4", "--scatter", "--mesh", "--decomposition", "--format", "binary"],
        dir.path(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for f in ["sna_estimate.csv", "sna_levels.csv", "sna_scatter.csv", "sna_mesh.bin", "sna_decomposition.bin"] {
        assert!(dir.path().join(f).exists(), "{f}");
    }
    let mesh = snawave::format::read_mesh(&dir.path().join("sna_mesh.bin"), snawave::format::Format::Binary).unwrap();
    assert_eq!(mesh.len(), 4096);
    assert_eq!(read(dir.path().join("sna_scatter.csv")).lines().count(), 4097);
    assert_eq!(column(&read(dir.path().join("sna_estimate.csv")), "sigma"), ["1.699219"]);
}

#[test]
fn config_file_sits_between_flags_and_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    std::fs::write(&cfg, "# transfer curves\nsigma = 1.2\nk = 1\npoints = 8\n").unwrap();
    let out = snawave(&["transfer", "--config", cfg.to_str().unwrap(), "--points", "4"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = read(dir.path().join("transfer.csv"));
    assert_eq!(table.lines().count(), 1 + 2 * 4);
    assert_eq!(column(&table, "phi")[0], "5");

    std::fs::write(&cfg, "sigma = 1.2\nbogus = 1\n").unwrap();
    let out = snawave(&["transfer", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from-env");
    let out = Command::new(env!("CARGO_BIN_EXE_snawave"))
        .args(["transfer", "--points", "4", "--k", "0"])
        .env("SNAWAVE_OUT", &target)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(target.join("transfer.csv").exists());
}

#[test]
fn unwritable_output_is_an_io_failure() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("plain-file");
    std::fs::write(&file, "").unwrap();
    let out = snawave(&["transfer", "--points", "4"], &file);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(snawave(&["sna"], dir.path()).status.code(), Some(2));
    assert_eq!(snawave(&["sna", "--sigma", "1.5", "--J", "31"], dir.path()).status.code(), Some(2));
    assert_eq!(snawave(&["sna", "--sigma", "1.5", "--p", "21"], dir.path()).status.code(), Some(2));
    assert_eq!(snawave(&["transfer", "--c", "1"], dir.path()).status.code(), Some(2));
}
