use std::path::{Path, PathBuf};
use std::process::Command as Process;

use clap::Parser;
use tempfile::TempDir;

use crase_cli::config::{parse_str, KEYS};
use crase_cli::error::exit;
use crase_cli::{run, Cli};
use crase_core::crase::minimize_duan_closed;
use crase_core::SqueezeParams;

/// A discretization small enough for tests that still stays warning-free.
const SMALL_ORACLE: &str = "m_oscillators = 335\ndelta_max = 10\ndt = 0.01\nt_region = 95\n\
                            mode_sigma = 8\nmode_center = 45\n";

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

/// Runs the CLI in-process and returns (exit code, stdout).
fn run_args(args: &[&str]) -> (u8, String) {
    let cli = Cli::try_parse_from(std::iter::once("crase").chain(args.iter().copied())).unwrap();
    let mut out = Vec::new();
    let code = run(&cli, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn run_with_config(cfg: &Path, args: &[&str]) -> (u8, String) {
    let mut all = vec!["--config", cfg.to_str().unwrap()];
    all.extend_from_slice(args);
    run_args(&all)
}

fn binary(args: &[&str]) -> std::process::Output {
    Process::new(env!("CARGO_BIN_EXE_crase"))
        .args(args)
        .output()
        .unwrap()
}

fn read_csv(path: &Path) -> Vec<Vec<f64>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    assert_eq!(
        r.headers().unwrap().iter().collect::<Vec<_>>(),
        vec!["sqrt_eps", "cosh_chi", "theta_star", "duan_min"]
    );
    r.records()
        .map(|rec| rec.unwrap().iter().map(|f| f.parse().unwrap()).collect())
        .collect()
}

#[test]
fn config_errors_exit_two_and_name_the_key() {
    let dir = TempDir::new().unwrap();
    let cases = [
        ("dup.cfg", "dt = 0.01\ndt = 0.02\n", "line 2 (dt)"),
        (
            "unknown.cfg",
            "gamma_b1 = 1\ncolour = red\n",
            "line 2 (colour)",
        ),
        ("type.cfg", "levels = three\n", "line 1 (levels)"),
        (
            "threshold.cfg",
            "gamma_a1 = 2\ngamma_b1 = 1\n",
            "below the lasing threshold",
        ),
    ];
    for (name, text, needle) in cases {
        let path = write(&dir, name, text);
        let out = binary(&["analytic", "--config", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(exit::CONFIG.into()), "{name}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(stderr.contains(needle), "{name}: {stderr}");
    }
    let missing = dir.path().join("absent.cfg");
    let out = binary(&["analytic", "--config", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(exit::CONFIG.into()));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot read"));
}

#[test]
fn empty_config_notice_lists_every_key() {
    let dir = TempDir::new().unwrap();
    let path = write(&dir, "empty.cfg", "# all defaults\n");
    let out = binary(&["analytic", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    let notice = stderr.lines().find(|l| l.starts_with("notice:")).unwrap();
    for key in KEYS {
        assert!(notice.contains(key), "{key} missing from {notice}");
    }
}

#[test]
fn dump_config_round_trips_bit_identically() {
    let dir = TempDir::new().unwrap();
    let full = "gamma_b1 = 3\ngamma_a1 = 1\ngamma_b2 = 3\ngamma_a2 = 1\n\
                m_oscillators = 1481\ndelta_max = 30.5\ndt = 0.003\nt_region = 420\n\
                mode_sigma = 40\nmode_center = 205\nsqrt_eps_min = 0\nsqrt_eps_max = 0.9\n\
                sqrt_eps_steps = 7\ncosh_chi_min = 1.01\ncosh_chi_max = 3\ncosh_chi_steps = 9\n\
                theta_policy = fixed(0.3)\nlevels = 4\ntolerance = 0.05\n\
                csv_path = out.csv\nsvg_path = out.svg\n";
    let path = write(&dir, "full.cfg", full);
    let (code, first) = run_with_config(&path, &["--dump-config"]);
    assert_eq!(code, 0);
    let again = write(&dir, "again.cfg", &first);
    let (code, second) = run_with_config(&again, &["--dump-config"]);
    assert_eq!(code, 0);
    assert_eq!(first, second);
    let a = parse_str(full).unwrap();
    let b = parse_str(&second).unwrap();
    assert_eq!(a.config, b.config);
    assert!(b.defaulted.is_empty());
}

fn analytic_with_rates(rates: (f64, f64, f64, f64)) -> (u8, String) {
    let dir = TempDir::new().unwrap();
    let text = format!(
        "gamma_b1 = {}\ngamma_a1 = {}\ngamma_b2 = {}\ngamma_a2 = {}\n",
        rates.0, rates.1, rates.2, rates.3
    );
    let path = write(&dir, "rates.cfg", &text);
    run_with_config(&path, &["analytic"])
}

fn field(table: &str, name: &str) -> f64 {
    table
        .lines()
        .find_map(|l| {
            let mut it = l.split_whitespace();
            (it.next() == Some(name)).then(|| it.next().unwrap().parse().unwrap())
        })
        .unwrap_or_else(|| panic!("{name} not in {table}"))
}

#[test]
fn analytic_examples() {
    let (code, t) = analytic_with_rates((3.0, 1.0, 1.0, 1.0));
    assert_eq!(code, 0);
    assert!((field(&t, "cosh_chi") - 2.0).abs() < 1e-8);
    assert_eq!(field(&t, "eps"), 0.0);
    assert!((field(&t, "n_ase") - 3.0).abs() < 1e-8);
    assert!((field(&t, "efficiency") - 1.0).abs() < 1e-12);
    assert!((field(&t, "duan_min") - 0.0717967697).abs() < 1e-9);
    assert!(t.contains("entangled (duan_min < 1)"));

    let (code, t) = analytic_with_rates((1.0, 0.0, 1.0, 0.0));
    assert_eq!(code, 0);
    for name in ["chi", "n_ase", "n_rase", "cross_ab"] {
        assert_eq!(field(&t, name), 0.0, "{name}");
    }
    assert_eq!(field(&t, "duan_min"), 1.0);
    assert!(t.contains("no entanglement (boundary)"));

    let (code, t) = analytic_with_rates((3.0, 1.0, 3.0, 1.0));
    assert_eq!(code, 0);
    assert!((field(&t, "eps") - 0.25).abs() < 1e-12);
    assert!(field(&t, "duan_min") <= 0.2046);
}

#[test]
fn analytic_csv_is_one_row() {
    let dir = TempDir::new().unwrap();
    let csv_path = dir.path().join("a.csv");
    let (code, _) = run_args(&["analytic", "--csv", csv_path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(csv_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("chi,cosh_chi,eps,"));
    assert!(lines[1].ends_with(",true"));
}

#[test]
fn figure3_corners() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "corners.cfg",
        "sqrt_eps_min = 0\nsqrt_eps_max = 0.9\nsqrt_eps_steps = 2\n\
         cosh_chi_min = 1.01\ncosh_chi_max = 3\ncosh_chi_steps = 2\n",
    );
    let (code, stdout) = run_with_config(&cfg, &["figure3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "sqrt_eps,cosh_chi,theta_star,duan_min");
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("0,1.01,"));
    assert!(lines[4].starts_with("0.9,3,"));
    for row in &lines[1..] {
        let duan: f64 = row.rsplit(',').next().unwrap().parse().unwrap();
        assert!(duan < 1.0, "{row}");
    }
}

#[test]
fn figure3_degenerate_axis_is_rejected() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "bad.cfg",
        "cosh_chi_min = 2\ncosh_chi_max = 2\ncosh_chi_steps = 2\n",
    );
    let (code, _) = run_with_config(&cfg, &["figure3"]);
    assert_eq!(code, exit::CONFIG);
}

#[test]
fn figure3_round_trip_and_svg() {
    let dir = TempDir::new().unwrap();
    let csv_path = dir.path().join("grid.csv");
    let svg_path = dir.path().join("grid.svg");
    let (code, stdout) = run_args(&[
        "figure3",
        "--csv",
        csv_path.to_str().unwrap(),
        "--svg",
        svg_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert!(stdout.is_empty());
    let rows = read_csv(&csv_path);
    assert_eq!(rows.len(), 51 * 60);
    for row in &rows {
        let p = SqueezeParams::from_axes(row[0], row[1]).unwrap();
        let r = minimize_duan_closed(p);
        assert!((r.sum_min - row[3]).abs() < 1e-9, "{row:?}");
        assert!(row[3] < 1.0);
        if row[0] == 0.0 {
            let chi = row[1].acosh();
            assert!((row[3] - (-2.0 * chi).exp()).abs() < 1e-9);
        }
    }
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert_eq!(svg.matches("<path").count(), 5);
    for level in ["0.1", "0.25", "0.5", "0.75", "0.9"] {
        assert!(svg.contains(&format!(r#"data-level="{level}""#)));
    }
}

#[test]
fn figure3_output_independent_of_thread_count() {
    let dir = TempDir::new().unwrap();
    let mut outputs = Vec::new();
    for jobs in ["1", "4"] {
        let csv_path = dir.path().join(format!("g{jobs}.csv"));
        let svg_path = dir.path().join(format!("g{jobs}.svg"));
        let (code, _) = run_args(&[
            "figure3",
            "--jobs",
            jobs,
            "--csv",
            csv_path.to_str().unwrap(),
            "--svg",
            svg_path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
        outputs.push((
            std::fs::read(csv_path).unwrap(),
            std::fs::read(svg_path).unwrap(),
        ));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn figure3_fixed_theta_is_not_a_claim() {
    // A poor fixed weight leaves cells above 1 but does not trip the sentinel.
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "fixed.cfg", "theta_policy = fixed(0.01)\n");
    let (code, stdout) = run_with_config(&cfg, &["figure3"]);
    assert_eq!(code, 0);
    assert!(stdout
        .lines()
        .skip(1)
        .any(|l| l.rsplit(',').next().unwrap().parse::<f64>().unwrap() >= 1.0));
}

#[test]
fn oracle_zero_squeezing_has_zero_deltas() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "chi0.cfg", &format!("{SMALL_ORACLE}gamma_a1 = 0\n"));
    let csv_path = dir.path().join("o.csv");
    let (code, stdout) = run_with_config(&cfg, &["oracle", "--csv", csv_path.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    let text = std::fs::read_to_string(csv_path).unwrap();
    assert!(text.starts_with("quantity,oracle,analytic,delta\n"));
    let n_ase = text.lines().find(|l| l.starts_with("n_ase,")).unwrap();
    let delta: f64 = n_ase.rsplit(',').next().unwrap().parse().unwrap();
    assert!(delta.abs() < 1e-9);
}

#[test]
fn oracle_broadband_mode_fails_tolerance() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "broad.cfg",
        &SMALL_ORACLE.replace("mode_sigma = 8", "mode_sigma = 1"),
    );
    let out = binary(&["oracle", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(exit::TOLERANCE.into()));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("warning: mode bandwidth"), "{stderr}");
}

#[test]
fn oracle_coarse_step_is_instability() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "coarse.cfg",
        &SMALL_ORACLE.replace("dt = 0.01", "dt = 0.5"),
    );
    let out = binary(&["oracle", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(exit::INSTABILITY.into()));
}

#[test]
fn oracle_default_is_within_tolerance() {
    let (code, stdout) = run_args(&["oracle"]);
    assert_eq!(code, 0, "{stdout}");
    let (code, _) = run_args(&["oracle", "--tolerance", "0.01"]);
    assert_eq!(code, exit::TOLERANCE);
}

#[test]
fn converge_needs_two_levels() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "one.cfg", &format!("{SMALL_ORACLE}levels = 1\n"));
    let (code, _) = run_with_config(&cfg, &["converge"]);
    assert_eq!(code, exit::CONFIG);
}

#[test]
fn converge_zero_squeezing_table_is_all_zero() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "chi0.cfg",
        &format!("{SMALL_ORACLE}gamma_a1 = 0\nlevels = 2\n"),
    );
    let csv_path = dir.path().join("c.csv");
    let (code, stdout) = run_with_config(&cfg, &["converge", "--csv", csv_path.to_str().unwrap()]);
    assert_eq!(code, 0, "{stdout}");
    let mut r = csv::Reader::from_path(&csv_path).unwrap();
    let headers = r.headers().unwrap().clone();
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    for row in &rows {
        for (h, v) in headers.iter().zip(row.iter()) {
            if ["n_ase", "n_rase", "cross_ab"].contains(&h) || h.starts_with("duan@") {
                assert!(v.parse::<f64>().unwrap().abs() < 1e-6, "{h} = {v}");
            }
            if h == "efficiency" {
                assert_eq!(v, "NA");
            }
        }
    }
}

#[test]
fn converge_small_study_exit_follows_tolerance() {
    let dir = TempDir::new().unwrap();
    let cfg = write(
        &dir,
        "two.cfg",
        "m_oscillators = 221\ndelta_max = 10\ndt = 0.01\nt_region = 60\nmode_sigma = 5\n\
         mode_center = 27\nlevels = 2\ntolerance = 2\n",
    );
    // This mode is too short for the small Duan sums to be accurate, but
    // every delta still shrinks from level 0 to level 1.
    let (code, stdout) = run_with_config(&cfg, &["converge", "--jobs", "2"]);
    assert_eq!(code, 0, "{stdout}");
    assert_eq!(stdout.lines().count(), 4);
    assert!(stdout.contains("monotone: true"));
    let (code, _) = run_with_config(&cfg, &["converge", "--tolerance", "0.5"]);
    assert_eq!(code, exit::TOLERANCE);
}

#[test]
fn missing_subcommand_is_a_usage_error() {
    let out = binary(&[]);
    assert_eq!(out.status.code(), Some(exit::CONFIG.into()));
    let out = binary(&["bogus"]);
    assert_eq!(out.status.code(), Some(exit::CONFIG.into()));
}
