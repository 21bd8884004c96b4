use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SWEEP: &str = r#"
[params]
beta1 = 1.0

[sweep]
variable = "density"
scale = "log"
start = 10.0
stop = 1000.0
points = 3

[sim]
trials = 300
seed = 7
"#;

fn udn(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_udn"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("failed to launch udn")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Data rows as `(label, numbers)`, comments and header dropped.
fn rows(text: &str) -> Vec<(String, Vec<Option<f64>>)> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            let mut fields = l.split(',');
            let label = fields.next().unwrap().to_string();
            let values = fields.map(|f| if f.is_empty() { None } else { Some(f.parse().unwrap()) }).collect();
            (label, values)
        })
        .collect()
}

fn assert_rows_are_physical(text: &str) {
    for (_, v) in rows(text) {
        let coverage = v[1].unwrap();
        let ase = v[3].unwrap();
        assert!((0.0..=1.0).contains(&coverage), "coverage {coverage}");
        assert!(ase >= 0.0, "ase {ase}");
        if let Some(mc) = v[4] {
            assert!((0.0..=1.0).contains(&mc));
            assert!(v[6].unwrap() >= 0.0);
        }
    }
}

#[test]
fn sweep_output_is_byte_identical_across_runs() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "run.toml", SWEEP);
    let cfg = cfg.to_str().unwrap();
    let a = udn(tmp.path(), &["sweep", "--config", cfg, "--out", "a.csv"]);
    let b = udn(tmp.path(), &["sweep", "--config", cfg, "--out", "sub/b.csv"]);
    assert!(a.status.success(), "{}", stderr(&a));
    assert!(b.status.success(), "{}", stderr(&b));
    let a = fs::read(tmp.path().join("a.csv")).unwrap();
    let b = fs::read(tmp.path().join("sub/b.csv")).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("# udn "));
    assert!(text.contains("sweep_var,sweep_value,coverage_analytic,coverage_err,ase_analytic,coverage_mc,coverage_mc_se,ase_mc,ase_mc_se"));
    assert_eq!(rows(&text).len(), 3);
    assert_rows_are_physical(&text);
}

#[test]
fn flags_override_the_file() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "run.toml", SWEEP);
    let cfg = cfg.to_str().unwrap();
    let out = udn(tmp.path(), &["sweep", "--config", cfg, "--out", "a.csv", "--no-mc"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = fs::read_to_string(tmp.path().join("a.csv")).unwrap();
    assert!(rows(&text).iter().all(|(_, v)| v[4].is_none()));

    let out = udn(tmp.path(), &["sweep", "--config", cfg, "--out", "b.csv", "--seed", "8"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let other = fs::read_to_string(tmp.path().join("b.csv")).unwrap();
    assert!(other.contains("seed = 8"));
    assert_ne!(rows(&other)[0].1[4], None);
}

#[test]
fn unknown_key_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "bad.toml", "[params]\nbeta3 = 1.0\n[sweep]\nvalues = [1.0]\n");
    let out = udn(tmp.path(), &["validate-config", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("beta3"), "{}", stderr(&out));
}

#[test]
fn valid_config_is_echoed() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(tmp.path(), "run.toml", SWEEP);
    let out = udn(tmp.path(), &["validate-config", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.starts_with("ok: 3 grid points"), "{stdout}");
    assert!(stdout.contains("beta1 = 1.0"), "{stdout}");
}

#[test]
fn infeasible_schedule_exits_with_four() {
    let tmp = TempDir::new().unwrap();
    let cfg = write(
        tmp.path(),
        "adapted.toml",
        "scenario = \"adapted\"\n[params]\nbeta1 = 0.0\n[sweep]\nvalues = [1e5]\n\
         [adaptation]\nk_per_km2 = 1.0\nfront_back_db = 20.0\n",
    );
    let out = udn(tmp.path(), &["sweep", "--config", cfg.to_str().unwrap(), "--out", "x.csv"]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
    assert!(!tmp.path().join("x.csv").exists());
}

#[test]
fn failed_write_leaves_no_partial_output() {
    let tmp = TempDir::new().unwrap();
    // The SVG's parent is a regular file, so staging it fails after the CSV
    // was staged.
    write(tmp.path(), "blocker", "");
    let text = format!("{SWEEP}\n[output]\nsvg = \"blocker/plot.svg\"\n");
    let cfg = write(tmp.path(), "run.toml", &text);
    let out = udn(tmp.path(), &["sweep", "--config", cfg.to_str().unwrap(), "--out", "x.csv", "--no-mc"]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    let left: Vec<_> = fs::read_dir(tmp.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    let mut left = left;
    left.sort();
    assert_eq!(left, ["blocker", "run.toml"]);
}

#[test]
fn adjudication_needs_enough_trials() {
    let tmp = TempDir::new().unwrap();
    let out = udn(tmp.path(), &["adjudicate", "--trials", "1000"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("sim.trials"));
    assert!(!tmp.path().join("adjudication.md").exists());
}

/// Compares a preset's analytic CSVs with the committed copies. Set
/// `UDN_BLESS=1` to rewrite them.
fn check_preset(preset: &str) {
    let tmp = TempDir::new().unwrap();
    let out = udn(tmp.path(), &[preset, "--out", "out", "--no-mc"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let mut names: Vec<String> = fs::read_dir(tmp.path().join("out"))
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    assert!(!names.is_empty());
    let bless = std::env::var_os("UDN_BLESS").is_some();
    for name in names {
        let actual = fs::read_to_string(tmp.path().join("out").join(&name)).unwrap();
        assert_rows_are_physical_if_main(&name, &actual);
        let golden = golden_dir().join(&name);
        if bless {
            fs::create_dir_all(golden_dir()).unwrap();
            fs::write(&golden, &actual).unwrap();
            continue;
        }
        let expected = fs::read_to_string(&golden).unwrap_or_else(|_| panic!("missing golden {}", golden.display()));
        let comments = |t: &str| -> Vec<String> {
            t.lines()
                .filter(|l| l.starts_with('#') && !l.starts_with("# udn "))
                .map(str::to_string)
                .collect()
        };
        assert_eq!(comments(&actual), comments(&expected), "{name}: provenance changed");
        let (a, e) = (rows(&actual), rows(&expected));
        assert_eq!(a.len(), e.len(), "{name}");
        for ((la, va), (le, ve)) in a.iter().zip(&e) {
            assert_eq!(la, le);
            assert_eq!(va.len(), ve.len());
            for (x, y) in va.iter().zip(ve) {
                match (x, y) {
                    (Some(x), Some(y)) => {
                        let scale = x.abs().max(y.abs()).max(1e-12);
                        assert!((x - y).abs() <= 1e-9 * scale, "{name}: {x} vs {y}");
                    }
                    (None, None) => {}
                    _ => panic!("{name}: column presence differs"),
                }
            }
        }
    }
}

fn assert_rows_are_physical_if_main(name: &str, text: &str) {
    if !name.ends_with(".limit.csv") {
        assert_rows_are_physical(text);
    }
}

#[test]
fn fig3_matches_golden() {
    check_preset("fig3");
}

#[test]
fn fig4_matches_golden() {
    check_preset("fig4");
}

#[test]
fn fig2_matches_golden() {
    check_preset("fig2");
}
