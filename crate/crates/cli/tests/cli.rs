use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;
use unifit::io::parse_report;
use unifit::montecarlo::parse_power_table;

fn unifit(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_unifit"));
    cmd.args(args).env_remove("UNIFIT_CACHE_DIR");
    if let Some(dir) = cache {
        cmd.env("UNIFIT_CACHE_DIR", dir);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn csv(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn column(values: impl IntoIterator<Item = f64>) -> String {
    let mut s = String::from("time\n");
    for v in values {
        s.push_str(&format!("{v}\n"));
    }
    s
}

/// 55 times spread evenly over (0, 23).
fn seconds() -> String {
    column((0..55).map(|i| (23.0 * (i as f64 + 0.5) / 55.0 * 1e4).round() / 1e4))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn grid_is_accepted() {
    let dir = TempDir::new().unwrap();
    let f = csv(&dir, "grid.csv", &column((1..=9).map(|i| i as f64 / 10.0)));
    let o = unifit(&["test", s(&f)], None);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("do not reject"));
}

#[test]
fn raw_scale_rejects_then_rescaling_accepts() {
    let dir = TempDir::new().unwrap();
    let f = csv(&dir, "seconds.csv", &seconds());
    let raw = unifit(&["test", s(&f)], None);
    assert_eq!(code(&raw), 1);
    assert!(stderr(&raw).contains("outside [0, 1]"));

    let out = dir.path().join("report.json");
    let scaled = unifit(
        &[
            "test",
            s(&f),
            "--standardize",
            "range:0,23",
            "--out",
            s(&out),
        ],
        None,
    );
    assert_eq!(code(&scaled), 0, "{}", stderr(&scaled));
    let report = parse_report(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report.format_version, 1);
    assert!(!report.rejected());
    assert_eq!(report.n, 55);
    assert_eq!(report.alpha, 0.05);
    assert!(report.warnings.is_empty());
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["standardization"]["kind"], "range");
    assert_eq!(json["standardization"]["b"], 23.0);

    let minmax = unifit(&["test", s(&f), "--standardize", "minmax"], None);
    assert!(stdout(&minmax).contains("minmax"));
    assert!(matches!(code(&minmax), 0 | 1));
}

#[test]
fn range_flag_matches_prescaled_file() {
    let dir = TempDir::new().unwrap();
    let raw: Vec<f64> = (0..40)
        .map(|i| ((i * 37 % 41) as f64 + 0.25) * 0.5)
        .collect();
    let f = csv(&dir, "raw.csv", &column(raw.iter().copied()));
    let g = csv(
        &dir,
        "scaled.csv",
        &column(raw.iter().map(|x| (x - 0.0) / (20.5 - 0.0))),
    );
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    unifit(
        &[
            "test",
            s(&f),
            "--standardize",
            "range:0,20.5",
            "--out",
            s(&a),
        ],
        None,
    );
    unifit(&["test", s(&g), "--out", s(&b)], None);
    let ra = parse_report(&fs::read_to_string(&a).unwrap()).unwrap();
    let rb = parse_report(&fs::read_to_string(&b).unwrap()).unwrap();
    assert!((ra.statistic - rb.statistic).abs() <= 1e-12);
    assert_eq!(ra.decision, rb.decision);
}

#[test]
fn competitors_use_simulated_critical_values_and_the_cache() {
    let dir = TempDir::new().unwrap();
    let cache = dir.path().join("cache");
    let f = csv(&dir, "grid.csv", &column((1..=20).map(|i| i as f64 / 21.0)));
    for method in ["ks", "frozini", "sherman", "q", "q-upper"] {
        let out = dir.path().join(format!("{method}.json"));
        let o = unifit(
            &[
                "test",
                s(&f),
                "--method",
                method,
                "--reps",
                "2000",
                "--seed",
                "3",
                "--out",
                s(&out),
            ],
            Some(&cache),
        );
        assert!(matches!(code(&o), 0 | 1), "{method}: {}", stderr(&o));
        let r = parse_report(&fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(r.reps, Some(2000));
        assert_eq!(r.seed, Some(3));
        assert_eq!(r.method.label(), method);
    }
    let text = fs::read_to_string(cache.join("critical_values.tsv")).unwrap();
    for method in ["ks", "frozini", "sherman", "q", "q-upper"] {
        assert!(
            text.contains(&format!("\n{method}\t20\t0.05\t2000\t3\t")),
            "{method}"
        );
    }
}

#[test]
fn off_support_policy() {
    let dir = TempDir::new().unwrap();
    let f = csv(&dir, "seconds.csv", &seconds());
    let ks = unifit(&["test", s(&f), "--method", "ks", "--reps", "500"], None);
    assert_eq!(code(&ks), 1);
    assert!(stderr(&ks).contains("warning"));
    for method in ["sherman", "frozini", "q"] {
        let o = unifit(&["test", s(&f), "--method", method], None);
        assert_eq!(code(&o), 2, "{method}");
        assert!(stderr(&o).contains("unit interval"), "{method}");
    }
}

#[test]
fn argument_and_data_errors() {
    let dir = TempDir::new().unwrap();
    let constant = csv(&dir, "const.csv", "time\n0.5\n0.5\n0.5\n");
    let o = unifit(&["test", s(&constant), "--standardize", "minmax"], None);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("constant"));

    let f = csv(&dir, "seconds.csv", &seconds());
    let o = unifit(&["test", s(&f), "--standardize", "range:5,5"], None);
    assert_eq!(code(&o), 2);

    let bad = csv(&dir, "bad.csv", "time\n0.1\n0.2\nabc\n");
    let o = unifit(&["test", s(&bad)], None);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 4"), "{}", stderr(&o));

    let blank = csv(&dir, "blank.csv", "time\n0.1\n\n0.3\n");
    let o = unifit(&["test", s(&blank)], None);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = unifit(&["test", "/nonexistent/file.csv"], None);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&unifit(&["test", s(&f), "--alpha", "1.5"], None)), 2);
    assert_eq!(code(&unifit(&["test", s(&f), "--method", "nope"], None)), 2);
    assert_eq!(code(&unifit(&["frobnicate"], None)), 2);
    assert_eq!(code(&unifit(&["--help"], None)), 0);
}

const EQUIPMENT: &str = "time,status\n\
0.6,1\n1.4,1\n2.1,0\n2.9,1\n3.5,1\n4.2,0\n5.3,1\n6.6,1\n7.4,0\n8.8,1\n";

#[test]
fn censored_workflow() {
    let dir = TempDir::new().unwrap();
    let f = csv(&dir, "equipment.csv", EQUIPMENT);
    let out = dir.path().join("censored.json");
    let o = unifit(
        &[
            "test-censored",
            s(&f),
            "--standardize",
            "range:0,10",
            "--out",
            s(&out),
        ],
        None,
    );
    assert!(matches!(code(&o), 0 | 1), "{}", stderr(&o));
    let r = parse_report(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(r.n, 10);
    assert_eq!(r.events, Some(7));
    assert_eq!(code(&o), i32::from(r.rejected()));

    let same = unifit(
        &[
            "test",
            s(&f),
            "--method",
            "censored",
            "--standardize",
            "range:0,10",
        ],
        None,
    );
    assert_eq!(stdout(&same), stdout(&o));

    for extra in [["--variance", "literal"], ["--weights", "right"]] {
        let mut args = vec!["test-censored", s(&f), "--standardize", "range:0,10"];
        args.extend(extra);
        assert!(matches!(code(&unifit(&args, None)), 0 | 1));
    }
}

#[test]
fn censored_file_needs_censored_method() {
    let dir = TempDir::new().unwrap();
    let f = csv(&dir, "equipment.csv", EQUIPMENT);
    for method in ["delta", "ks", "sherman"] {
        let o = unifit(&["test", s(&f), "--method", method], None);
        assert_eq!(code(&o), 2);
        assert!(
            stderr(&o).contains("not available for censored"),
            "{}",
            stderr(&o)
        );
    }
}

#[test]
fn all_events_match_the_complete_data_statistic() {
    let dir = TempDir::new().unwrap();
    let times: Vec<f64> = (0..30)
        .map(|i| ((i * 17 % 31) as f64 + 0.5) / 31.0)
        .collect();
    let mut body = String::from("time,status\n");
    for t in &times {
        body.push_str(&format!("{t},1\n"));
    }
    let f = csv(&dir, "events.csv", &body);
    let g = csv(&dir, "complete.csv", &column(times.iter().copied()));
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    unifit(&["test-censored", s(&f), "--out", s(&a)], None);
    unifit(&["test", s(&g), "--out", s(&b)], None);
    let rc = parse_report(&fs::read_to_string(&a).unwrap()).unwrap();
    let rd = parse_report(&fs::read_to_string(&b).unwrap()).unwrap();
    assert!((rc.statistic - rd.statistic).abs() <= 1e-12);
    assert_eq!(rc.n, rd.n);
}

#[test]
fn single_event_is_a_sample_size_error() {
    let dir = TempDir::new().unwrap();
    let f = csv(&dir, "one.csv", "time,status\n0.2,0\n0.4,1\n0.7,0\n");
    let o = unifit(&["test-censored", s(&f)], None);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("at least 2"), "{}", stderr(&o));
    let bad = csv(&dir, "status.csv", "time,status\n0.2,2\n0.4,1\n");
    assert_eq!(code(&unifit(&["test-censored", s(&bad)], None)), 2);
}

#[test]
fn simulate_custom_cell_and_table_errors() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("sim");
    let o = unifit(
        &[
            "simulate",
            "--dist",
            "uniform:0,1.2",
            "--n",
            "50",
            "--alpha",
            "0.05",
            "--reps",
            "2000",
            "--seed",
            "7",
            "--method",
            "delta",
            "--out",
            s(&out),
        ],
        None,
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let table = parse_power_table(&fs::read_to_string(out.join("custom.json")).unwrap()).unwrap();
    assert_eq!(table.cells.len(), 1);
    let cell = &table.cells[0];
    assert_eq!(cell.published, Some(0.9068));
    assert!((cell.rate - 0.9068).abs() < 0.04, "{}", cell.rate);
    assert!(out.join("custom.txt").exists());

    let o = unifit(&["simulate", "--table", "T9"], None);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("T9"));
    assert_eq!(
        code(&unifit(&["simulate", "--dist", "uniform:0,1"], None)),
        2
    );
    assert_eq!(
        code(&unifit(
            &["simulate", "--dist", "cauchy:0,1", "--n", "5"],
            None
        )),
        2
    );
}

#[test]
fn simulate_table_subset() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("t1");
    let o = unifit(
        &[
            "simulate",
            "--table",
            "T1",
            "--method",
            "delta",
            "--reps",
            "1000",
            "--seed",
            "7",
            "--out",
            s(&out),
        ],
        None,
    );
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let table = parse_power_table(&fs::read_to_string(out.join("T1.json")).unwrap()).unwrap();
    assert_eq!(table.cells.len(), 8);
    assert!(table
        .cells
        .iter()
        .all(|c| c.published.is_some() && c.diff.is_some()));
    assert!(stdout(&o).contains("T1"));
}

#[test]
fn calibrate_prints_the_bound() {
    let o = unifit(
        &["calibrate", "--dist", "uniform:0,1", "--target", "0.2"],
        None,
    );
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("2.5000000000"), "{}", stdout(&o));
    let o = unifit(&["calibrate", "--dist", "exp:1", "--target", "0.4"], None);
    assert!(stdout(&o).contains("2.23161188"), "{}", stdout(&o));
    let o = unifit(
        &["calibrate", "--dist", "uniform:0,1", "--target", "1.5"],
        None,
    );
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("not attainable"));
}
