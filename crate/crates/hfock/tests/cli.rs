use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn golden(case: &str, file: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(case).join(file);
    fs::read_to_string(path).unwrap()
}

fn hfock(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfock")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn out_dir(tmp: &tempfile::TempDir, name: &str) -> (PathBuf, String) {
    let p = tmp.path().join(name);
    let s = p.to_string_lossy().into_owned();
    (p, s)
}

fn value_at_origin(csv: &str) -> f64 {
    csv.lines()
        .skip(1)
        .find_map(|l| {
            let f: Vec<f64> = l.split(',').map(|v| v.parse().unwrap()).collect();
            (f[0] == 0.0 && f[1] == 0.0).then_some(f[2])
        })
        .unwrap()
}

#[test]
fn operator_outputs_match_golden_files() {
    let tmp = tempfile::tempdir().unwrap();
    for (case, trunc) in [("dirac", "4"), ("atom", "6")] {
        let (dir, d) = out_dir(&tmp, case);
        let out = hfock(&["operator", &data(&format!("{case}.json")), "--trunc", trunc, "--out", &d]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        for file in ["matrix.csv", "trace.txt"] {
            assert_eq!(fs::read_to_string(dir.join(file)).unwrap(), golden(case, file), "{case}/{file}");
        }
        let got = fs::read_to_string(dir.join("spectrum.csv")).unwrap();
        let want = golden(case, "spectrum.csv");
        assert_eq!(got.lines().count(), want.lines().count());
        for (a, b) in got.lines().zip(want.lines()).skip(1) {
            let a: f64 = a.split(',').nth(1).unwrap().parse().unwrap();
            let b: f64 = b.split(',').nth(1).unwrap().parse().unwrap();
            assert!((a - b).abs() < 1e-12, "{case}: {a} vs {b}");
        }
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let tmp = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let (dir, d) = out_dir(&tmp, run);
        assert_eq!(code(&hfock(&["berezin", &data("gaussian_bump.json"), "--window", "2", "--out", &d])), 0);
        assert_eq!(code(&hfock(&["report", "carleson", &data("dirac.json"), "--out", &d])), 0);
        outputs.push(["berezin.csv", "report-carleson.json"].map(|f| fs::read(dir.join(f)).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
}

#[test]
fn berezin_at_origin_by_convention() {
    let tmp = tempfile::tempdir().unwrap();
    let (dir, d) = out_dir(&tmp, "o");
    assert_eq!(code(&hfock(&["berezin", &data("dirac.json"), "--out", &d])), 0);
    let csv = fs::read_to_string(dir.join("berezin.csv")).unwrap();
    assert!(csv.starts_with("x,y,value\n"));
    assert_eq!(value_at_origin(&csv), 1.0);
    assert_eq!(code(&hfock(&["berezin", &data("dirac.json"), "--convention", "paper", "--out", &d])), 0);
    assert_eq!(value_at_origin(&fs::read_to_string(dir.join("berezin.csv")).unwrap()), 2.0);
}

#[test]
fn field_writes_average() {
    let tmp = tempfile::tempdir().unwrap();
    let (dir, d) = out_dir(&tmp, "o");
    assert_eq!(code(&hfock(&["field", &data("dirac.json"), "--r", "1", "--out", &d])), 0);
    let csv = fs::read_to_string(dir.join("average.csv")).unwrap();
    let v = value_at_origin(&csv);
    assert!((v - 1.0 / std::f64::consts::PI).abs() < 1e-11);
}

#[test]
fn parse_errors_name_the_field() {
    let out = hfock(&["berezin", &data("missing_w.json")]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("atoms[0].w"));
    assert_eq!(code(&hfock(&["berezin", "/nonexistent/measure.json"])), 2);
    assert_eq!(code(&hfock(&["report", "sideways", &data("dirac.json")])), 2);
    assert_eq!(code(&hfock(&["--help"])), 0);
}

#[test]
fn report_exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let (dir, d) = out_dir(&tmp, "o");
    assert_eq!(code(&hfock(&["report", "compact", &data("dirac.json"), "--out", &d])), 0);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.join("report-compact.json")).unwrap()).unwrap();
    assert_eq!(json["report"]["verdict"], "satisfied");
    assert_eq!(json["settings"]["trunc"], serde_json::json!([10, 20]));
    assert_eq!(code(&hfock(&["report", "carleson", &data("dirac.json"), "--r", "0", "--out", &d])), 2);
    assert_eq!(code(&hfock(&["report", "vanishing", &data("constant_small.json"), "--out", &d])), 1);
    // finite-support constant density: the matrix arm saturates while the window arms grow
    assert_eq!(code(&hfock(&["report", "schatten", "-p", "1", &data("constant_small.json"), "--out", &d])), 4);
}

#[test]
fn symbol_reports_need_a_density() {
    let tmp = tempfile::tempdir().unwrap();
    let (dir, d) = out_dir(&tmp, "o");
    let out = hfock(&["report", "symbol-schatten", &data("gaussian_bump.json"), "-p", "1", "--trunc", "10,20", "--out", &d]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.join("report-symbol-schatten.json")).unwrap()).unwrap();
    let bound = json["report"]["extras"][2]["value"].as_f64().unwrap();
    assert!((bound - 2.0).abs() < 1e-9);
    assert_eq!(code(&hfock(&["report", "symbol-schatten", &data("dirac.json"), "--out", &d])), 2);
}

#[test]
fn config_file_under_flags() {
    let tmp = tempfile::tempdir().unwrap();
    let (dir, d) = out_dir(&tmp, "o");
    let config = tmp.path().join("run.toml");
    fs::write(&config, "alpha = 2.0\nconvention = \"paper\"\ntrunc = [3]\n").unwrap();
    let cfg = config.to_string_lossy().into_owned();
    assert_eq!(code(&hfock(&["operator", &data("dirac.json"), "--config", &cfg, "--alpha", "0.5", "--out", &d])), 0);
    let trace = fs::read_to_string(dir.join("trace.txt")).unwrap();
    assert!(trace.starts_with("alpha 5.00000000000e-1\nconvention paper\ncut 3\n"), "{trace}");
    fs::write(&config, "alpha = -1\n").unwrap();
    assert_eq!(code(&hfock(&["operator", &data("dirac.json"), "--config", &cfg, "--out", &d])), 2);
    fs::write(&config, "colour = 3\n").unwrap();
    assert_eq!(code(&hfock(&["operator", &data("dirac.json"), "--config", &cfg, "--out", &d])), 2);
}

#[test]
fn lattice_command() {
    let tmp = tempfile::tempdir().unwrap();
    let (dir, d) = out_dir(&tmp, "o");
    assert_eq!(code(&hfock(&["lattice", "--r", "1", "--extent", "4", "--out", &d])), 0);
    let csv = fs::read_to_string(dir.join("lattice.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 81);
    let text = fs::read_to_string(dir.join("covering.txt")).unwrap();
    assert!(text.contains("covering_multiplicity 14\n"), "{text}");
}

#[test]
fn unwritable_output_is_exit_3() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out = hfock(&["operator", &data("dirac.json"), "--out", &blocker.to_string_lossy()]);
    assert_eq!(code(&out), 3);
}
