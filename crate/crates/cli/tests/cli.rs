use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn canring(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canring"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn pipeline(out: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["pipeline", "--alpha", "1", "--c", "1", "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    canring(&args)
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn pipeline_alpha1_c1_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let o = pipeline(dir.path(), &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let alpha = json(&dir.path().join("alpha.json"));
    let mut params: Vec<&str> = alpha["parameters"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    params.sort();
    assert_eq!(params, ["b11", "b12", "b2", "b5", "b6", "b8", "b9", "d", "g9"]);
    let m = alpha["matrix"].as_array().unwrap();
    assert_eq!(m.len(), 6);
    assert_eq!(m[0][5]["text"], "y1^2 - y2^2 - d*y3^2");
    assert_eq!(m[0][1]["text"], "b2*x*y2*y3");
    let term = &m[0][1]["terms"][0];
    assert_eq!(term["coeff"], "1");
    assert_eq!(term["exps"]["y3"], 1);

    let stats = json(&dir.path().join("stats.json"));
    assert_eq!(stats["f_initial"], 876);
    assert_eq!(stats["parameters"], 394);
    assert_eq!(stats["r_parameters"], 371);
    assert_eq!(stats["ansatz_parameters"], 23);
    assert!(stats["wall_seconds"].as_f64().unwrap() > 0.0);
    assert!(stats["peak_memory_kb"].as_u64().unwrap() > 0);

    let eqs = json(&dir.path().join("equations.json"));
    assert_eq!(eqs["equations"].as_array().unwrap().len(), 21);
    let deps = fs::read_to_string(dir.path().join("deps.log")).unwrap();
    assert!(deps.lines().all(|l| l.contains(" := ")));
    assert_eq!(deps.lines().count() as u64, stats["dependencies"].as_u64().unwrap());
}

#[test]
fn pipeline_output_is_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(code(&pipeline(a.path(), &[])), 0);
    assert_eq!(code(&pipeline(b.path(), &[])), 0);
    for f in ["alpha.json", "equations.json", "deps.log"] {
        assert_eq!(
            fs::read(a.path().join(f)).unwrap(),
            fs::read(b.path().join(f)).unwrap(),
            "{f}"
        );
    }
}

#[test]
fn pipeline_round_cap_fails_with_dump() {
    let dir = tempfile::tempdir().unwrap();
    let o = pipeline(dir.path(), &["--max-rounds", "0"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("equations left"));
    let dump = fs::read_to_string(dir.path().join("residual_f.txt")).unwrap();
    assert_eq!(dump.lines().count(), 782);
    let stats = json(&dir.path().join("stats.json"));
    assert_eq!(stats["solved"], false);
    assert!(stats["peak_memory_kb"].as_u64().is_some());
}

#[test]
fn pipeline_rejects_bad_case() {
    let dir = tempfile::tempdir().unwrap();
    let o = canring(&[
        "pipeline",
        "--alpha",
        "4",
        "--c",
        "1",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn verify_single_checks() {
    let o = canring(&["verify", "--check", "lemma2"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("lemma2"));
    let o = canring(&["verify", "--check", "scaling", "--seed", "7"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn verify_unknown_check_is_usage_error() {
    assert_eq!(code(&canring(&["verify", "--check", "nope"])), 2);
}

#[test]
fn verify_all_fails_on_corrupted_golden() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("golden.json");
    let golden = serde_json::json!({
        "g": "g9*y2^2*y3",
        "q": ["b2*y2*y3", "b5*y1*y2", "b9*y2^2", "b12*y3^2"],
        "conic": "y1^2 - y2^2 - d*y3^2",
    });
    fs::write(&path, golden.to_string()).unwrap();
    let o = canring(&["verify", "--check", "all", "--golden", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let out = String::from_utf8_lossy(&o.stdout);
    let line = out.lines().find(|l| l.starts_with("printed_alpha_golden")).unwrap();
    assert!(line.contains("FAIL"));
    // the other checks are unaffected
    let lemma = out.lines().find(|l| l.starts_with("lemma2")).unwrap();
    assert!(lemma.contains("pass"));
}

#[test]
fn verify_all_passes() {
    let o = canring(&["verify"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn special_surfaces() {
    for s in ["by", "bf"] {
        let o = canring(&["special", "--surface", s]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    }
    assert_eq!(code(&canring(&["special", "--surface", "xx"])), 2);
}
