use std::path::Path;
use std::process::{Command, Output};

fn shiftlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shiftlab")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn theorem1_suite_reports_four_claims() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = shiftlab(&["run", "--suite", "theorem1", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    let ids: Vec<&str> = report["claims"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["T1-i-weak-bound", "T1-ii-divergence", "T1-iii-schatten", "T1-iv-similarity"]);
    assert!(report["metadata"]["indexing_note"].as_str().unwrap().contains("j/(j+1)"));
    let csv = std::fs::read_to_string(out.join("t1_partial_sums.csv")).unwrap();
    assert!(csv.starts_with("n,ln_n,partial_sum\n"));
}

#[test]
fn malformed_weight_family_exits_2_naming_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "bad.toml", "[weights]\nfamily = \"triangular\"\n");
    for args in [vec!["validate", "--config", &cfg], vec!["run", "--config", &cfg]] {
        let o = shiftlab(&args);
        assert_eq!(o.status.code(), Some(2));
        assert!(String::from_utf8_lossy(&o.stderr).contains("weights.family"));
    }
    let cfg = write(dir.path(), "neg.toml", "[weights]\nfamily = \"constant\"\nvalue = -1.0\n");
    let o = shiftlab(&["validate", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("weights.value"));
}

#[test]
fn failing_claim_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "strict.toml", "suite = \"theorem3\"\n[theorem3]\nduality_r_squared = 0.9999\n");
    let out = dir.path().join("out");
    let o = shiftlab(&["run", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("T3-i-duality-growth      fail"));
}

#[test]
fn reference_config_validates() {
    let dir = tempfile::tempdir().unwrap();
    let o = shiftlab(&["default-config"]);
    assert_eq!(o.status.code(), Some(0));
    let cfg = write(dir.path(), "ref.toml", &String::from_utf8(o.stdout).unwrap());
    assert_eq!(shiftlab(&["validate", "--config", &cfg]).status.code(), Some(0));
}
