use std::fs;
use std::process::{Command, Output};

fn coaxial(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_coaxial")).args(args).output().expect("run coaxial")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[test]
fn catalog_lists_entries() {
    let o = coaxial(&["catalog"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    for name in ["octahedron", "bipyramid3", "rhombic_dodecahedron", "gbp5"] {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name}");
    }
}

#[test]
fn octahedron_graph_dot() {
    let o = coaxial(&["graph", "--catalog", "octahedron"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains("[label=") && !l.contains("->")).count(), 7);
    assert_eq!(text.lines().filter(|l| l.contains("->")).count(), 7);
    assert!(text.contains("Hexagonal prism [4]"));
}

#[test]
fn output_is_stable_across_job_counts() {
    let run = |jobs: &str| coaxial(&["--jobs", jobs, "analyze", "--catalog", "octahedron", "--faces", "--homology", "--smoothings"]);
    let one = run("1");
    assert_eq!(code(&one), 0);
    for jobs in ["2", "4"] {
        assert_eq!(run(jobs).stdout, one.stdout, "--jobs {jobs}");
    }
}

#[test]
fn tuple_document_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bp.json");
    fs::write(&path, r#"{"m": 2, "vectors": [[-1,-1],[1,-1],[1,0],[1,1],[-1,1],[-1,0]]}"#).unwrap();
    let out = dir.path().join("report.json");
    let o = coaxial(&["analyze", "--tuple", path.to_str().unwrap(), "--homology", "-o", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out).unwrap()).unwrap();
    assert!(report.get("homology").is_some());
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"m": 1, "vectors": [[1], ["1/0"]]}"#).unwrap();
    assert_eq!(code(&coaxial(&["analyze", "--tuple", bad.to_str().unwrap(), "--faces"])), 2);
    fs::write(&bad, "{ not json").unwrap();
    let o = coaxial(&["analyze", "--tuple", bad.to_str().unwrap(), "--faces"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    assert_eq!(code(&coaxial(&["analyze", "--catalog", "no_such_entry", "--faces"])), 2);
}

#[test]
fn size_guard_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.json");
    let vectors: Vec<String> = (0..30).map(|i| format!("[{}]", if i % 2 == 0 { 1 } else { -1 })).collect();
    fs::write(&path, format!(r#"{{"m": 1, "vectors": [{}]}}"#, vectors.join(","))).unwrap();
    assert_eq!(code(&coaxial(&["analyze", "--tuple", path.to_str().unwrap(), "--faces"])), 3);
}

#[test]
fn paranoid_run_succeeds() {
    let o = coaxial(&["--paranoid", "hyperbolic", "--catalog", "octahedron"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}
