use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn drsubmax(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drsubmax"))
        .args(args)
        .current_dir(dir)
        .env_remove("DRSUBMAX_SEED")
        .output()
        .unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn fixture() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/forum_sample.txt")
}

const QUADRATIC: &str = r#"{
    "objective": {"family": "quadratic",
                  "params": {"hessian": [[-1, -2], [-2, -1]], "linear": [3, 3], "constant": 0}},
    "constraint": {"type": "box"}
}"#;

const RUN: &str = r#"{
    "instance": "quadratic.json",
    "solvers": ["submodular_fw", "shrunken_fw", "two_phase", {"name": "pga", "label": "pga_adaptive", "step": "adaptive"}],
    "config": {"iterations": 30}
}"#;

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("quadratic.json"), QUADRATIC).unwrap();
    fs::write(dir.path().join("run.json"), RUN).unwrap();
    dir
}

fn csvs(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    names.sort();
    names
}

#[test]
fn run_writes_one_csv_per_solver_and_a_summary() {
    let dir = setup();
    let out = drsubmax(&["run", "-c", "run.json"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out_dir = dir.path().join("out");
    assert_eq!(
        csvs(&out_dir),
        [
            "trajectory_pga_adaptive_0.csv",
            "trajectory_shrunken_fw_0.csv",
            "trajectory_submodular_fw_0.csv",
            "trajectory_two_phase_0.csv"
        ]
    );
    let text = fs::read_to_string(out_dir.join("trajectory_submodular_fw_0.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), drsubmax::solvers::CSV_HEADER);
    assert_eq!(lines.count(), 31);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out_dir.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["runs"].as_array().unwrap().len(), 4);
    for run in summary["runs"].as_array().unwrap() {
        assert!(run["final_value"].as_f64().unwrap().is_finite());
    }
}

#[test]
fn reruns_are_byte_identical() {
    let dir = setup();
    assert_eq!(code(&drsubmax(&["run", "-c", "run.json", "-o", "a"], dir.path())), 0);
    assert_eq!(code(&drsubmax(&["run", "-c", "run.json", "-o", "b"], dir.path())), 0);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    assert_eq!(csvs(&a), csvs(&b));
    for name in csvs(&a) {
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name}");
    }
}

#[test]
fn repeats_write_one_csv_per_run() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{
        "instance": {"generate": {"family": "softmax", "n": 6}},
        "solver": "two_phase",
        "config": {"iterations": 10},
        "repeats": 3,
        "parallelism": 2,
        "seed": 5
    }"#;
    fs::write(dir.path().join("run.json"), config).unwrap();
    let out = drsubmax(&["run", "-c", "run.json"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert_eq!(
        csvs(&dir.path().join("out")),
        ["trajectory_two_phase_0.csv", "trajectory_two_phase_1.csv", "trajectory_two_phase_2.csv"]
    );
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/summary.json")).unwrap()).unwrap();
    let seeds: Vec<u64> = summary["runs"].as_array().unwrap().iter().map(|r| r["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds, [5, 6, 7]);
}

#[test]
fn seed_environment_variable_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let config = r#"{"instance": {"generate": {"family": "quadratic", "n": 4}}, "solver": "pga",
                     "config": {"iterations": 5}, "seed": 1}"#;
    fs::write(dir.path().join("run.json"), config).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_drsubmax"))
        .args(["run", "-c", "run.json"])
        .current_dir(dir.path())
        .env("DRSUBMAX_SEED", "42")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("out/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["seed"], 42);
}

#[test]
fn invalid_config_is_a_validation_error_naming_the_field() {
    let dir = setup();
    fs::write(dir.path().join("bad.json"), r#"{"instance": "quadratic.json", "solver": "pga", "config": {"iterations": "x"}}"#)
        .unwrap();
    let out = drsubmax(&["run", "-c", "bad.json"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("config.iterations"), "{}", stderr(&out));

    fs::write(dir.path().join("bad.json"), r#"{"instance": "quadratic.json", "solver": "simplex"}"#).unwrap();
    assert_eq!(code(&drsubmax(&["run", "-c", "bad.json"], dir.path())), 1);
    assert_eq!(code(&drsubmax(&["run", "-c", "missing.json"], dir.path())), 1);
}

#[test]
fn verify_passes_on_a_dr_quadratic() {
    let dir = setup();
    let out = drsubmax(&["verify", "-i", "quadratic.json", "--checks", "dr,weak_dr,hessian", "-o", "v"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("v/verify_dr.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert!(report["samples"].as_u64().unwrap() >= 1000);
    assert!(dir.path().join("v/verify_hessian.json").exists());
}

#[test]
fn verify_failure_exits_with_code_3_and_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let inst = r#"{"objective": {"family": "quadratic", "params": {"hessian": [[0, 1], [1, 0]], "linear": [0, 0]}}}"#;
    fs::write(dir.path().join("supermodular.json"), inst).unwrap();
    let out = drsubmax(&["verify", "-i", "supermodular.json", "--checks", "check_weak_dr"], dir.path());
    assert_eq!(code(&out), 3, "{}", stderr(&out));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL weak_dr"));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify_weak_dr.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], false);
    assert!(report["violations"].as_array().is_some_and(|v| !v.is_empty()));
}

#[test]
fn verify_unknown_check_is_a_validation_error() {
    let dir = setup();
    let out = drsubmax(&["verify", "-i", "quadratic.json", "--checks", "dr,convexity"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("convexity"));
    assert!(!dir.path().join("verify_dr.json").exists());
}

#[test]
fn gen_writes_a_verifiable_instance() {
    let dir = tempfile::tempdir().unwrap();
    let out = drsubmax(&["gen", "--family", "softmax", "-n", "5", "--seed", "3", "-o", "softmax.json"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let out = drsubmax(&["verify", "-i", "softmax.json", "--checks", "cross_partials,dr"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let out = drsubmax(&["gen", "--family", "bogus", "-n", "5", "-o", "x.json"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(!dir.path().join("x.json").exists());
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.json", "b.json"] {
        assert_eq!(code(&drsubmax(&["gen", "--family", "revenue", "-n", "8", "--seed", "9", "-o", name], dir.path())), 0);
    }
    assert_eq!(fs::read(dir.path().join("a.json")).unwrap(), fs::read(dir.path().join("b.json")).unwrap());
}

#[test]
fn graph_instances_resolve_paths_relative_to_the_instance() {
    let dir = tempfile::tempdir().unwrap();
    fs::create_dir(dir.path().join("data")).unwrap();
    fs::copy(fixture(), dir.path().join("data/forum.txt")).unwrap();
    let inst = r#"{"objective": {"family": "influence_graph", "params": {"path": "forum.txt"}},
                   "constraint": {"type": "cardinality", "u": 5, "b": 5}}"#;
    fs::write(dir.path().join("data/influence.json"), inst).unwrap();
    let out = drsubmax(&["verify", "-i", "data/influence.json", "--checks", "dr,monotone", "--samples", "200"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));

    let config = r#"{"instance": "data/influence.json", "solver": "submodular_fw", "config": {"iterations": 20}}"#;
    fs::write(dir.path().join("run.json"), config).unwrap();
    let out = drsubmax(&["run", "-c", "run.json"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
}

#[test]
fn missing_graph_file_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let inst = r#"{"objective": {"family": "influence_graph", "params": {"path": "nope.txt"}}}"#;
    fs::write(dir.path().join("i.json"), inst).unwrap();
    let out = drsubmax(&["verify", "-i", "i.json", "--checks", "dr"], dir.path());
    assert_ne!(code(&out), 0);
    assert!(stderr(&out).contains("nope.txt"), "{}", stderr(&out));
}

fn polylines(svg: &str) -> Vec<&str> {
    svg.lines().filter(|l| l.contains(r#"class="series""#)).collect()
}

#[test]
fn plot_draws_one_polyline_per_csv() {
    let dir = setup();
    assert_eq!(code(&drsubmax(&["run", "-c", "run.json"], dir.path())), 0);
    let out = drsubmax(&["plot", "out/trajectory_two_phase_0.csv", "-o", "one.svg"], dir.path());
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let svg = fs::read_to_string(dir.path().join("one.svg")).unwrap();
    assert_eq!(polylines(&svg).len(), 1);

    let mut args = vec!["plot".to_string()];
    args.extend(csvs(&dir.path().join("out")).into_iter().map(|n| format!("out/{n}")));
    args.extend(["-o".into(), "four.svg".into()]);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(code(&drsubmax(&args, dir.path())), 0);
    let svg = fs::read_to_string(dir.path().join("four.svg")).unwrap();
    let lines = polylines(&svg);
    assert_eq!(lines.len(), 4);
    let dashes: Vec<Option<&str>> =
        lines.iter().map(|l| l.split("stroke-dasharray=\"").nth(1).map(|r| r.split('"').next().unwrap())).collect();
    for i in 0..4 {
        for j in i + 1..4 {
            assert_ne!(dashes[i], dashes[j]);
        }
    }
}

#[test]
fn plot_rejects_bad_csvs_without_writing() {
    let dir = setup();
    fs::write(dir.path().join("empty.csv"), "").unwrap();
    let out = drsubmax(&["plot", "empty.csv", "-o", "p.svg"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(!dir.path().join("p.svg").exists());

    fs::write(dir.path().join("other.csv"), "a,b,c\n1,2,3\n").unwrap();
    let out = drsubmax(&["plot", "other.csv", "-o", "p.svg"], dir.path());
    assert_eq!(code(&out), 1);
    assert!(stderr(&out).contains("header"));
    assert!(!dir.path().join("p.svg").exists());
}
