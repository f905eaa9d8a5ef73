//! Black-box tests of the binary: spawn it, check stdout and exit codes.

use std::path::Path;
use std::process::{Command, Output};

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qldpc"))
        .args(args)
        .current_dir(dir)
        .env_remove("QLDPC_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn construct_prints_code_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["construct", "--family", "qc", "--p", "7", "--sigma", "3"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("[[50,12]]"), "{text}");
    assert!(text.contains("claimed distance: 6"), "{text}");
    assert!(dir.path().join("q1.toml").exists());
    assert!(dir.path().join("q1.hx.alist").exists());
    assert!(dir.path().join("q1.hz.alist").exists());

    let out = run_in(dir.path(), &["construct", "--family", "eg", "--s", "3"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("[[73,19]]"), "{}", stdout(&out));
}

#[test]
fn construct_rejects_odd_order_sigma() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["construct", "--family", "qc", "--p", "7", "--sigma", "2"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("odd multiplicative order"), "{}", stderr(&out));
}

#[test]
fn construct_rejects_bad_family_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let not_prime = run_in(dir.path(), &["construct", "--family", "qc", "--p", "9", "--sigma", "2"]);
    assert_eq!(code(&not_prime), 2);
    assert!(stderr(&not_prime).contains("prime"), "{}", stderr(&not_prime));

    let s_range = run_in(dir.path(), &["construct", "--family", "eg", "--s", "6"]);
    assert_eq!(code(&s_range), 2);
    assert!(stderr(&s_range).contains("1..=5"), "{}", stderr(&s_range));
}

#[test]
fn out_dir_env_sets_default_directory() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("artifacts");
    let out = Command::new(env!("CARGO_BIN_EXE_qldpc"))
        .args(["construct", "--preset", "e1"])
        .current_dir(dir.path())
        .env("QLDPC_OUT_DIR", &target)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(target.join("e1.toml").exists());
    assert!(!dir.path().join("e1.toml").exists());
}

#[test]
fn constructed_descriptor_revalidates_clean() {
    let dir = tempfile::tempdir().unwrap();
    let built = run_in(dir.path(), &["construct", "--preset", "q3"]);
    assert_eq!(code(&built), 0, "stderr: {}", stderr(&built));
    let out = run_in(dir.path(), &["validate", "q3.toml"]);
    assert_eq!(code(&out), 0, "stdout: {}\nstderr: {}", stdout(&out), stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("result: pass"), "{text}");
    assert!(text.contains("orthogonality"), "{text}");
    assert!(text.contains("residual 4-cycle pairs: none"), "{text}");
}

#[test]
fn geometry_descriptor_lists_mirrored_residual_pairs() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["construct", "--preset", "e2"]);
    let out = run_in(dir.path(), &["validate", "e2.toml"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("result: pass"), "{text}");
    assert!(text.contains("residual 4-cycle pairs ("), "{text}");
    // Every listed pair is a row and its mirror in the other half.
    let m = qldpc::presets::build("e2").unwrap().hx().rows();
    for line in text.lines().filter(|l| l.trim_start().starts_with("rows (")) {
        let inner = line.trim_start().strip_prefix("rows (").unwrap();
        let (a, rest) = inner.split_once(',').unwrap();
        let (b, _) = rest.split_once(')').unwrap();
        let a: usize = a.trim().parse().unwrap();
        let b: usize = b.trim().parse().unwrap();
        assert_eq!(b, a + m, "{line}");
    }
}

#[test]
fn tampered_matrix_bit_fails_validation() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["construct", "--preset", "e1"]);
    let hx_path = dir.path().join("e1.hx.alist");
    let mut hx = qldpc::alist::from_alist(&std::fs::read_to_string(&hx_path).unwrap()).unwrap();
    let flipped = hx.get(0, 0);
    hx.set(0, 0, !flipped);
    std::fs::write(&hx_path, qldpc::alist::to_alist(&hx)).unwrap();

    let out = run_in(dir.path(), &["validate", "e1.toml"]);
    assert_eq!(code(&out), 1);
    let text = stdout(&out);
    assert!(text.contains("twisted condition"), "{text}");
    assert!(text.contains("row pair"), "{text}");
    assert!(text.contains("result: fail"), "{text}");
}

#[test]
fn missing_or_corrupt_descriptor_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = run_in(dir.path(), &["validate", "ghost.toml"]);
    assert_eq!(code(&missing), 2);
    assert!(stderr(&missing).contains("cannot read"), "{}", stderr(&missing));

    std::fs::write(dir.path().join("bad.toml"), "not = [valid").unwrap();
    let corrupt = run_in(dir.path(), &["validate", "bad.toml"]);
    assert_eq!(code(&corrupt), 2);
}

#[test]
fn distance_reports_found_weight() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["distance", "--code", "e1", "--w-max", "4"]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(
        stdout(&out).contains("minimum logical-operator weight: 3 (claimed 3)"),
        "{}",
        stdout(&out)
    );
}

#[test]
fn simulate_reports_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "simulate", "--code", "e1", "--eps", "0.1", "--min-frame-errors", "5",
            "--seed", "9", "--out", "run.csv",
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    // The resolved configuration is announced before any results.
    assert!(text.contains("seed = 9"), "{text}");
    assert!(text.contains("decoder = camel"), "{text}");
    let csv = std::fs::read_to_string(dir.path().join("run.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "code,decoder,success_mode,epsilon,trials,frame_errors,fer,ci95_low,ci95_high,iterations,master_seed"
    );
    assert!(lines.next().unwrap().starts_with("e1,camel,degenerate,0.1,"));
    assert_eq!(lines.next(), None);
}

#[test]
fn simulate_runs_a_saved_descriptor() {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), &["construct", "--preset", "e1", "--out", "mine.toml"]);
    let out = run_in(
        dir.path(),
        &[
            "simulate", "--code", "mine.toml", "--eps", "0.1", "--min-frame-errors", "3",
            "--out", "mine.csv",
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("mine.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("mine,"), "{csv}");
}

#[test]
fn sweep_emits_points_in_input_order() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(
        dir.path(),
        &[
            "sweep", "--code", "e1", "--eps-list", "0.12,0.1", "--min-frame-errors", "4",
            "--out", "sweep.csv",
        ],
    );
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let csv = std::fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].contains(",0.12,"), "{csv}");
    assert!(rows[1].contains(",0.1,"), "{csv}");
}

#[test]
fn thread_count_does_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let args = |threads: &'static str, out: &'static str| {
        vec![
            "simulate", "--code", "e1", "--eps", "0.1", "--min-frame-errors", "8",
            "--seed", "21", "--threads", threads, "--out", out,
        ]
    };
    let one = run_in(dir.path(), &args("1", "one.csv"));
    assert_eq!(code(&one), 0, "stderr: {}", stderr(&one));
    let four = run_in(dir.path(), &args("4", "four.csv"));
    assert_eq!(code(&four), 0, "stderr: {}", stderr(&four));
    let a = std::fs::read_to_string(dir.path().join("one.csv")).unwrap();
    let b = std::fs::read_to_string(dir.path().join("four.csv")).unwrap();
    assert_eq!(a, b);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let unknown_decoder = run_in(
        dir.path(),
        &["simulate", "--code", "e1", "--eps", "0.1", "--decoder", "magic"],
    );
    assert_eq!(code(&unknown_decoder), 2);
    assert!(stderr(&unknown_decoder).contains("unknown decoder"), "{}", stderr(&unknown_decoder));

    let zero_budget = run_in(
        dir.path(),
        &["simulate", "--code", "e1", "--eps", "0.1", "--min-frame-errors", "0"],
    );
    assert_eq!(code(&zero_budget), 2);

    let unknown_preset = run_in(dir.path(), &["simulate", "--code", "zz9", "--eps", "0.1"]);
    assert_eq!(code(&unknown_preset), 2);
    assert!(stderr(&unknown_preset).contains("unknown preset"), "{}", stderr(&unknown_preset));

    let unknown_flag = run_in(dir.path(), &["simulate", "--code", "e1", "--eps", "0.1", "--warp", "9"]);
    assert_eq!(code(&unknown_flag), 2);
}

#[test]
fn help_text_enumerates_flags() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["simulate", "--help"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for flag in [
        "--code", "--decoder", "--eps", "--min-frame-errors", "--max-trials",
        "--seed", "--iters", "--success-mode", "--threads", "--out", "--server",
    ] {
        assert!(text.contains(flag), "missing {flag} in:\n{text}");
    }
    let sweep = run_in(dir.path(), &["sweep", "--help"]);
    assert!(stdout(&sweep).contains("--eps-list"));
}
