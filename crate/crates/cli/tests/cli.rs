use std::path::PathBuf;
use std::process::Command;

fn qjet(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qjet")).args(args).output().expect("qjet runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares with the stored file; `QJET_UPDATE_GOLDEN=1` rewrites it.
fn golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("QJET_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, expected, "output differs from {}", path.display());
}

fn both_formats(name: &str, args: &[&str], code: i32) {
    let (c, human, err) = qjet(args);
    assert_eq!(c, code, "{args:?}: {err}");
    golden(&format!("{name}.txt"), &human);
    let mut json_args = args.to_vec();
    json_args.push("--json");
    let (c, json, _) = qjet(&json_args);
    assert_eq!(c, code);
    golden(&format!("{name}.json"), &json);
}

#[test]
fn thm1_sl3() {
    both_formats("thm1_a_3", &["verify", "thm1", "--variant", "a", "--n", "3", "--order", "30"], 0);
}

#[test]
fn quiver_rank_two_lists_both_representations() {
    both_formats("quiver_r", &["verify", "quiver", "--rank", "2", "--orientation", "R", "--kmax", "1", "--order", "10"], 0);
    let (_, out, _) = qjet(&["verify", "quiver", "--rank", "2", "--orientation", "R", "--kmax", "1", "--order", "10"]);
    assert!(out.contains("k=[1, 1]: [1,2]^1 codim 0"));
    assert!(out.contains("k=[1, 1]: [1,1]^1 [2,2]^1 codim 1"));
}

#[test]
fn pentagon_control_fails_with_exit_one() {
    both_formats("pentagon_control", &["verify", "pentagon", "--xdeg", "4", "--qorder", "10", "--drop-middle"], 1);
}

#[test]
fn difference_table() {
    both_formats("expand_diff_4", &["forms", "expand-diff", "--n", "4", "--kind", "Bprime"], 1);
    let (c, out, _) = qjet(&["forms", "expand-diff", "--n", "3", "--kind", "Bprime"]);
    assert_eq!(c, 0, "{out}");
}

#[test]
fn jets_hilbert_notes_reading() {
    both_formats("hilbert_d4", &["jets", "hilbert", "--preset", "d4-D", "--weight", "3"], 0);
}

#[test]
fn b2_and_d4() {
    both_formats("b2_product", &["verify", "b2-product", "--order", "30"], 0);
    both_formats("d4_primed", &["verify", "d4", "--order", "12", "--primed"], 0);
}

#[test]
fn budget_and_usage_errors_exit_two() {
    let (c, out, err) = qjet(&["verify", "thm1", "--variant", "a", "--n", "4", "--order", "25", "--budget", "10"]);
    assert_eq!(c, 2);
    assert!(out.is_empty());
    assert!(err.contains("budget exceeded"), "{err}");
    let (c, _, err) = qjet(&["jets", "hilbert", "--preset", "sl3-A", "--weight", "8", "--budget", "5"]);
    assert_eq!(c, 2, "{err}");
    let (c, _, _) = qjet(&["verify", "quiver", "--rank", "3", "--orientation", "R", "--kmax", "1", "--order", "5"]);
    assert_eq!(c, 2);
    let (c, _, _) = qjet(&["verify", "ordered-product", "--type", "e8", "--xdeg", "3", "--qorder", "5"]);
    assert_eq!(c, 2);
    let (c, _, _) = qjet(&["verify", "thm1", "--n", "3"]);
    assert_eq!(c, 2);
}

#[test]
fn reports_do_not_depend_on_threads() {
    let args = ["verify", "thm1", "--variant", "b", "--n", "4", "--order", "20", "--charges", "--json"];
    let (_, one, _) = qjet(&[&args[..], &["--threads", "1"]].concat());
    let (_, four, _) = qjet(&[&args[..], &["--threads", "4"]].concat());
    let (_, again, _) = qjet(&args);
    assert_eq!(one, four);
    assert_eq!(one, again);
}

#[test]
fn timing_is_opt_in() {
    let (_, plain, _) = qjet(&["verify", "pentagon", "--xdeg", "3", "--qorder", "6", "--json"]);
    let (_, timed, _) = qjet(&["verify", "pentagon", "--xdeg", "3", "--qorder", "6", "--json", "--timing"]);
    assert!(!plain.contains("wall_time_ms"));
    assert!(timed.contains("wall_time_ms"));
}

#[test]
fn suite_runs_in_file_order() {
    let dir = std::env::temp_dir().join(format!("qjet-suite-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("suite.toml");
    std::fs::write(
        &path,
        r#"
[[run]]
args = ["verify", "pentagon", "--xdeg", "3", "--qorder", "6"]

[[run]]
args = ["verify", "b2", "--order", "20"]
"#,
    )
    .unwrap();
    let (c, out, err) = qjet(&["suite", path.to_str().unwrap(), "--json"]);
    assert_eq!(c, 0, "{err}");
    let reports: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(reports[0]["command"], "verify pentagon");
    assert_eq!(reports[1]["command"], "verify b2");

    std::fs::write(&path, "[[run]]\nargs = [\"verify\", \"pentagon\", \"--xdeg\", \"3\", \"--qorder\", \"6\", \"--drop-middle\"]\n").unwrap();
    assert_eq!(qjet(&["suite", path.to_str().unwrap()]).0, 1);
    std::fs::write(&path, "[[run]]\nargs = [\"verify\", \"nonsense\"]\n").unwrap();
    assert_eq!(qjet(&["suite", path.to_str().unwrap()]).0, 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn shipped_suite_passes() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../suites/standard.toml");
    let (c, out, err) = qjet(&["suite", path.to_str().unwrap()]);
    assert_eq!(c, 0, "{out}{err}");
}
