use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn jobs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../jobs")
}

fn run(command: &str, job: &Path, extra: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_jensen-lab"))
        .arg(command)
        .arg("--job")
        .arg(job)
        .args(extra)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}); stderr: {}", String::from_utf8_lossy(&out.stderr)))
}

fn command_of(job: &Path) -> String {
    let v: Value = serde_json::from_str(&fs::read_to_string(job).unwrap()).unwrap();
    v["command"].as_str().unwrap().to_string()
}

/// The exit status a report should produce, read off its verdict fields.
fn expected_exit(report: &Value) -> i32 {
    let v = &report["result"]["value"];
    match report["result"]["kind"].as_str().unwrap() {
        "sp_certificate" => i32::from(!v["is_sp"].as_bool().unwrap()),
        "shape" => i32::from(!v["satisfied"].as_bool().unwrap()),
        "jensen" => match v["verdict"].as_str().unwrap() {
            "holds" => 0,
            "hypothesis_failed" => 1,
            "violated" => 2,
            other => panic!("verdict {other}"),
        },
        "fuzz" if v["violated"].as_u64().unwrap() > 0 => 2,
        _ => 0,
    }
}

#[test]
fn corpus_exit_codes_follow_the_report() {
    let expected = [
        ("certify_example1.json", 0),
        ("certify_example2_density.json", 0),
        ("certify_not_sp.json", 1),
        ("fuzz_thm3.json", 0),
        ("jensen_cor1_cubic.json", 0),
        ("jensen_cor1_range_fails.json", 1),
        ("jensen_cor1_sharpness_witness.json", 2),
        ("jensen_cor2_cubic.json", 0),
        ("jensen_cor3_tan.json", 0),
        ("jensen_thm1_tan_uniform.json", 0),
        ("jensen_thm3_condition_fails.json", 1),
        ("jensen_thm3_tan.json", 0),
        ("mine_cor1.json", 0),
        ("moments_example3_product.json", 0),
        ("optimize_tan.json", 0),
        ("shape_cubic_left_almost_convex.json", 0),
        ("shape_cubic_not_convex.json", 1),
        ("shape_tan_convex.json", 0),
    ];
    let mut on_disk: Vec<_> = fs::read_dir(jobs_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    on_disk.sort();
    let listed: Vec<_> = expected.iter().map(|(n, _)| n.to_string()).collect();
    assert_eq!(on_disk, listed, "every corpus job needs an expected exit code");

    for (name, code) in expected {
        let path = jobs_dir().join(name);
        let out = run(&command_of(&path), &path, &[]);
        let status = out.status.code().unwrap();
        let r = report(&out);
        assert_eq!(status, code, "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(status, expected_exit(&r), "{name}");
    }
}

#[test]
fn invalid_jobs_exit_3_with_a_diagnostic() {
    let cases = [
        ("malformed.json", "byte 24"),
        ("missing_seed.json", "params.seed"),
        ("misspelled_param.json", "params.tolerance"),
        ("tan_across_pole.json", "function"),
        ("unknown_theorem.json", "thm42"),
    ];
    for (name, needle) in cases {
        let out = run("moments", &jobs_dir().join("invalid").join(name), &[]);
        assert_eq!(out.status.code(), Some(3), "{name}");
        assert!(out.stdout.is_empty(), "{name}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(needle), "{name}: {err}");
    }
}

#[test]
fn thm3_tan_gap() {
    let out = run("check-jensen", &jobs_dir().join("jensen_thm3_tan.json"), &[]);
    let r = report(&out);
    let gap = r["result"]["value"]["gap"].as_f64().unwrap();
    assert!((gap - 0.36470235018270103).abs() < 1e-4, "{gap}");
}

#[test]
fn not_sp_reports_a_witness() {
    let out = run("certify-sp", &jobs_dir().join("certify_not_sp.json"), &[]);
    assert_eq!(out.status.code(), Some(1));
    let v = &report(&out)["result"]["value"];
    assert_eq!(v["is_sp"], false);
    assert!(v["worst_left"]["value"].as_f64().unwrap() < 0.0, "{v}");
}

#[test]
fn command_must_match_the_job() {
    let out = run("moments", &jobs_dir().join("certify_example1.json"), &[]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("certify-sp"));
}

#[test]
fn unknown_command_and_missing_file_exit_3() {
    let out = run("bogus", &jobs_dir().join("certify_example1.json"), &[]);
    assert_eq!(out.status.code(), Some(3));
    let out = run("moments", &jobs_dir().join("no_such_job.json"), &[]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn non_convergence_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let job = dir.path().join("tight.json");
    fs::write(
        &job,
        r#"{"command":"certify-sp","measure":{"type":"density","interval":[0,1],
           "density":{"family":"polynomial","params":{"coeffs":[1,1]},"domain":[0,1]}},
           "params":{"quad_tol":1e-300,"refine_limit":1,"nodes":1}}"#,
    )
    .unwrap();
    let out = run("certify-sp", &job, &["--panels", "1"]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
}

#[test]
fn csv_profile_curve() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("profile.csv");
    let out = run(
        "certify-sp",
        &jobs_dir().join("certify_example2_density.json"),
        &["--csv", csv.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,left,right"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert!(rows.len() > 100);
    // Left profile of x^2 - 1/6 on [-1, 1] is t^4/12 - t^2/12 + t/6 + 1/6.
    for r in &rows {
        let t = r[0];
        let closed = t.powi(4) / 12.0 - t * t / 12.0 + t / 6.0 + 1.0 / 6.0;
        assert!((r[1] - closed).abs() < 1e-9, "t={t}: {} vs {closed}", r[1]);
    }
}

#[test]
fn csv_margin_curve_for_shape_checks() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("margin.csv");
    let out = run(
        "check-shape",
        &jobs_dir().join("shape_cubic_not_convex.json"),
        &["--csv", csv.to_str().unwrap(), "--grid", "101"],
    );
    assert_eq!(out.status.code(), Some(1));
    let text = fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("x,margin\n"));
    assert!(text.lines().count() > 2);
}

#[test]
fn csv_is_refused_for_other_commands() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("x.csv");
    let out = run(
        "check-jensen",
        &jobs_dir().join("jensen_cor3_tan.json"),
        &["--csv", csv.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn mined_witness_replays_as_a_violation() {
    let dir = tempfile::tempdir().unwrap();
    let witness = dir.path().join("witness.json");
    let out = run(
        "mine",
        &jobs_dir().join("mine_cor1.json"),
        &["--budget", "20000", "--witness", witness.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    let mined = report(&out);
    assert_eq!(mined["result"]["value"]["found"], true);
    assert_eq!(mined["job_echo"]["params"]["budget"], 20000);

    let replay = run("check-jensen", &witness, &[]);
    assert_eq!(replay.status.code(), Some(2));
    let r = report(&replay);
    assert_eq!(r["result"]["value"]["gap"], mined["result"]["value"]["observed_gap"]);
}

#[test]
fn seed_flag_overrides_the_job_and_output_is_deterministic() {
    let job = jobs_dir().join("optimize_tan.json");
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("runtime_ms");
        v
    };
    let a = strip(report(&run("optimize-example", &job, &["--seed", "3", "--budget", "5000"])));
    let b = strip(report(&run("optimize-example", &job, &["--seed", "3", "--budget", "5000"])));
    assert_eq!(a, b);
    assert_eq!(a["result"]["value"]["seed"], 3);
    assert_eq!(a["result"]["value"]["total_evaluations"], 5000);
}

#[test]
fn floats_are_printed_with_17_significant_digits() {
    let out = run("check-jensen", &jobs_dir().join("jensen_cor3_tan.json"), &[]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("\"lhs\"")).unwrap();
    let number = line.split(':').nth(1).unwrap().trim().trim_end_matches(',');
    let mantissa = number.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17, "{number}");
}
