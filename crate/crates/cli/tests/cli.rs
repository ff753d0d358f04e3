use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lambda_forge::lambda::contexts::ZeroLambda;
use lambda_forge::lambda::{verify_axioms, Mode, Report, VerifyOptions};
use lambda_forge_cli::{exit_status, run_from_args, EXIT_FAILED, EXIT_OK, EXIT_USAGE};

fn bin(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lambda-forge"))
        .args(args)
        .env("LAMBDA_FORGE_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn univpoly_prints_known_polynomials() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(dir.path(), &["univpoly", "pn", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o),
        "P_2 = s1^2*sigma2 + s2*sigma1^2 - 2*s2*sigma2\n"
    );
    let o = bin(dir.path(), &["univpoly", "pnm", "--n", "1", "--m", "3"]);
    assert_eq!(stdout(&o), "P_{1,3} = s3\n");
    let o = bin(dir.path(), &["univpoly", "nu", "--k", "2"]);
    assert_eq!(stdout(&o), "nu_2 = s1^2 - 2*s2\n");
    let o = bin(
        dir.path(),
        &["univpoly", "pnm", "--max-n", "2", "--max-m", "2"],
    );
    assert_eq!(stdout(&o).lines().count(), 4);
}

#[test]
fn verify_lambda_on_torus4_passes_with_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(
        dir.path(),
        &[
            "verify",
            "lambda",
            "--model",
            "torus4",
            "--samples",
            "50",
            "--seed",
            "7",
            "--format",
            "json",
        ],
    );
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r: Report = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.seed, 7);
    assert_eq!(r.truncation, 6);
    assert!(r.all_pass());
    assert!(r.checks.len() > 50);
}

#[test]
fn verify_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    for suite in [
        "pre-lambda",
        "lambda",
        "adams",
        "diffk",
        "gamma",
        "equivariant",
        "splitting",
        "witt",
    ] {
        let args = [
            "verify",
            suite,
            "--model",
            "heis3",
            "--samples",
            "3",
            "--seed",
            "11",
            "--trunc",
            "4",
            "--format",
            "json",
        ];
        let a = bin(dir.path(), &args);
        let b = bin(dir.path(), &args);
        assert_eq!(
            a.status.code(),
            Some(0),
            "{suite}: {}",
            String::from_utf8_lossy(&a.stderr)
        );
        assert_eq!(a.stdout, b.stdout, "{suite}");
    }
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["frobnicate"],
        vec!["verify", "lambda", "--model", "torus4", "--bogus"],
        vec!["verify", "lambda", "--model", "no-such-model"],
        vec!["verify", "gamma"],
        vec!["verify", "lambda", "--model", "torus4", "--samples", "0"],
        vec!["univpoly", "pn", "--n", "0"],
    ] {
        let o = bin(dir.path(), &args);
        assert_eq!(o.status.code(), Some(EXIT_USAGE), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn planted_failure_maps_to_exit_one() {
    let bad = verify_axioms(&ZeroLambda, &VerifyOptions::new(Mode::PreLambda, 5, 1, 4));
    assert!(!bad.all_pass());
    assert!(bad
        .failures()
        .any(|c| c.axiom == "lambda^1(x) = x" && c.witness.is_some()));
    let good = Report::new("lambda", "none", 0, 4);
    assert_eq!(exit_status(std::slice::from_ref(&good)), EXIT_OK);
    assert_eq!(exit_status(&[good, bad]), EXIT_FAILED);
}

#[test]
fn model_commands() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(dir.path(), &["model", "list"]);
    assert!(stdout(&o).lines().any(|l| l.starts_with("heis3")));
    let o = bin(
        dir.path(),
        &["model", "validate", "--model", "s2", "--format", "json"],
    );
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["model"]["dimensions"], serde_json::json!([1, 0, 1, 1, 1]));

    let good = dir.path().join("good.json");
    fs::write(
        &good,
        r#"{"name": "s2", "top_degree": 4, "generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 3}],
            "differential": [{"of": "y", "value": "x^2"}], "group": {"free_rank": 0, "torsion": [2]}}"#,
    )
    .unwrap();
    let o = bin(
        dir.path(),
        &["model", "validate", "--spec", good.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(0));
    // the model file names Z/2, so equivariant runs over that group only
    let o = bin(
        dir.path(),
        &[
            "verify",
            "equivariant",
            "--spec",
            good.to_str().unwrap(),
            "--samples",
            "2",
            "--trunc",
            "3",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("Z/2"));

    // d(y) = x has the wrong degree
    let bad = dir.path().join("bad.json");
    fs::write(
        &bad,
        r#"{"name": "bad", "top_degree": 4, "generators": [{"name": "x", "degree": 2}, {"name": "y", "degree": 3}],
            "differential": [{"of": "y", "value": "x"}]}"#,
    )
    .unwrap();
    let o = bin(
        dir.path(),
        &["model", "validate", "--spec", bad.to_str().unwrap()],
    );
    assert_eq!(o.status.code(), Some(EXIT_USAGE));
}

#[test]
fn cache_roundtrip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let first = bin(dir.path(), &["univpoly", "pnm", "--n", "2", "--m", "2"]);
    let path = dir.path().join("Pnm/2/2.json");
    assert!(path.exists());
    let second = bin(dir.path(), &["univpoly", "pnm", "--n", "2", "--m", "2"]);
    assert_eq!(first.stdout, second.stdout);

    fs::write(&path, "garbage").unwrap();
    let o = bin(dir.path(), &["univpoly", "pnm", "--n", "2", "--m", "2"]);
    let text = stdout(&o);
    assert!(text.starts_with(&stdout(&first)));
    assert!(text.contains("note: cache entry Pnm/2/2 was unusable"));
    let again = bin(dir.path(), &["univpoly", "pnm", "--n", "2", "--m", "2"]);
    assert_eq!(again.stdout, first.stdout);

    let o = bin(dir.path(), &["cache", "stats", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["Pnm"], 1);
    let o = bin(dir.path(), &["cache", "clear"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(!path.exists());
}

#[test]
fn cache_flag_overrides_environment() {
    let env_dir = tempfile::tempdir().unwrap();
    let flag_dir = tempfile::tempdir().unwrap();
    let o = bin(
        env_dir.path(),
        &[
            "univpoly",
            "pn",
            "--n",
            "1",
            "--cache",
            flag_dir.path().to_str().unwrap(),
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(flag_dir.path().join("Pn/1.json").exists());
    assert!(!env_dir.path().join("Pn/1.json").exists());
}

#[test]
fn in_process_dispatch_matches_binary() {
    let dir = tempfile::tempdir().unwrap();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let cache = dir.path().to_str().unwrap();
    let code = run_from_args(
        [
            "lambda-forge",
            "--cache",
            cache,
            "univpoly",
            "pn",
            "--n",
            "2",
        ],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert_eq!(
        String::from_utf8(out).unwrap(),
        stdout(&bin(dir.path(), &["univpoly", "pn", "--n", "2"]))
    );
}
