use std::process::Command;

use relfix::commands::{resolve_seed, EXIT_BUG, EXIT_HYPOTHESIS, EXIT_INPUT, EXIT_OK};
use serde_json::Value;

fn relfix(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_relfix")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(name: &str, text: &str) -> String {
    let dir = std::env::temp_dir().join(format!("relfix-cli-tests-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn check_exit_codes() {
    assert_eq!(relfix(&["check", "example_5_2", "--theorem", "th1"]).0, EXIT_OK);
    // the whole carrier is declared not R-complete
    assert_eq!(relfix(&["check", "example_5_1", "--theorem", "cor0"]).0, EXIT_HYPOTHESIS);
    let (code, _, err) = relfix(&["check", "example_5_2", "--theorem", "cor8"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("cor8 cannot be checked"), "{err}");
    assert_eq!(relfix(&["check", "/nonexistent.json"]).0, EXIT_INPUT);
}

#[test]
fn json_report_has_the_documented_shape() {
    let (code, out, _) = relfix(&["--format", "json", "check", "example_5_1", "--theorem", "th4"]);
    assert_eq!(code, EXIT_OK);
    let v: Value = serde_json::from_str(&out).unwrap();
    for key in ["instance", "theorem", "hypotheses", "conclusion", "oracle_agreement"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert_eq!(v["conclusion"]["common_fixed_points"], serde_json::json!(["0"]));
    assert!(v["conclusion"]["trace"].is_object());
    let t = v["hypotheses"].as_array().unwrap().iter().find(|h| h["label"] == "(t)").unwrap();
    assert_eq!(t["verdict"], "holds");
}

#[test]
fn reports_are_deterministic() {
    let a = relfix(&["--format", "json", "report", "example_5_2"]);
    let b = relfix(&["--format", "json", "report", "example_5_2"]);
    assert_eq!(a, b);
    assert_eq!(a.0, EXIT_OK);
}

const TWO_POINTS: &str = r#"{
  "carrier": { "points": ["0", "1"] },
  "metric": "absolute-difference",
  "relation": { "pairs": [["0", "0"]] },
  "f": { "constant": "0" },
  "g": { "values": ["1", "0"] },
  "condition": { "variant": "B", "phi": { "linear": "1/2" } },
  "theorem": "cor10"
}"#;

#[test]
fn finite_file_commands() {
    let path = write("two.json", TWO_POINTS);
    let (code, out, _) = relfix(&["check", &path]);
    assert_eq!(code, EXIT_HYPOTHESIS, "{out}");
    assert!(out.contains("(wc)") && out.contains("FAILS at 1"), "{out}");
    let (code, out, _) = relfix(&["oracle", &path]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("C(f,g) = {1}"), "{out}");
    let (code, out, _) = relfix(&["solve", &path, "--start", "1"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("coincidence at 1"), "{out}");
    assert_eq!(relfix(&["solve", &path, "--start", "7"]).0, EXIT_INPUT);
    assert_eq!(relfix(&["oracle", "example_5_2"]).0, EXIT_INPUT);
}

#[test]
fn solve_on_the_first_example() {
    let (code, out, _) = relfix(&["solve", "example_5_1", "--start", "3", "--eps", "1/1000"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("gw0 = 1") && out.contains("coincidence at 0"), "{out}");
    assert_eq!(relfix(&["solve", "example_5_1", "--eps", "0.1"]).0, EXIT_INPUT);
}

#[test]
fn fuzz_seed_resolution() {
    assert_eq!(resolve_seed(Some(5), Some("9")), Ok(5));
    assert_eq!(resolve_seed(None, Some("9")), Ok(9));
    assert_eq!(resolve_seed(None, None), Ok(0));
    assert!(resolve_seed(None, Some("x")).is_err());
    let run = |env: Option<&str>, args: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_relfix"));
        c.args(["--format", "json", "fuzz", "--seeds", "20", "--size", "4"]).args(args);
        match env {
            Some(v) => c.env("RELFIX_SEED", v),
            None => c.env_remove("RELFIX_SEED"),
        };
        let out = c.output().unwrap();
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        (out.status.code().unwrap(), v["seeds"]["start"].as_u64().unwrap())
    };
    assert_eq!(run(Some("40"), &[]), (EXIT_OK, 40));
    assert_eq!(run(Some("40"), &["--seed", "3"]), (EXIT_OK, 3));
    assert_eq!(run(None, &[]), (EXIT_OK, 0));
    assert_ne!(EXIT_BUG, EXIT_OK);
}
