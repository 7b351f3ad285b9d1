use kmsgraph::cli::{run, EXIT_INVALID, EXIT_OK, EXIT_PARSE, EXIT_UNSUPPORTED};
use kmsgraph::report::KmsReport;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("kmsgraph").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("kmsgraph-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn validate_builtins() {
    for name in kmsgraph::builtins::BUILTIN_NAMES {
        let (code, out, _) = invoke(&["validate", name]);
        assert_eq!(code, EXIT_OK, "{out}");
    }
}

#[test]
fn non_commuting_input_is_invalid() {
    let path = temp_file(
        "bad.json",
        r#"{"vertices":["a","b"],"blue":[[0,1],[0,0]],"red":[[1,0],[0,0]]}"#,
    );
    let (code, out, _) = invoke(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_INVALID);
    assert!(out.contains("(A1*A2)(a,b)"), "{out}");
    let (code, _, err) = invoke(&["report", path.to_str().unwrap(), "--x", "1/2,1/2"]);
    assert_eq!(code, EXIT_INVALID, "{err}");
}

#[test]
fn malformed_json_is_a_parse_error() {
    let path = temp_file("broken.json", "{\"vertices\": [\"a\"],\n \"blue\": [[1]\n");
    let (code, _, err) = invoke(&["validate", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_PARSE);
    assert!(err.contains("broken.json"), "{err}");
}

#[test]
fn unknown_flags_and_inputs_are_parse_errors() {
    assert_eq!(invoke(&["report", "paper-4vertex"]).0, EXIT_PARSE);
    assert_eq!(invoke(&["report", "paper-4vertex", "--x", "1/8"]).0, EXIT_PARSE);
    assert_eq!(invoke(&["validate", "/nonexistent/graph.json"]).0, EXIT_PARSE);
    assert_eq!(
        invoke(&["report", "paper-4vertex", "--x", "1/8,1/13", "--y-method", "nope"]).0,
        EXIT_PARSE
    );
}

#[test]
fn critical_cycle_is_unsupported() {
    let path = temp_file(
        "cycle.json",
        r#"{"vertices":["a","b"],"blue":[[0,1],[1,0]],"red":[[0,0],[0,0]]}"#,
    );
    let (code, _, err) = invoke(&["report", path.to_str().unwrap(), "--x", "1,1/2"]);
    assert_eq!(code, EXIT_UNSUPPORTED, "{err}");
}

#[test]
fn json_report_round_trips() {
    let (code, out, err) = invoke(&[
        "report",
        "paper-4vertex",
        "--r",
        "ln8,ln13",
        "--beta",
        "1",
        "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let parsed: KmsReport = serde_json::from_str(&out).unwrap();
    let again = serde_json::to_string_pretty(&parsed).unwrap();
    assert_eq!(again.trim_end(), out.trim_end());
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    let text = value.to_string();
    assert!(text.contains("\"1/8\""), "{text}");
    assert!(text.contains("\"1/24\""));
}

#[test]
fn series_method_is_selectable() {
    let (code, out, err) = invoke(&[
        "report",
        "paper-2vertex",
        "--x",
        "1/8,1/12",
        "--y-method",
        "series",
        "--cap",
        "40",
        "--format",
        "json",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let value: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(value["subinvariance"]["method"], "series");
}

#[test]
fn sweep_csv_has_one_row_per_sample() {
    let (code, out, err) = invoke(&[
        "sweep",
        "paper-4vertex",
        "--r",
        "ln8,ln13",
        "--beta-range",
        "1.5:0.3:0.1",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let mut lines = out.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("beta"), "{header}");
    let rows: Vec<&str> = lines.filter(|l| !l.is_empty()).collect();
    // thirteen grid points plus the critical value ln6/ln13, which is off the grid
    assert!(rows.len() >= 14, "{out}");
    let columns = header.split(',').count();
    assert!(rows.iter().all(|r| r.split(',').count() == columns), "{out}");
}

#[test]
fn identities_on_builtins_pass() {
    for name in ["paper-2vertex", "paper-3vertex", "paper-4vertex"] {
        let (code, out, _) = invoke(&["identities", name]);
        assert_eq!(code, EXIT_OK, "{out}");
        assert!(!out.contains("FAIL"), "{out}");
    }
}

#[test]
fn identities_on_a_non_family_are_skipped() {
    let path = temp_file(
        "single.json",
        r#"{"vertices":["a"],"blue":[[2]],"red":[[3]]}"#,
    );
    let (code, out, _) = invoke(&["identities", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("not a recognised family"));
}
