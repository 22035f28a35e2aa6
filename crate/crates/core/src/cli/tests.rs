use super::*;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("mmf").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn validate_shipped() {
    let (code, out, _) = call(&["validate"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("dataset OK"));
}

#[test]
fn infer_d2_u() {
    let (code, out, err) = call(&["infer", "--relation", "c u + h_1^2 e", "--unknown", "u", "--page", "2"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.starts_with("d_2(u) = h_1^2 c\n"), "{out}");
}

#[test]
fn usage_and_load_errors() {
    assert_eq!(call(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(call(&["infer", "--relation", "h_9", "--unknown", "u", "--page", "2"]).0, EXIT_USAGE);
    assert_eq!(call(&["validate", "/nonexistent/data.json"]).0, EXIT_LOAD);
    assert_eq!(call(&["forced", "--page", "7"]).0, EXIT_USAGE);
}

#[test]
fn json_format() {
    let (code, out, _) = call(&["--format", "json", "homotopy", "--stem", "55"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["families"][0]["module"], "M2/tau^4");
}

#[test]
fn chart_stem_zero() {
    let (code, out, _) = call(&["chart", "--page", "inf", "--max-stem", "0", "--max-filtration", "4"]);
    assert_eq!(code, 0);
    assert_eq!(out.matches("<circle").count(), 5);
    let (_, again, _) = call(&["chart", "--page", "inf", "--max-stem", "0", "--max-filtration", "4"]);
    assert_eq!(out, again);
}
