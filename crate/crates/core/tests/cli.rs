use std::process::Command;

fn polyint(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_polyint")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn documented_examples() {
    let (code, out, _) = polyint(&["integrate", "log(x)/(x-1)"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "dilog_term(d=1, h=x, k=1)");
    let (code, out, _) = polyint(&["derive", "log(x)^2"]);
    assert_eq!((code, out.trim()), (0, "2*log(x)/x"));
    let (code, out, _) = polyint(&["integrate", "exp(x^2)"]);
    assert_eq!(code, 1);
    assert!(out.contains("no integral found"));
}

#[test]
fn errors_go_to_stderr() {
    let (code, out, err) = polyint(&["integrate", "log("]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("offset 4"));
    let (code, _, err) = polyint(&["integrate", "x", "--unknown"]);
    assert_eq!(code, 2);
    assert!(err.contains("Usage"));
    let (code, _, err) = polyint(&["integrate", "log(2)"]);
    assert_eq!(code, 2);
    assert!(err.contains("domain error"));
}

#[test]
fn json_and_variable() {
    let (code, out, _) = polyint(&["integrate", "1/(t^2-1)", "--var", "t", "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], "polyint-1");
    assert_eq!(v["status"], "Integrated");
    let mut args: Vec<(String, String)> = v["logs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|l| (l["coeff"].as_str().unwrap().to_string(), l["arg"].as_str().unwrap().to_string()))
        .collect();
    args.sort();
    assert_eq!(args, vec![("-1/2".to_string(), "t + 1".to_string()), ("1/2".to_string(), "t - 1".to_string())]);
    let (code, out, _) = polyint(&["integrate", "exp(x^2)", "--json"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["status"], "NoIntegralFound");
}

#[test]
fn descend_and_verify() {
    let claim = "-Li(1, x) - I(2, x*log(x)) - I(2, 1 - x*log(x)) - log(x*log(x))*log(1 - x*log(x))";
    let (code, out, _) = polyint(&["verify", "1/(x-1)", "--claim", claim]);
    assert_eq!(code, 0, "{out}");
    let (code, out, _) = polyint(&["descend", "1/(x-1)", "--claim", claim, "--json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    for t in v["dilog_terms"].as_array().unwrap() {
        assert!(!t["h"].as_str().unwrap().contains("log"));
    }
}
