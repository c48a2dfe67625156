use std::process::Command;

fn fblab(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fblab")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn zeros_json() {
    let (code, out, _) = fblab(&["zeros", "--nu", "0.5", "--count", "3", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let zs = v["zeros"].as_array().unwrap();
    assert_eq!(zs.len(), 3);
    assert!((zs[2].as_f64().unwrap() - 3.0 * std::f64::consts::PI).abs() < 1e-13);
}

#[test]
fn output_is_deterministic() {
    let args = ["heat", "--nu", "0.3", "--t", "0.05", "--grid", "8", "--format", "csv"];
    let (c1, a, _) = fblab(&args);
    let (c2, b, _) = fblab(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    assert!(a.starts_with("# fblab-csv v1 heat"));
}

#[test]
fn invalid_input_exits_2() {
    let (code, _, err) = fblab(&["zeros", "--nu", "-3", "--count", "3"]);
    assert_eq!(code, 2, "{err}");
    let (code, _, _) = fblab(&["eval", "--nu", "0.5", "--n", "1", "--x", "2.0"]);
    assert_eq!(code, 2);
}

#[test]
fn verify_single_suite_passes() {
    let (code, out, err) = fblab(&["verify", "--suite", "calogero", "--nu", "0.5"]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(out.to_lowercase().contains("pass"));
}

#[test]
fn unknown_suite_is_an_error() {
    let (code, _, _) = fblab(&["verify", "--suite", "nonsense"]);
    assert_eq!(code, 2);
}
