use std::path::PathBuf;
use std::process::{Command, Output};

fn qal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qal"))
        .args(args)
        .env_remove("QAL_PRECISION_BITS")
        .output()
        .expect("spawn qal")
}

fn stdout(args: &[&str]) -> String {
    let o = qal(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(&stdout(args)).unwrap()
}

/// Golden cases: file name and arguments. Set `QAL_BLESS=1` to rewrite.
const GOLDEN: &[(&str, &[&str])] = &[
    ("oracle_closedness.json", &["oracle", "--seq", "gevrey(1)", "--poly", "y^2+x^4", "--question", "closedness"]),
    ("oracle_division_qa.json", &["oracle", "--seq", "loggevrey(1/2)", "--poly", "y^2+x^2", "--question", "division"]),
    ("classify_analytic.json", &["seq", "classify", "--seq", "analytic"]),
    ("omega_gevrey1.csv", &["borel", "omega", "--seq", "gevrey(1)", "--degree", "6", "--k", "7", "--csv"]),
    ("demo_gevrey1.json", &["borel", "demo", "--seq", "gevrey(1)", "--a", "1/2", "--ks", "0..39"]),
    ("divide.json", &["divide", "--dividend", "y^3 + x*y + 1", "--divisor", "y^2 - x", "--var", "y"]),
    ("hyperbolic_plus.json", &["hyperbolic", "--poly", "y^2+x"]),
    ("exponents_cusp.json", &["exponents", "--poly", "y^2+x^3"]),
    ("theta_gevrey1.csv", &["theta", "probe", "--seq", "gevrey(1)", "--orders", "0..6", "--csv"]),
];

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

#[test]
fn golden_outputs() {
    let bless = std::env::var("QAL_BLESS").is_ok();
    for (name, args) in GOLDEN {
        let got = stdout(args);
        let path = golden_dir().join(name);
        if bless {
            std::fs::write(&path, &got).unwrap();
            continue;
        }
        let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {name}"));
        assert_eq!(got, want, "{name}");
    }
}

#[test]
fn repeated_runs_are_identical() {
    for args in [
        &["exponents", "--poly", "y^2 - x^4"][..],
        &["puiseux", "--poly", "y^3 - x^2*y + x^5", "--trunc", "4"],
        &["tau", "--poly", "y^2 + x^2", "--shells", "1/8,1/16,1/32,1/64"],
    ] {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}

#[test]
fn documented_examples() {
    let v = json(&["oracle", "--seq", "gevrey(1)", "--poly", "y^2+x^4", "--question", "closedness"]);
    assert_eq!(v["decision"]["verdict"], "fails");
    assert_eq!(v["facts"]["d"], "2");
    let tags: Vec<&str> = v["decision"]["citations"].as_array().unwrap().iter().map(|c| c["tag"].as_str().unwrap()).collect();
    assert!(tags.contains(&"planar-closedness"));

    let v = json(&["seq", "classify", "--seq", "analytic"]);
    assert_eq!(v["report"]["analytic_class"]["value"], "true");
    assert_eq!(v["schema"], "qal/1");

    let csv = stdout(&["borel", "omega", "--seq", "gevrey(1)", "--degree", "6", "--k", "7", "--csv"]);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r.ends_with(",1,1")), "{csv}");

    let v = json(&["hyperbolic", "--poly", "y^2 - x^2"]);
    assert_eq!(v["report"]["verdict"], "hyperbolic");
    let v = json(&["hyperbolic", "--poly", "y^2 + x"]);
    assert_eq!(v["report"]["witness_sides"], serde_json::json!(["plus"]));
}

#[test]
fn demo_sums_are_exact() {
    let v = json(&["borel", "demo", "--seq", "gevrey(1)", "--a", "1/2", "--ks", "0..39"]);
    let sums = v["partial_sums"].as_array().unwrap();
    // 0! + 1!/2 + 2!/4 = 2
    assert_eq!(sums[2], "2");
    let p = v["crossing"].as_u64().unwrap() as usize;
    assert_eq!(sums.len(), p + 1);
}

#[test]
fn exit_codes() {
    let o = qal(&["puiseux", "--poly", "y^^2"]);
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "syntax");
    assert!(err["error"]["message"].as_str().unwrap().contains("offset 2"));

    // binary floating literals are not accepted where a rational is expected
    let o = qal(&["borel", "demo", "--seq", "gevrey(1)", "--a", "5e-1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = qal(&["borel", "demo", "--seq", "gevrey(1)", "--a", "3/2"]);
    assert_eq!(o.status.code(), Some(4));

    let unknown = ["oracle", "--seq", "loggevrey(1/2)", "--poly", "y^2+x^4", "--question", "closedness"];
    assert_eq!(qal(&unknown).status.code(), Some(0));
    let mut strict = unknown.to_vec();
    strict.push("--strict");
    assert_eq!(qal(&strict).status.code(), Some(3));
    let o = qal(&["--strict", "oracle", "--seq", "gevrey(1)", "--question", "borel-surjective"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn precision_env_is_respected() {
    let run = |bits: &str| {
        Command::new(env!("CARGO_BIN_EXE_qal"))
            .args(["theta", "probe", "--seq", "gevrey(1)", "--orders", "3"])
            .env("QAL_PRECISION_BITS", bits)
            .output()
            .unwrap()
    };
    let a: serde_json::Value = serde_json::from_slice(&run("64").stdout).unwrap();
    let b: serde_json::Value = serde_json::from_slice(&run("512").stdout).unwrap();
    assert_eq!(a["rows"][0]["precision"], 64);
    assert_eq!(b["rows"][0]["precision"], 512);
}
