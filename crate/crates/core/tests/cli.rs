use serde_json::Value;
use std::process::{Command, Output};

fn dawk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dawk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn eval_central_word() {
    let o = dawk(&["eval", "--type", "A2~1", "--word", "s01 s02 s03 s1 s2 s1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let nf = &v["checks"][0]["witness"]["normalForm"];
    assert_eq!(nf["c"], "1/1");
    assert!(nf["mu"].as_array().unwrap().iter().all(|x| x == "0/1"));
    assert!(nf["beta"].as_array().unwrap().iter().all(|x| x == "0/1"));
    assert_eq!(v["schema"], "dawk-report/1");
    assert!(String::from_utf8_lossy(&o.stderr).contains("eval [A2~1]"));
}

#[test]
fn eval_empty_word_is_identity() {
    let v = json(&dawk(&["eval", "--type", "A2~1", "--word", ""]));
    assert_eq!(v["checks"][0]["witness"]["isIdentity"], true);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(
        dawk(&["verify", "--type", "A2~1", "--kind", "daw"])
            .status
            .code(),
        Some(0)
    );
    // the laces-4 well-braid relation does not hold for A2~2
    let o = dawk(&["verify", "--type", "A2~2", "--kind", "daw"]);
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["status"] == "fail" && c.get("witness").is_some()));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["verify", "--type", "X9~1", "--kind", "daw"],
        vec!["eval", "--type", "A2~1", "--word", "s7"],
        vec!["verify", "--type", "A2~1", "--kind", "nonsense"],
        vec!["present", "--type", "A1~1", "--kind", "daw"],
        vec!["auto", "--type", "A2~1", "--b3-word", "a c"],
        vec!["auto", "--type", "A2~1", "--sl2z", "1,2,3,4"],
        vec!["paper-suite"],
        vec!["frobnicate"],
    ] {
        assert_eq!(dawk(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn present_then_verify_from_file() {
    let dir = std::env::temp_dir().join(format!("dawk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("a4.txt");
    let o = dawk(&[
        "present",
        "--type",
        "A4~2",
        "--kind",
        "triple",
        "--out",
        file.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&file).unwrap();
    assert!(text.contains("ellbraid(T01,T02): T01 T1^-1 T02 T1 = T1^-1 T02 T1 T01"));
    let o = dawk(&["verify", "--presentation", file.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let o = dawk(&[
        "prove",
        "--presentation",
        file.to_str().unwrap(),
        "--lhs",
        "T1 T01 T02 T1 T02",
        "--rhs",
        "T02 T1 T01 T02 T1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["checks"][0]["status"], "pass");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn present_json_mirror() {
    let v = json(&dawk(&[
        "present", "--type", "A2~1", "--kind", "daw", "--json",
    ]));
    assert_eq!(v["kind"], "daw");
    assert_eq!(v["generators"].as_array().unwrap().len(), 5);
}

#[test]
fn prove_reports_unknown_on_budget_exhaustion() {
    let o = dawk(&[
        "prove",
        "--type",
        "A2~1",
        "--kind",
        "affine-artin",
        "--lhs",
        "T1",
        "--rhs",
        "T2",
        "--max-nodes",
        "200",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["checks"][0]["status"], "unknown");
}

#[test]
fn prove_chain_regenerates_the_shipped_trace() {
    let dir = std::env::temp_dir().join(format!("dawk-chain-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("ee.trace.jsonl");
    let chain = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/derivations/ee.chain");
    let o = dawk(&[
        "prove",
        "--chain",
        chain,
        "--trace-out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let shipped = include_str!("../fixtures/derivations/ee.trace.jsonl");
    assert_eq!(std::fs::read_to_string(&out).unwrap(), shipped);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn auto_checks() {
    assert_eq!(
        dawk(&[
            "auto",
            "--type",
            "A4~2",
            "--b3-word",
            "a b a^-1",
            "--check",
            "descent"
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(
        dawk(&["auto", "--type", "A4~2", "--check", "dual"])
            .status
            .code(),
        Some(0)
    );
    // conjugation by w0 moves the finite generators when w0 != -1
    assert_eq!(
        dawk(&["auto", "--type", "A2~1", "--check", "center"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        dawk(&["auto", "--type", "D4~1", "--check", "center"])
            .status
            .code(),
        Some(0)
    );
    let v = json(&dawk(&[
        "auto", "--type", "A2~1", "--sl2z", "1,1,0,1", "--check", "dual",
    ]));
    assert_eq!(v["checks"][0]["witness"]["s01"], "s02");
}

#[test]
fn catalog_lists_types() {
    let o = dawk(&["catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let entry = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == "A4~2/entry")
        .unwrap();
    assert_eq!(entry["witness"]["l0"], 2);
}

#[test]
fn reports_are_deterministic() {
    let args = ["paper-suite", "--type", "A4~2", "--jobs", "3"];
    let a = without_timing(json(&dawk(&args)));
    let b = without_timing(json(&dawk(&[
        "paper-suite",
        "--type",
        "A4~2",
        "--jobs",
        "1",
    ])));
    assert_eq!(a, b);
    assert_eq!(a["seed"], 0xDA57);
    let c = without_timing(json(&dawk(&[
        "paper-suite",
        "--type",
        "A4~2",
        "--seed",
        "7",
    ])));
    assert_eq!(c["seed"], 7);
}
