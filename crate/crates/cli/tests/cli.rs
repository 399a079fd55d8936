use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn natcon(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_natcon"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

/// Runs `generate ...` and stores the artifact as `name`.
fn generate(dir: &Path, name: &str, args: &[&str]) {
    let mut full = vec!["generate"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", name]);
    let o = natcon(dir, &full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

fn all_zero(v: &Value) -> bool {
    match v {
        Value::Array(xs) => xs.iter().all(all_zero),
        Value::Number(x) => x.as_i64() == Some(0),
        _ => false,
    }
}

#[test]
fn verify_small_run_exits_zero() {
    let dir = TempDir::new().unwrap();
    let o = natcon(dir.path(), &["verify", "--n", "1", "--seeds", "25"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["ok"], true);
    let suites = r["result"]["suites"].as_array().unwrap();
    assert!(suites.len() >= 15);
    for s in suites {
        assert_eq!(s["passed"], s["total"], "{s}");
        assert!(s["total"].as_u64().unwrap() > 0);
    }
}

#[test]
fn canonical_on_f11_forms_has_zero_diff() {
    let dir = TempDir::new().unwrap();
    generate(
        dir.path(),
        "f.json",
        &["forms", "--class", "F11", "--seed", "4"],
    );
    let o = natcon(dir.path(), &["canonical", "--forms", "f.json", "--n", "1"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert!(all_zero(&r["result"]["diff"]));
    assert!(!all_zero(&r["result"]["t0_from_f"]));
}

#[test]
fn canonical_accepts_f_files_and_checks_n() {
    let dir = TempDir::new().unwrap();
    generate(
        dir.path(),
        "F.json",
        &["fixture", "--n", "2", "--seed", "1", "--transport"],
    );
    let o = natcon(dir.path(), &["canonical", "--f", "F.json"]);
    assert_eq!(code(&o), 0);
    let o = natcon(dir.path(), &["canonical", "--f", "F.json", "--n", "1"]);
    assert_eq!(code(&o), 4);
}

#[test]
fn t0_of_f5_is_in_the_sum_and_in_t31() {
    let dir = TempDir::new().unwrap();
    generate(dir.path(), "t0_f5.json", &["torsion", "--class", "F5"]);
    let o = natcon(
        dir.path(),
        &[
            "classify-torsion",
            "--in",
            "t0_f5.json",
            "--sum",
            "T13,T31,T41",
        ],
    );
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["result"]["sum"]["member"], true);
    assert_eq!(r["result"]["classes"]["T31"], true);
    assert_eq!(r["result"]["classes"]["T13"], false);

    let o = natcon(
        dir.path(),
        &["classify-torsion", "--in", "t0_f5.json", "--sum", "T11,T12"],
    );
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["result"]["sum"]["member"], false);
}

#[test]
fn classify_f_expectations_drive_the_exit_code() {
    let dir = TempDir::new().unwrap();
    generate(
        dir.path(),
        "F.json",
        &["fixture", "--class", "F4", "--seed", "2"],
    );
    let o = natcon(
        dir.path(),
        &["classify-f", "--in", "F.json", "--expect", "F4,MAIN"],
    );
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["result"]["classes"]["F4"], true);
    assert_eq!(r["result"]["classes"]["F1"], false);
    let o = natcon(
        dir.path(),
        &["classify-f", "--in", "F.json", "--expect", "F1"],
    );
    assert_eq!(code(&o), 1);
}

#[test]
fn torsion_member_is_natural() {
    let dir = TempDir::new().unwrap();
    std::fs::write(
        dir.path().join("p.json"),
        r#"{"alpha": ["1/3", 2, 0, "-5/7"]}"#,
    )
    .unwrap();
    generate(
        dir.path(),
        "forms.json",
        &["forms", "--n", "2", "--seed", "9", "--transport"],
    );
    let o = natcon(
        dir.path(),
        &["torsion", "--params", "p.json", "--forms", "forms.json"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let r = json(&o);
    assert_eq!(r["assertions"].as_array().unwrap().len(), 3);

    // raw parameters: λ = 0 is the Levi-Civita connection
    std::fs::write(
        dir.path().join("zero.json"),
        format!(r#"{{"lambda": {}}}"#, serde_json::json!(vec![0; 18])),
    )
    .unwrap();
    let o = natcon(
        dir.path(),
        &["torsion", "--params", "zero.json", "--forms", "forms.json"],
    );
    assert_eq!(
        code(&o),
        1,
        "λ = 0 is not a natural connection for nonzero F"
    );
}

#[test]
fn liegroup_frozen_fixture_passes() {
    let dir = TempDir::new().unwrap();
    std::fs::write(dir.path().join("p.json"), r#"{"alpha": [1, -1, "1/2", 3]}"#).unwrap();
    for name in ["l1", "f4", "f11_dim5", "heisenberg"] {
        generate(dir.path(), "l.json", &["lie", "--name", name]);
        let o = natcon(dir.path(), &["liegroup", "--in", "l.json"]);
        assert_eq!(code(&o), 0, "{name}");
    }
    generate(dir.path(), "l.json", &["lie", "--name", "f1"]);
    let o = natcon(
        dir.path(),
        &["liegroup", "--in", "l.json", "--params", "p.json"],
    );
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["result"]["classes"]["F1"], true);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| {
            natcon(
                dir.path(),
                &[
                    "generate",
                    "fixture",
                    "--n",
                    "2",
                    "--seed",
                    "17",
                    "--transport",
                ],
            )
            .stdout
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
    let a = natcon(
        dir.path(),
        &["verify", "--n", "2", "--seeds", "3", "--format", "text"],
    );
    let b = natcon(
        dir.path(),
        &["verify", "--n", "2", "--seeds", "3", "--format", "text"],
    );
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).starts_with("verify: ok\n"));
}

fn reserialized<T: serde::de::DeserializeOwned + serde::Serialize>(text: &str) -> String {
    natcon_core::io::to_json(&serde_json::from_str::<T>(text).unwrap())
}

#[test]
fn artifacts_round_trip() {
    use natcon_core::io::{FFile, FormsFile, LieFile, StructureFile, TorsionFile};
    let dir = TempDir::new().unwrap();
    let kinds: [(&str, fn(&str) -> String); 4] = [
        ("structure", reserialized::<StructureFile>),
        ("fixture", reserialized::<FFile>),
        ("forms", reserialized::<FormsFile>),
        ("torsion", reserialized::<TorsionFile>),
    ];
    for (kind, again) in kinds {
        generate(
            dir.path(),
            "a.json",
            &[kind, "--n", "2", "--seed", "5", "--transport"],
        );
        let text = std::fs::read_to_string(dir.path().join("a.json")).unwrap();
        assert_eq!(again(&text), text, "{kind}");
        assert!(!text.contains('.'), "{kind}: no floats");
    }
    generate(dir.path(), "l.json", &["lie", "--name", "f4_dim5"]);
    let text = std::fs::read_to_string(dir.path().join("l.json")).unwrap();
    assert_eq!(reserialized::<LieFile>(&text), text);
}

#[test]
fn errors_map_to_distinct_exit_codes() {
    let dir = TempDir::new().unwrap();
    let p = dir.path();
    generate(p, "t.json", &["torsion", "--class", "F1"]);

    assert_eq!(
        code(&natcon(
            p,
            &["classify-torsion", "--in", "t.json", "--sum", "T13,T77"]
        )),
        5
    );
    assert_eq!(code(&natcon(p, &["classify-f", "--in", "missing.json"])), 7);
    assert_eq!(code(&natcon(p, &["frobnicate"])), 2);

    std::fs::write(p.join("broken.json"), "{\"n\": 1, ").unwrap();
    assert_eq!(code(&natcon(p, &["classify-f", "--in", "broken.json"])), 3);

    // φ² ≠ −Id + η⊗ξ
    let bad = r#"{"n": 1, "F": [[[0,0,0],[0,0,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]]],
        "structure": {"n": 1, "phi": [[1,0,0],[0,1,0],[0,0,0]], "xi": [0,0,1], "eta": [0,0,1],
                      "g": [[1,0,0],[0,-1,0],[0,0,1]]}}"#;
    std::fs::write(p.join("bad_structure.json"), bad).unwrap();
    let o = natcon(p, &["classify-f", "--in", "bad_structure.json"]);
    assert_eq!(code(&o), 4);
    assert!(String::from_utf8_lossy(&o.stderr).contains("axiom"));

    // a singular metric
    let singular = bad
        .replace("[[1,0,0],[0,1,0],[0,0,0]]", "[[0,-1,0],[1,0,0],[0,0,0]]")
        .replace("[[1,0,0],[0,-1,0],[0,0,1]]", "[[0,0,0],[0,0,0],[0,0,1]]");
    std::fs::write(p.join("singular.json"), singular).unwrap();
    let o = natcon(p, &["classify-f", "--in", "singular.json"]);
    assert_eq!(code(&o), 6, "{}", String::from_utf8_lossy(&o.stderr));
}
