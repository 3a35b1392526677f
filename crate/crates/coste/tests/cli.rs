use std::process::Command;

fn coste(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_coste"))
        .args(args)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn spec_prints_json() {
    let (code, out) = coste(&["spec", "--context", "zariski", "--model", r#"{"zmod":12}"#]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["points"], 2);
    assert_eq!(v["gamma_size"], 12);
}

#[test]
fn identical_runs_give_identical_bytes() {
    let args = ["reticulation", "--context", "dl", "--model", r#"{"kind":"lattice","boolean":3}"#];
    assert_eq!(coste(&args), coste(&args));
}

#[test]
fn exit_codes() {
    assert_eq!(coste(&["spec", "--context", "zariski", "--model", "[1"]).0, 1);
    assert_eq!(coste(&["frobnicate"]).0, 1);
    assert_eq!(coste(&["pit", "--context", "dl", "--model", r#"{"kind":"lattice","diamond":true}"#]).0, 0);
    // admissibility must hold before a colimit is taken in the admissible category
    let d = r#"{"kind":"coequalizer","spaces":[{"stalks":[{"zmod":2}]},{"stalks":[{"zmod":6}]}],
        "maps":[{"source":0,"target":1,"points":[0],"flat":[[0,1,0,1,0,1]]},
                {"source":0,"target":1,"points":[0],"flat":[[0,1,0,1,0,1]]}]}"#;
    assert_eq!(coste(&["colim", "--context", "zariski", "--diagram", d]).0, 1);
}

#[test]
fn dot_output() {
    let dir = std::env::temp_dir().join(format!("coste-dot-{}", std::process::id()));
    let d = dir.to_str().unwrap();
    let (code, _) = coste(&["spec", "--context", "dl", "--model", r#"{"kind":"lattice","chain":4}"#, "--dot", d]);
    assert_eq!(code, 0);
    let body = std::fs::read_to_string(dir.join("spec.dot")).unwrap();
    assert!(body.starts_with("digraph"));
    std::fs::remove_dir_all(dir).unwrap();
}
