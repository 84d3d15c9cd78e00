use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn kronecker(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kronecker"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn embeds_yes_and_no() {
    let dir = TempDir::new().unwrap();
    let q2 = write(dir.path(), "q2.json", r#"{"preprojective":[2]}"#);
    let q3 = write(dir.path(), "q3.json", r#"{"preprojective":[3]}"#);

    let out = kronecker(&["embeds", "--sub", p(&q2), "--into", p(&q3)]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["embeds"], true);
    assert_eq!(v["mode"], "both");
    assert_eq!(v["report"]["trials"], 3);
    assert_eq!(v["report"]["seed"], 0);
    assert!(v["report"]["prime"].as_u64().unwrap() > 1 << 60);

    let out = kronecker(&["embeds", "--sub", p(&q3), "--into", p(&q2), "--mode", "theorem"]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["embeds"], false);
    assert!(v["report"].is_null());
}

#[test]
fn embeds_accepts_pencils() {
    let dir = TempDir::new().unwrap();
    // R(0,1) + R(1,1) as an explicit pencil.
    let pencil = write(
        dir.path(),
        "r.json",
        r#"{"rows":2,"cols":2,"E":[["1","0"],["0","1"]],"H":[["0","0"],["0","1"]]}"#,
    );
    let q2 = write(dir.path(), "q2.json", r#"{"preprojective":[2]}"#);
    let out = kronecker(&["embeds", "--sub", p(&q2), "--into", p(&pencil), "--mode", "generic"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn uncovered_mix_in_theorem_mode() {
    let dir = TempDir::new().unwrap();
    let mixed = write(
        dir.path(),
        "mixed.json",
        r#"{"preprojective":[2],"regular":[{"point":"0","sizes":[1]}]}"#,
    );
    let out = kronecker(&["embeds", "--sub", p(&mixed), "--into", p(&mixed), "--mode", "theorem"]);
    assert_eq!(out.status.code(), Some(2));
    let out = kronecker(&["embeds", "--sub", p(&mixed), "--into", p(&mixed)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_json(&out)["theorem"].is_null());
}

#[test]
fn factor_uses_duality() {
    let dir = TempDir::new().unwrap();
    let r1 = write(dir.path(), "r1.json", r#"{"regular":[{"point":"0","sizes":[1]}]}"#);
    let r2 = write(dir.path(), "r2.json", r#"{"regular":[{"point":"0","sizes":[2]}]}"#);
    let q1 = write(dir.path(), "q1.json", r#"{"preprojective":[1]}"#);
    let q2 = write(dir.path(), "q2.json", r#"{"preprojective":[2]}"#);
    assert_eq!(kronecker(&["factor", "--quotient", p(&r1), "--of", p(&r2)]).status.code(), Some(0));
    assert_eq!(kronecker(&["factor", "--quotient", p(&q1), "--of", p(&q2)]).status.code(), Some(1));
}

#[test]
fn invariants_of_zero_pencil() {
    let dir = TempDir::new().unwrap();
    let z = write(dir.path(), "z.json", r#"{"rows":1,"cols":2,"E":[["0","0"]],"H":[["0","0"]]}"#);
    let out = kronecker(&["invariants", "--pencil", p(&z)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        r#"{"preinjective":[1,1],"preprojective":[1],"regular":[]}"#
    );
}

#[test]
fn non_split_spectrum_exits_3() {
    let dir = TempDir::new().unwrap();
    let rot = write(dir.path(), "rot.json", r#"{"rows":2,"cols":2,"E":[[1,0],[0,1]],"H":[[0,-1],[1,0]]}"#);
    let out = kronecker(&["invariants", "--pencil", p(&rot)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("x^2 + 1"));
}

#[test]
fn malformed_input_names_the_field() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"rows":1,"cols":2,"E":[["0","x"]],"H":[["0","0"]]}"#);
    let q3 = write(dir.path(), "q3.json", r#"{"preprojective":[3]}"#);
    let out = kronecker(&["embeds", "--sub", p(&bad), "--into", p(&q3)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("E[0][1]"));

    let bad = write(dir.path(), "bad2.json", r#"{"preprojective":[2,"x"]}"#);
    let out = kronecker(&["embeds", "--sub", p(&bad), "--into", p(&q3)]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("preprojective[1]"));

    assert_eq!(kronecker(&["embeds", "--sub", "missing.json", "--into", p(&q3)]).status.code(), Some(3));
    assert_eq!(kronecker(&["no-such-command"]).status.code(), Some(3));
}

#[test]
fn canonical_round_trips_through_invariants() {
    let dir = TempDir::new().unwrap();
    let text = r#"{"preinjective":[2],"preprojective":[3,1],"regular":[{"point":"inf","sizes":[2]},{"point":"-1/2","sizes":[1,1]}]}"#;
    let inv = write(dir.path(), "inv.json", text);
    let pencil = dir.path().join("pencil.json");
    let out = kronecker(&["canonical", "--invariants", p(&inv), "-o", p(&pencil)]);
    assert_eq!(out.status.code(), Some(0));
    let out = kronecker(&["invariants", "--pencil", p(&pencil)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), text);
}

#[test]
fn homdim_reports_structure() {
    let dir = TempDir::new().unwrap();
    let q1 = write(dir.path(), "q1.json", r#"{"preprojective":[1]}"#);
    let q2 = write(dir.path(), "q2.json", r#"{"preprojective":[2]}"#);
    let v = stdout_json(&kronecker(&["homdim", "--from", p(&q1), "--to", p(&q2)]));
    assert_eq!(v["hom_dim"], 2);
    assert_eq!(v["structured_params"], 2);

    let mixed = write(
        dir.path(),
        "mixed.json",
        r#"{"preprojective":[2],"regular":[{"point":"0","sizes":[1]}]}"#,
    );
    let v = stdout_json(&kronecker(&["homdim", "--from", p(&mixed), "--to", p(&mixed)]));
    assert!(v["structured_params"].is_null());
    assert_eq!(v["unstructured_cells"], 1);
}

#[test]
fn rank_kinds() {
    let cases = [
        ("pp", r#"{"a":[3],"d":[2,2]}"#, 3),
        ("pp1", r#"{"a":[3],"d":[2]}"#, 1),
        ("ii", r#"{"c":[1,1],"f":[2]}"#, 2),
        ("ii2", r#"{"c":[1,1],"f":[2]}"#, 0),
        ("rr", r#"{"target":[{"point":"0","sizes":[3,1]}],"source":[{"point":"0","sizes":[2,2]}]}"#, 3),
        ("blocktri", r#"{"rows":[1,2],"cols":[2,1]}"#, 2),
    ];
    for (kind, args, expected) in cases {
        let out = kronecker(&["rank", "--kind", kind, "--args", args]);
        assert_eq!(out.status.code(), Some(0), "{kind}: {}", String::from_utf8_lossy(&out.stderr));
        assert_eq!(stdout_json(&out)["rank"], expected, "{kind}");
    }
    let out = kronecker(&["rank", "--kind", "pp", "--args", r#"{"a":[1,2],"d":[]}"#]);
    assert_eq!(out.status.code(), Some(3));
    let out = kronecker(&["rank", "--kind", "blocktri", "--args", r#"{"rows":[1],"cols":[]}"#]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_suite_summary() {
    let out = kronecker(&["verify", "--suite", "pp", "--max-dim", "4", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["instances"], 144);
    assert_eq!(v["seed"], 5);
    assert_eq!(kronecker(&["verify", "--suite", "nope", "--max-dim", "2"]).status.code(), Some(3));
}
