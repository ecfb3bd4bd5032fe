use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bbp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bbp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

const PI4: &str = "P(1,16,8,(8,8,4,0,-2,-2,-1,0))";

#[test]
fn instantiate_example() {
    let o = bbp(&["instantiate", "--family", "atan.pi4.minus", "--n", "1"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.contains("formula: P(1,16,8,(8,8,4,0,-2,-2,-1,0))"), "{s}");
    assert!(s.contains("prefactor: 1/16"));
    assert!(s.contains("closed form: atan(1)"));
}

#[test]
fn digits_example() {
    let o = bbp(&["digits", "--formula", PI4, "--pos", "0", "--count", "8"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "90FDAA22\n");
}

#[test]
fn verify_family_example() {
    let o = bbp(&["verify", "--family", "log.pi6.ratio", "--n-max", "5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let s = stdout(&o);
    assert_eq!(s.lines().filter(|l| l.starts_with("PASS")).count(), 4);
    assert!(s.ends_with("4 checks, 4 passed, 0 failed (F = 256)\n"));
}

#[test]
fn verify_json_lines() {
    let o = bbp(&["verify", "--family", "A1", "--n-max", "3", "--bits", "128", "--grid", "--json"]);
    assert_eq!(code(&o), 0);
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2 + 120);
    for l in &lines {
        for key in ["subject", "n", "F", "residual_log2", "pass"] {
            assert!(l.get(key).is_some(), "{key} missing in {l}");
        }
    }
    assert_eq!(lines[0]["subject"], "atan.pi2.sqrt");
    assert_eq!(lines[0]["F"], 128);
}

#[test]
fn json_round_trips_through_combine_and_rewrite() {
    let dir = tempfile::tempdir().unwrap();
    let write = |name: &str, fam: &str, n: &str| {
        let o = bbp(&["instantiate", "--family", fam, "--n", n, "--json"]);
        assert_eq!(code(&o), 0);
        let path = dir.path().join(name);
        std::fs::write(&path, o.stdout).unwrap();
        path.to_str().unwrap().to_string()
    };
    let a = write("a.json", "A8", "2");
    let b = write("b.json", "A9", "2");
    let o = bbp(&["combine", "--a", &a, "--b", &b, "--c1", "1", "--c2", "1", "--json"]);
    assert_eq!(code(&o), 0);
    let c: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(c["formula"]["b"], -1728);
    assert_eq!(c["formula"]["a"], serde_json::json!([144, 0, 24, 0, 1, 0]));
    assert_eq!(c["prefactor"], serde_json::json!({"num": 3, "den": 1}));

    // the combined instance is itself valid input
    let cpath = dir.path().join("c.json");
    std::fs::write(&cpath, &o.stdout).unwrap();
    let cpath = cpath.to_str().unwrap();
    let o2 = bbp(&["combine", "--a", cpath, "--b", cpath, "--c1", "1/2", "--c2", "-1/2", "--json"]);
    assert_eq!(code(&o2), 0);
    let z: serde_json::Value = serde_json::from_slice(&o2.stdout).unwrap();
    assert_eq!(z["prefactor"]["num"], 0);

    let o3 = bbp(&["rewrite", "--instance", &a, "--r", "2", "--json"]);
    assert_eq!(code(&o3), 0);
    let r: serde_json::Value = serde_json::from_slice(&o3.stdout).unwrap();
    assert_eq!(r["formula"]["m"], 12);
}

#[test]
fn combine_reads_stdin_and_aligns() {
    let a = bbp(&["instantiate", "--family", "A1", "--n", "3", "--json"]).stdout;
    let dir = tempfile::tempdir().unwrap();
    let bpath = dir.path().join("b.json");
    std::fs::write(&bpath, bbp(&["instantiate", "--family", "A2", "--n", "3", "--json"]).stdout).unwrap();
    let run = |extra: &[&str]| {
        let mut args = vec!["combine", "--a", "-", "--b", bpath.to_str().unwrap(), "--c2", "-1"];
        args.extend_from_slice(extra);
        let mut child = Command::new(env!("CARGO_BIN_EXE_bbp"))
            .args(&args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .unwrap();
        child.stdin.take().unwrap().write_all(&a).unwrap();
        child.wait_with_output().unwrap()
    };
    assert_eq!(code(&run(&[])), 2);
    let o = run(&["--align"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("prefactor: 0"));
}

#[test]
fn rewrite_text() {
    let o = bbp(&["rewrite", "--formula", "P(1,-2,2,(1,0))", "--r", "2"]);
    assert_eq!(stdout(&o), "formula: P(1,4,4,(-2,0,1,0))\nscale: -2\n");
}

#[test]
fn eval_with_digits() {
    let o = bbp(&["eval", "--formula", "P(1,10,1,(1))", "--bits", "64", "--digits-base", "10", "--count", "6"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.starts_with("value: 1.053605156578263"), "{s}");
    assert!(s.contains("fraction digits: 053605"));
    let o = bbp(&["eval", "--formula", "P(1,10,1,(1))", "--bits", "32", "--digits-base", "10", "--count", "60"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn negative_base_digits_note() {
    let o = bbp(&["digits", "--formula", "P(1,-4,4,(2,0,-1,0))", "--pos", "0", "--count", "6"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.lines().nth(1).unwrap().starts_with("note: base 16 digits of the r = 2 rewrite"), "{s}");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&bbp(&[])), 1);
    assert_eq!(code(&bbp(&["frobnicate"])), 1);
    assert_eq!(code(&bbp(&["eval", "--formula", PI4, "--bits", "16"])), 1);
    assert_eq!(code(&bbp(&["digits", "--formula", PI4, "--pos", "0", "--count", "4", "--guard", "2"])), 1);
    assert_eq!(code(&bbp(&["--help"])), 0);
    assert_eq!(code(&bbp(&["eval", "--formula", "P(1,1,1,(1))"])), 2);
    assert_eq!(code(&bbp(&["eval", "--formula", "P(1,-n^3,1,(1))"])), 2);
    assert_eq!(code(&bbp(&["instantiate", "--family", "A1", "--n", "1"])), 2);
    assert_eq!(code(&bbp(&["instantiate", "--family", "nope", "--n", "3"])), 2);
    assert_eq!(code(&bbp(&["digits", "--formula", "P(2,16,1,(1))", "--pos", "0", "--count", "3"])), 2);
    assert_eq!(code(&bbp(&["combine", "--a", "/nonexistent", "--b", "/nonexistent"])), 2);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["families", "--json"],
        vec!["verify", "--family", "L12", "--n-max", "8", "--json"],
        vec!["digits", "--formula", PI4, "--pos", "5000", "--count", "12", "--json"],
        vec!["eval", "--formula", PI4, "--bits", "2000"],
    ] {
        assert_eq!(bbp(&args).stdout, bbp(&args).stdout, "{args:?}");
    }
}

#[test]
fn families_listing() {
    let o = bbp(&["families", "--json"]);
    let v: Vec<serde_json::Value> = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v.len(), 22);
    assert_eq!(v[4]["id"], "atan.pi4.minus");
    assert_eq!(v[4]["label"], "A5");
    assert_eq!(v[21]["id"], "log.pi6.ratio");
    let text = stdout(&bbp(&["families"]));
    assert_eq!(text.lines().count(), 22);
}
