use std::process::{Command, Output};

fn isog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isog")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn scratch(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("isog-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn normalize_identity_redex() {
    let o = isog(&["normalize", r"(\x:o. x)[y]", "--ctx", "y:o"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).trim(), "y");
}

#[test]
fn normalize_reports_coefficients() {
    let o = isog(&["normalize", r"(\x:o. f[x][x])[y, y]", "--ctx", "f:o->o->o, y:o"]);
    assert_eq!(stdout(&o).trim(), "2 * f [y] [y]");
    let o = isog(&["normalize", r"(\x:o. f[x][x])[y, z]", "--ctx", "f:o->o->o, y:o, z:o", "--order", "innermost"]);
    assert_eq!(stdout(&o).trim(), "f [y] [z] + f [z] [y]");
}

#[test]
fn errors_exit_with_two() {
    assert_eq!(code(&isog(&["typecheck", "f[x]", "--ctx", "f:o->o->o, x:o"])), 2);
    assert_eq!(code(&isog(&["parse", r"\x:o."])), 2);
    assert_eq!(code(&isog(&["normalize", "y", "--ctx", "y:o", "--frobnicate"])), 2);
    assert_eq!(code(&isog(&["encode", r"(\x:o. x)[y]", "--ctx", "y:o"])), 2);
}

#[test]
fn encode_then_decode() {
    let ctx = "f:o->o->o, x:o";
    let o = isog(&["encode", r"\y:o. f[x, y][y]", "--ctx", ctx, "--json"]);
    assert_eq!(code(&o), 0);
    let path = scratch("aug.json", &stdout(&o));
    let d = isog(&["decode", &path, "--ctx", ctx]);
    assert_eq!(code(&d), 0);
    let back = stdout(&d);
    let again = isog(&["encode", back.trim(), "--ctx", ctx, "--json"]);
    assert_eq!(code(&again), 0);
    assert_eq!(stdout(&again), stdout(&o));
}

#[test]
fn compose_with_a_copycat() {
    let sigma = isog(&["interpret", r"(\x:o. f[x][x])[y, z]", "--ctx", "f:o->o->o, y:o, z:o", "--json"]);
    let tau = isog(&["interpret", "x", "--ctx", "x:o", "--json"]);
    let (ps, pt) = (scratch("sigma.json", &stdout(&sigma)), scratch("tau.json", &stdout(&tau)));
    let c = isog(&["compose", &pt, &ps, "--json"]);
    assert_eq!(code(&c), 0);
    assert_eq!(stdout(&c), stdout(&sigma));
    assert_eq!(code(&isog(&["compose", &ps, &ps])), 2);
}

#[test]
fn soundness_is_deterministic() {
    let a = isog(&["soundness", "--corpus", "30", "--seed", "5", "--json"]);
    let b = isog(&["soundness", "--corpus", "30", "--seed", "5", "--json"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["total"], 30);
}

#[test]
fn laws_pass_at_a_small_window() {
    let o = isog(&["check-laws", "--window", "3", "--arena", "o"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn dot_exports() {
    let o = isog(&["export-dot", "--term", r"\x:o. x"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.starts_with("digraph"));
    assert!(s.contains("style=solid"));
    assert_eq!(code(&isog(&["export-dot"])), 2);
}
