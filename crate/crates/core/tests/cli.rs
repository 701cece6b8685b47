use std::path::PathBuf;

use ckembed::cli::{run, Outcome};

fn ck(args: &[&str]) -> Outcome {
    run(std::iter::once("ckembed").chain(args.iter().copied()))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ckembed-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn szlenk_of_omega_power_interval() {
    let out = ck(&["szlenk", "I(w^(1)*1,1)"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.trim(), "w^(2)");
}

#[test]
fn height_and_derivatives() {
    assert_eq!(ck(&["height", "I(w^(1)*1+1,2)"]).stdout.trim(), "w^(1)+2");
    assert_eq!(ck(&["derive", "I(2,3)", "2"]).stdout.trim(), "fin(3)");
    assert_eq!(ck(&["kernel", "sum(cantor,I(3,1))"]).stdout.trim(), "cantor");
    assert_eq!(ck(&["msnf", "sum(I(1,1),I(1,2))"]).stdout.trim(), "I(1,3)");
}

#[test]
fn isometric_embedding_exit_codes() {
    let no = ck(&["embeds", "--isometric", "cantor", "I(w^(3)*1,1)"]);
    assert_eq!(no.code, 1, "{}", no.stdout);
    let yes = ck(&["embeds", "--isometric", "I(w^(1)*1,1)", "unit"]);
    assert_eq!(yes.code, 0);
    assert!(yes.stdout.contains("Rosenthal-2.8/Miljutin (decision-only)"), "{}", yes.stdout);
    let small = ck(&["embeds", "--isometric", "I(2,1)", "I(w,1)"]);
    assert_eq!(small.code, 0, "{}", small.stdout);
}

#[test]
fn syntax_errors_exit_3() {
    let out = ck(&["height", "sum(cantor,"]);
    assert_eq!(out.code, 3);
    assert!(!out.stderr.is_empty());
    assert_eq!(ck(&["frobnicate"]).code, 3);
}

#[test]
fn verify_requires_a_seed() {
    let op = scratch("seedless.json");
    let synth = ck(&["synth", "I(w,1)", "--embedding", "--alpha", "2", "--out", op.to_str().unwrap()]);
    assert_eq!(synth.code, 0, "{}", synth.stderr);
    assert_eq!(ck(&["verify", "--op", op.to_str().unwrap()]).code, 3);
}

#[test]
fn synth_apply_verify_round_trip() {
    let op = scratch("embedding.json");
    let synth = ck(&["synth", "sum(I(w,1),fin(2))", "--embedding", "--alpha", "w", "--out", op.to_str().unwrap()]);
    assert_eq!(synth.code, 0, "{}", synth.stderr);
    let verified = ck(&["verify", "--op", op.to_str().unwrap(), "--trials", "30", "--seed", "4"]);
    assert_eq!(verified.code, 0, "{}", verified.stdout);
    let applied = ck(&["apply", "--op", op.to_str().unwrap(), r#"{"tail":"1/2","children":{}}"#]);
    assert_eq!(applied.code, 0, "{}", applied.stderr);
    assert!(applied.stdout.contains("1/2"), "{}", applied.stdout);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let runs = [
        vec!["conditions", "I(w,1)", "sum(I(w,2),cantor)"],
        vec!["--json", "embeds", "--isomorphic", "I(w^(2),1)", "I(w^(3),1)"],
        vec!["cellularity", "op(w,I(2,1))", "2"],
    ];
    for args in &runs {
        let a = ck(args);
        let b = ck(args);
        assert_eq!(a, b, "{args:?}");
    }
    let op = scratch("determinism.json");
    ck(&["synth", "I(w+1,2)", "--embedding", "--alpha", "w", "--out", op.to_str().unwrap()]);
    let v = |seed: &str| ck(&["--json", "verify", "--op", op.to_str().unwrap(), "--trials", "20", "--seed", seed]);
    assert_eq!(v("9"), v("9"));
}
