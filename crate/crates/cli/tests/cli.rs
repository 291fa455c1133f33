use std::io::Write as _;
use std::process::{Command, Stdio};

use nakayama_cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};
use nakayama_core::exactlin::Field;
use nakayama_core::json::ScalarDoc;
use nakayama_core::pathalg::Algebra;
use nakayama_core::pseudofunctor::{perturb, seeded_rng, Relations, ScalarSystem};
use nakayama_core::verify::Context;
use serde_json::Value;

fn nakayama(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("nakayama").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn hom_of_x_has_dimension_two() {
    let (code, out, _) = nakayama(&["hom", "X[0,1]", "X[0,1]", "--r", "1", "--N", "2"]);
    assert_eq!(code, EXIT_PASS);
    let v = json(&out);
    assert_eq!(v["schema"], "nakayama.hom/1");
    assert_eq!(v["dim"], 2);
    let (_, out, _) = nakayama(&["hom", "L[0,2;a=2]", "L[0,2;a=2]", "--r", "2", "--N", "3"]);
    assert_eq!(json(&out)["dim"], 1);
}

#[test]
fn undefined_objects_are_usage_errors() {
    let (code, out, err) = nakayama(&["object", "Z[0;a=2,b=1]", "--r", "1", "--N", "2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(out.is_empty());
    assert!(err.contains("Z undefined for N=2"), "{err}");
    let (code, _, err) = nakayama(&["object", "X[0,", "--r", "1", "--N", "2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("parsing"), "{err}");
}

#[test]
fn usage_and_help() {
    assert_eq!(nakayama(&["--help"]).0, EXIT_PASS);
    assert_eq!(nakayama(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(nakayama(&["check", "nonsense"]).0, EXIT_USAGE);
    assert_eq!(nakayama(&["check", "homdim", "--window", "2", "1"]).0, EXIT_USAGE);
    // the orbit suite is only defined for r = 1
    assert_eq!(nakayama(&["check", "orbit", "--r", "2", "--N", "3"]).0, EXIT_USAGE);
}

#[test]
fn object_and_cone_documents() {
    let (code, out, _) = nakayama(&["object", "X[-1,1]"]);
    assert_eq!(code, EXIT_PASS);
    let v = json(&out);
    assert_eq!(v["schema"], "nakayama.complex/1");
    assert_eq!(v["degrees"].as_array().unwrap().len(), 3);
    let (code, out, _) = nakayama(&["cone", "c[l=0,m=1,n=2;a=1,b=1]", "--r", "1", "--N", "3"]);
    assert_eq!(code, EXIT_PASS, "{out}");
    assert_eq!(json(&out)["schema"], "nakayama.cone/1");
    let (code, out, _) = nakayama(&["algebra", "--r", "2", "--N", "4", "--format", "table"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("A(2,4) over F_32003"), "{out}");
}

#[test]
fn check_envelopes_and_exit_codes() {
    let (code, out, _) = nakayama(&["check", "homdim", "--window", "-1", "1"]);
    assert_eq!(code, EXIT_PASS);
    let v = json(&out);
    assert_eq!(v["schema"], "nakayama.run/1");
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["reports"][0]["check"], "homdim");
    // margin 0 is too small to close the composites
    let (code, out, _) = nakayama(&["check", "spanning", "--window", "-1", "1", "--margin", "0"]);
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(json(&out)["verdict"], "fail");
    let (code, _, _) = nakayama(&["check", "spanning-sabotaged", "--window", "-1", "1"]);
    assert_eq!(code, EXIT_PASS);
    let (code, out, _) = nakayama(&["center", "--window", "-1", "1", "--format", "table"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("center dim"), "{out}");
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "r = 2\nN = 3\nwindow = [-1, 1]\nsuites = [\"homdim\", \"catalog\"]\n").unwrap();
    let p = path.to_str().unwrap();
    let (code, out, _) = nakayama(&["check", "all", "--config", p, "--N", "4"]);
    assert_eq!(code, EXIT_PASS);
    let v = json(&out);
    assert_eq!(v["config"]["r"], 2);
    assert_eq!(v["config"]["N"], 4);
    assert_eq!(v["config"]["suites"], serde_json::json!(["homdim", "catalog"]));
    std::fs::write(&path, "radius = 1\n").unwrap();
    assert_eq!(nakayama(&["algebra", "--config", p]).0, EXIT_USAGE);
}

fn scalar_file(perturbed: bool) -> String {
    let alg = Algebra::arn(1, 2, Field::new(32003).unwrap()).unwrap();
    let ctx = Context::new(alg.clone());
    let mut sys = ScalarSystem::ones(1, 2, -1, 1);
    if perturbed {
        let rels = Relations::extract(&ctx, -1, 1).unwrap();
        perturb(&alg, &rels, &mut sys, &mut seeded_rng(3)).unwrap();
    }
    serde_json::to_string(&ScalarDoc::from_system(&alg, &sys)).unwrap()
}

#[test]
fn trivialize_from_file_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, scalar_file(false)).unwrap();
    let (code, out, _) = nakayama(&["trivialize", good.to_str().unwrap()]);
    assert_eq!(code, EXIT_PASS);
    let v = json(&out);
    assert_eq!(v["verdict"], "pass");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, scalar_file(true)).unwrap();
    let (code, out, _) = nakayama(&["trivialize", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_FAIL);
    assert_eq!(json(&out)["verdict"], "fail");

    let mut child = Command::new(env!("CARGO_BIN_EXE_nakayama"))
        .args(["trivialize", "-", "--format", "table"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(scalar_file(true).as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_FAIL));
    assert!(String::from_utf8_lossy(&out.stdout).contains("violated: "));

    std::fs::write(&good, "{\"schema\": \"nakayama.scalars/9\"}").unwrap();
    assert_eq!(nakayama(&["trivialize", good.to_str().unwrap()]).0, EXIT_USAGE);
}
