mod common;

use std::path::Path;
use std::process::{Command, Output};

use common::fixture_path;
use varchenko::io::Artifact;

fn varchenko(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_varchenko")).args(args).output().expect("binary runs")
}

fn fx(name: &str) -> String {
    fixture_path(name).to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn matrix_of_a_single_line() {
    let o = varchenko(&["matrix", &fx("single_line")]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<Vec<String>> =
        stdout(&o).lines().map(|l| l.split_whitespace().map(str::to_string).collect()).collect();
    assert_eq!(rows, vec![vec!["1", "x1"], vec!["x1", "1"]]);
}

#[test]
fn determinant_routes_agree_on_three_lines() {
    let o = varchenko(&["det", "--method", "both", "--format", "json", &fx("three_generic_lines")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let art = Artifact::from_json_str(&stdout(&o)).unwrap();
    let Artifact::Det(d) = art else { panic!("wrong artifact kind") };
    assert_eq!(d.formula, d.bruteforce);
    assert_eq!(d.formula.as_deref(), Some("(1-x1^2)^3(1-x2^2)^3(1-x3^2)^3"));
}

#[test]
fn concurrent_lines_are_rejected() {
    let o = varchenko(&["diagonalize", &fx("three_concurrent_lines")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("B={1,2,3}"), "{}", stderr(&o));
    let o = varchenko(&["check", &fx("three_concurrent_lines")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("B={1,2,3}"));
}

#[test]
fn exit_codes() {
    assert_eq!(varchenko(&["--help"]).status.code(), Some(0));
    assert_eq!(varchenko(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(varchenko(&["regions", "/nonexistent/arrangement.json"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"mode":"affine","dim":2,"hyperplanes":[{"normal":[0,0],"offset":"1"}]}"#).unwrap();
    assert_eq!(varchenko(&["regions", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(varchenko(&["snf-q", &fx("three_concurrent_lines")]).status.code(), Some(3));
    assert_eq!(varchenko(&["obstruct", &fx("three_generic_lines")]).status.code(), Some(3));
    let o = varchenko(&["det", "--method", "bruteforce", &fx("five_generic_lines")]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

fn emit(dir: &Path, args: &[&str], name: &str) -> std::path::PathBuf {
    let path = dir.join(name);
    let mut full: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap().to_string();
    full.extend(["--format", "json", "-o", &p]);
    let o = varchenko(&full);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    path
}

#[test]
fn every_artifact_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let lines = fx("three_generic_lines");
    let cases: Vec<(Vec<&str>, &str)> = vec![
        (vec!["regions", &lines], "regions"),
        (vec!["faces", &lines], "faces"),
        (vec!["poset", &lines], "poset"),
        (vec!["charpoly", &lines], "charpoly"),
        (vec!["matrix", &lines], "matrix"),
        (vec!["det", "--method", "both", &lines], "det"),
        (vec!["check", &lines], "check"),
        (vec!["diagonalize", &lines], "diagonalize"),
        (vec!["snf-q", &lines], "snf-q"),
        (vec!["axioms", &lines], "axioms"),
    ];
    let planes = fx("four_planes_through_a_line");
    let mut all = cases;
    all.push((vec!["obstruct", &planes], "obstruct"));
    for (i, (args, sub)) in all.iter().enumerate() {
        let first = emit(dir.path(), args, &format!("a{i}.json"));
        let again = dir.path().join(format!("b{i}.json"));
        let o = varchenko(&[
            sub,
            "--from-json",
            first.to_str().unwrap(),
            "--format",
            "json",
            "-o",
            again.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0), "{sub}: {}", stderr(&o));
        assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&again).unwrap(), "{sub}");
    }
    // an artifact of the wrong kind is refused
    let regions = dir.path().join("a0.json");
    let o = varchenko(&["matrix", "--from-json", regions.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn certificates_verify_against_their_arrangement() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let input = fx("grid_two_by_two");
    let o = varchenko(&["diagonalize", &input, "--certificate", cert.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let c = cert.to_str().unwrap();
    assert_eq!(varchenko(&["diagonalize", "--from-json", c, &input]).status.code(), Some(0));
    // a certificate for another arrangement fails verification
    let o = varchenko(&["diagonalize", "--from-json", c, &fx("three_parallel_lines")]);
    assert_ne!(o.status.code(), Some(0));
    // so does a tampered one
    let mut value: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    value["P"][0][0] = serde_json::Value::String("2".into());
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&value).unwrap()).unwrap();
    let o = varchenko(&["diagonalize", "--from-json", bad.to_str().unwrap(), &input]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn outputs_are_deterministic() {
    for args in [
        vec!["diagonalize", "--format", "json"],
        vec!["poset", "--format", "json"],
        vec!["faces"],
        vec!["snf-q", "--format", "json"],
    ] {
        let mut full = args.clone();
        let input = fx("generic_planes_in_space");
        full.push(&input);
        let a = varchenko(&full);
        let b = Command::new(env!("CARGO_BIN_EXE_varchenko"))
            .args(&full)
            .env(varchenko::cli::THREADS_ENV, "1")
            .output()
            .unwrap();
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, varchenko(&full).stdout);
    }
}

#[test]
fn covector_lists() {
    let o = varchenko(&["regions", &fx("covector_three_great_circles")]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().count(), 8);
    let o = varchenko(&["det", &fx("covector_three_great_circles")]);
    assert_eq!(o.status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    // not closed under composition
    std::fs::write(&bad, "0+\n0-\n+0\n-0\n++\n--\n").unwrap();
    let o = varchenko(&["axioms", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("FAIL"), "{}", stdout(&o));
    assert_eq!(varchenko(&["regions", bad.to_str().unwrap()]).status.code(), Some(2));
}
