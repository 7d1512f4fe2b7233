use std::io::Write;
use std::process::{Command, Stdio};

use bimatch::{Instance, Objective, PNorm, Projection, Sense};
use bimatch_cli::json::{instance_file_from_json, instance_file_to_json, to_canonical_string, InstanceFile, ResultFile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

const EX1_JSON: &str = r#"{"n":4,"d":2,
  "weights":[[[1,0,0,0],[1,0,0,1],[1,1,0,0],[0,0,0,1]],[[1,1,0,1],[0,0,1,1],[0,0,1,0],[1,1,0,0]]],
  "objective":{"kind":"quadratic_distance","u":[0,0],"sense":"max"}}"#;

/// Runs the real binary so exit codes and stdin handling are the process's own.
fn bimatch(args: &[&str], stdin: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_bimatch"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn result(out: &str) -> ResultFile {
    ResultFile::from_json(&serde_json::from_str(out).unwrap()).unwrap()
}

fn random_file(rng: &mut ChaCha8Rng) -> InstanceFile {
    let n = rng.gen_range(1..=4);
    let d = rng.gen_range(1..=3);
    let w: Vec<Vec<Vec<i64>>> =
        (0..d).map(|_| (0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..=9)).collect()).collect()).collect();
    let sense = if rng.gen() { Sense::Max } else { Sense::Min };
    let u: Vec<i64> = (0..d).map(|_| rng.gen_range(-5..=5)).collect();
    let objective = match rng.gen_range(0..4) {
        0 => Objective::lp_norm(PNorm::Finite(rng.gen_range(1..=4)), sense),
        1 => Objective::lp_norm(PNorm::Infinity, sense),
        2 => Objective::quadratic_distance(&u, sense),
        _ => Objective::linear(&u, sense),
    };
    InstanceFile { instance: Instance::from_i64(n, d, &w).unwrap(), objective: Some(objective) }
}

#[test]
fn instance_files_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    for _ in 0..200 {
        let f = random_file(&mut rng);
        let text = to_canonical_string(&instance_file_to_json(&f));
        let back = instance_file_from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(back, f);
        assert_eq!(to_canonical_string(&instance_file_to_json(&back)), text);
    }
}

#[test]
fn every_solver_reports_a_consistent_matching() {
    let mut rng = ChaCha8Rng::seed_from_u64(72);
    for _ in 0..12 {
        let (n, d) = (rng.gen_range(1..=4), rng.gen_range(1..=2));
        let w: Vec<Vec<Vec<i64>>> =
            (0..d).map(|_| (0..n).map(|_| (0..n).map(|_| rng.gen_range(0..=2)).collect()).collect()).collect();
        let f = InstanceFile {
            instance: Instance::from_i64(n, d, &w).unwrap(),
            objective: Some(Objective::quadratic_distance(&vec![1; d], Sense::Max)),
        };
        let text = to_canonical_string(&instance_file_to_json(&f));
        let mut values = Vec::new();
        for cmd in [&["solve-convex"][..], &["solve-convex-variant"], &["brute-force"], &["solve-random", "--seed", "5"]] {
            let (code, out, err) = bimatch(cmd, &text);
            assert_eq!(code, 0, "{cmd:?}: {err}");
            let r = result(&out);
            assert_eq!(f.instance.project(&r.matching).unwrap(), r.projection, "{cmd:?}");
            values.push(r.value.unwrap());
        }
        // Exact solvers agree; the randomized one never beats them.
        assert!(values[..3].iter().all(|v| *v == values[0]));
        assert!(values[3] <= values[0]);
    }
}

#[test]
fn same_seed_same_bytes() {
    let args = ["solve-random", "--seed", "42", "--trials", "3"];
    let (c1, a, _) = bimatch(&args, EX1_JSON);
    let (c2, b, _) = bimatch(&args, EX1_JSON);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let r = result(&a);
    assert_eq!(r.seed, Some(42));
    assert_eq!(r.method, "randomized");
}

#[test]
fn stdin_dash_and_file_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ex1.json");
    std::fs::write(&path, EX1_JSON).unwrap();
    let path = path.to_str().unwrap();
    let (_, from_file, _) = bimatch(&["brute-force", path], "");
    let (_, from_dash, _) = bimatch(&["brute-force", "-"], EX1_JSON);
    let (_, from_stdin, _) = bimatch(&["brute-force"], EX1_JSON);
    assert_eq!(from_file, from_dash);
    assert_eq!(from_file, from_stdin);
    assert_eq!(result(&from_file).projection, Projection::from_i64(&[2, 4]));
}

#[test]
fn invalid_input_exits_two_and_names_the_field() {
    let cases = [
        (r#"{"n":2,"d":1,"weights":[[[1,"x"],[0,1]]]}"#, "weights[0][0][1]"),
        (r#"{"n":2,"d":1,"weights":[[[1,0],[0,1]]],"objective":{"kind":"linear","c":[1,2],"sense":"max"}}"#, "objective"),
        (r#"{"n":2,"d":1,"weights":[[[1,0],[0,1]]],"objective":{"kind":"lp_norm","p":0,"sense":"max"}}"#, "objective.p"),
        (r#"{"n":2,"d":1,"weights":[[[1,0],[0,1]]],"objective":{"kind":"linear","c":[1]}}"#, "objective.sense"),
        ("not json", ""),
    ];
    for (text, field) in cases {
        let (code, out, err) = bimatch(&["solve-convex"], text);
        assert_eq!(code, 2, "{text}: {err}");
        assert!(out.is_empty());
        assert!(err.contains(field), "{err:?} should mention {field}");
    }
    let (code, _, _) = bimatch(&["no-such-command"], "");
    assert_eq!(code, 2);
    let (code, _, err) = bimatch(&["brute-force", "/nonexistent/file.json"], "");
    assert_eq!(code, 2, "{err}");
    let (code, _, err) = bimatch(&["solve-convex", "--sense", "min"], EX1_JSON);
    assert_eq!(code, 2, "{err}");
}

#[test]
fn scale_guard_exits_three() {
    let (code, out, err) = bimatch(&["solve-random", "--seed", "1", "--cap-evals", "10"], EX1_JSON);
    assert_eq!(code, 3, "{err}");
    assert!(out.is_empty());
    let (code, _, _) = bimatch(&["decide", "--target", "2,4", "--seed", "1", "--cap-evals", "10"], EX1_JSON);
    assert_eq!(code, 3);
}

#[test]
fn decide_and_generators() {
    let (code, out, _) = bimatch(&["decide", "--target", "2,4"], EX1_JSON);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["decision"], "YES");
    let (_, out, _) = bimatch(&["decide", "--target", "3,4"], EX1_JSON);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["decision"], "NO");

    // 3 + 4 = 7, so a0 = 7 is reachable and 6 is not.
    for (a0, expect) in [("7", "YES"), ("6", "NO"), ("-0", "YES")] {
        let (code, generated, err) = bimatch(&["gen-subset-sum", "--a0", a0, "--a", "3,4,-3"], "");
        assert_eq!(code, 0, "{err}");
        let f = instance_file_from_json(&serde_json::from_str(&generated).unwrap()).unwrap();
        let target = match f.objective.as_ref().map(Objective::kind) {
            Some(bimatch::ObjectiveKind::QuadraticDistance(u)) => u.clone(),
            other => panic!("unexpected objective {other:?}"),
        };
        let target: Vec<String> = target.iter().map(|t| t.to_string()).collect();
        let (_, out, _) = bimatch(&["decide", "--target", &target.join(",")], &generated);
        assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["decision"], expect, "a0={a0}");
    }

    let (code, a, _) = bimatch(&["gen-3dm", "--random", "3", "--seed", "9"], "");
    let (_, b, _) = bimatch(&["gen-3dm", "--random", "3", "--seed", "9"], "");
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let f = instance_file_from_json(&serde_json::from_str(&a).unwrap()).unwrap();
    assert_eq!((f.instance.n(), f.instance.d()), (3, 3));
}

#[test]
fn polytope_writes_svg() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("ex1.svg");
    let (code, out, err) = bimatch(&["polytope", "--out", svg.to_str().unwrap()], EX1_JSON);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["grid_points"], 20);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") || text.starts_with("<?xml"));
    assert!(text.contains(r#"data-y1="2" data-y2="4""#));
    assert!(text.contains("hull"));

    // Three coordinates cannot be drawn.
    let d3 = r#"{"n":1,"d":3,"weights":[[[1]],[[2]],[[3]]]}"#;
    let (code, _, _) = bimatch(&["polytope", "--out", svg.to_str().unwrap()], d3);
    assert_eq!(code, 2);
}
