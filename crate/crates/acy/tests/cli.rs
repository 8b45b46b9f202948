use std::process::Command;

use acy::cells::{family_cells, CellDoc, SolveOptions};
use acy::quiver::{Family, GraphDoc};
use serde_json::Value;

fn acy(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_acy")).args(args).env("ACY_THREADS", "2").output().unwrap();
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn graphs_list_shows_support_and_symmetry() {
    let (code, out, _) = acy(&["graphs-list"]);
    assert_eq!(code, 0);
    let line = |name: &str| out.lines().find(|l| l.split_whitespace().next() == Some(name)).unwrap().to_string();
    assert!(line("E4(12)").ends_with("unsupported"));
    assert!(line("D9").ends_with("identity"));
    assert!(line("A4").contains(" 4    3 "));
}

#[test]
fn e8star_json_report_matches_the_printed_tables() {
    let (code, out, _) = acy(&["compute", "--graph", "E8*", "--cells", "builtin", "--format", "json"]);
    assert_eq!(code, 0);
    let r: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(r["schema"], "acy-report/1");
    assert_eq!(r["tables"]["hh"][0], serde_json::json!({"0": 4, "1": 2, "2": 1, "3": 1, "5": 1}));
    for key in ["d2", "duality", "exactness", "hilbert", "euler", "hh0_cross", "theorem"] {
        assert_eq!(r["checks"][key]["passed"], true, "{key}");
    }
}

#[test]
fn solved_a4_has_hh2_in_degree_three() {
    let (code, out, _) = acy(&["compute", "--graph", "A4", "--cells", "solve"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.lines().any(|l| l.trim() == "HH_2   = t^3"));
}

#[test]
fn documented_verifications_pass() {
    for args in [
        ["verify", "--graph", "A5", "--check", "duality"],
        ["verify", "--graph", "E8*", "--check", "hilbert"],
        ["verify", "--check", "euler", "--graph", "D9"],
    ] {
        let (code, out, err) = acy(&args);
        assert_eq!(code, 0, "{args:?}: {out}{err}");
        assert!(out.contains(" pass "));
    }
}

#[test]
fn zero_cells_fail_verification() {
    let cells = family_cells(Family::A(4), &SolveOptions::default()).unwrap();
    let mut doc = CellDoc::from_cells(&cells);
    for t in &mut doc.triangles {
        for c in t.weight.iter_mut().flatten() {
            *c = "0".into();
        }
    }
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    std::fs::write(&path, serde_json::to_string(&doc).unwrap()).unwrap();
    let (code, _, err) = acy(&["compute", "--graph", "A4", "--cells", path.to_str().unwrap()]);
    assert_eq!(code, 3, "{err}");
    assert!(err.contains("verification"), "{err}");
}

#[test]
fn custom_graph_file_with_solved_cells() {
    let g = Family::A(5).build().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a5.json");
    std::fs::write(&path, serde_json::to_string(&GraphDoc::from_graph(&g, false).unwrap()).unwrap()).unwrap();
    let p = path.to_str().unwrap();
    let (code, out, _) = acy(&["verify", "--graph", p, "--cells", "solve", "--check", "d2,hh0_cross"]);
    assert_eq!(code, 0, "{out}");
    let (code, _, _) = acy(&["compute", "--graph", p]);
    assert_eq!(code, 2);
}

#[test]
fn input_errors_exit_with_two() {
    assert_eq!(acy(&["compute", "--graph", "E4(12)"]).0, 2);
    assert_eq!(acy(&["compute", "--graph", "D7"]).0, 2);
    assert_eq!(acy(&["compute", "--graph", "A4", "--cutoff-degree", "5"]).0, 2);
    assert_eq!(acy(&["verify", "--graph", "A4", "--check", "nonsense"]).0, 2);
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let (code, _, _) = acy(&["compute", "--graph", "A6*", "--format", "json", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}
