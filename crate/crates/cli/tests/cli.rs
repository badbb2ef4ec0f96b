use std::path::PathBuf;
use std::process::Command;

use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn folia(args: &[&str]) -> Run {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = folia_cli::run(
        std::iter::once("folia").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    Run {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn file(dir: &TempDir, name: &str, body: &str) -> String {
    let p: PathBuf = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

const NESTED: &str = "(strip (int (cyc (strip (int (cyc _))) _)))";

#[test]
fn group_normalize_of_a_cycle_is_z() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "a.strip", "(strip (int (cyc _)))");
    let r = folia(&["group", &f, "--normalize"]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "Z\n"));
}

#[test]
fn eta_on_a_finite_strip_is_trivial() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "a.strip", "(strip (fin _ _))");
    let r = folia(&["eta", &f]);
    assert_eq!((r.code, r.stdout.as_str()), (0, "trivial\n"));
    let f = file(&d, "b.strip", NESTED);
    assert_eq!(folia(&["eta", &f]).stdout, "period 2\n");
}

#[test]
fn group_height_of_nested_cycles() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "a.strip", NESTED);
    let r = folia(&["group", &f, "--normalize", "--height"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "(wr Z)\nheight 2\n");
    let raw = folia(&["group", &f, "--height"]);
    assert_eq!(raw.stdout, "(wr (x Z 1))\nheight 3\n");
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    let ok = file(&d, "ok.strip", "(strip (fin))");
    let bad_cycle = file(&d, "bad.strip", "(strip (int (cyc)))");
    let syntax = file(&d, "syn.strip", "(strip (fin");
    assert_eq!(folia(&["validate", &ok]).code, 0);
    let r = folia(&["validate", &bad_cycle]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("bad.strip"));
    let r = folia(&["canon", &syntax]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains(":1:"), "{}", r.stderr);
    assert_eq!(folia(&["diameter", "/nonexistent/file"]).code, 2);
    assert_eq!(folia(&["frobnicate"]).code, 2);
    assert_eq!(folia(&["--help"]).code, 0);
}

#[test]
fn surface_commands() {
    let d = TempDir::new().unwrap();
    let f = file(
        &d,
        "a.strip",
        "(strip (fin (strip (fin (strip (int (cyc _ _)))))))",
    );
    assert_eq!(folia(&["canon", &f]).stdout, "(strip (int (cyc _)))\n");
    assert_eq!(folia(&["reduce", &f]).stdout, "(strip (int (cyc _ _)))\n");
    assert_eq!(folia(&["diameter", &f]).stdout, "2\n");
    let fig = file(
        &d,
        "fig.strip",
        "(strip (fin (strip (fin (strip (fin)) (strip (fin)))) (strip (fin))))",
    );
    assert_eq!(folia(&["diameter", &fig]).stdout, "3\n");
}

#[test]
fn render_draws_one_rect_per_strip() {
    let d = TempDir::new().unwrap();
    for (body, rects) in [
        ("(strip (fin))", 1),
        ("(strip (fin (strip (fin)) (strip (fin))))", 3),
        ("(strip (int (cyc (strip (fin)))))", 4),
    ] {
        let f = file(&d, "a.strip", body);
        let out = d.path().join("a.svg");
        let r = folia(&["render", &f, "-o", out.to_str().unwrap()]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let svg = std::fs::read_to_string(&out).unwrap();
        assert!(svg.starts_with("<?xml"));
        assert_eq!(
            svg.matches(r#"<rect class="strip""#).count(),
            rects,
            "{body}"
        );
    }
    let f = file(&d, "a.strip", "(strip (fin))");
    assert_eq!(
        folia(&["render", &f, "-o", "x.svg", "--repeat", "0"]).code,
        2
    );
}

#[test]
fn realize_then_group_round_trips() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "g.group", "(wr (x Z 1))");
    let r = folia(&["realize", &g]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    let s = file(&d, "r.strip", &r.stdout);
    assert_eq!(folia(&["group", &s, "--normalize"]).stdout, "(wr Z)\n");
}

#[test]
fn element_arithmetic() {
    let d = TempDir::new().unwrap();
    let g = file(&d, "g.group", "(wr Z)");
    let r = folia(&["elem", "mul", &g, "(w ((0 (w () 1))) 1)", "(w () 2)"]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert_eq!(r.stdout, "(w ((-2 (w () 1))) 3)\n");
    let r = folia(&["elem", "inv", &g, "(w ((0 (w () 1))) 1)"]);
    assert_eq!(r.stdout, "(w ((1 (w () -1))) -1)\n");
    assert_eq!(folia(&["elem", "inv", &g, "e"]).stdout, "(w () 0)\n");
    assert_eq!(folia(&["elem", "inv", &g, "(p (1 e))"]).code, 1);
    assert_eq!(folia(&["elem", "inv", &g, "(w (("]).code, 2);
}

#[test]
fn json_output() {
    let d = TempDir::new().unwrap();
    let f = file(&d, "a.strip", NESTED);
    let r = folia(&["--json", "group", &f, "--normalize", "--height"]);
    let v: serde_json::Value = serde_json::from_str(r.stdout.trim()).unwrap();
    assert_eq!(v["v"], "folia/1");
    assert_eq!(v["height"], 2);
    let canon = folia(&["canon", &f, "--json"]);
    let j = file(&d, "a.json", &canon.stdout);
    assert_eq!(folia(&["canon", &j]).stdout, folia(&["canon", &f]).stdout);
}

#[test]
fn selftest_is_deterministic() {
    let a = folia(&["selftest", "--seed", "7", "--iters", "50"]);
    let b = folia(&["selftest", "--seed", "7", "--iters", "50"]);
    assert_eq!(a.code, 0, "{}", a.stdout);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout.lines().filter(|l| l.ends_with(" ok")).count(), 7);
}

#[test]
fn binary_exit_status() {
    let d = TempDir::new().unwrap();
    let f = file(
        &d,
        "bad.strip",
        "(strip (int (sup (0 (strip (fin))) (0 (strip (fin))))))",
    );
    let status = Command::new(env!("CARGO_BIN_EXE_folia"))
        .args(["validate", &f])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}
