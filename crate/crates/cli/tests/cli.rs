use std::path::Path;
use std::process::Command;

use dstar_cli::{exit, run_with};
use dstar_core::graph::io::parse_any;
use dstar_core::{EdgeColoring, Graph};
use serde_json::Value;

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn dstar(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["dstar"];
    full.extend_from_slice(args);
    let code = run_with(full, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn ramsey_reports_value_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    let r = dstar(&["ramsey", "3", "3", "--witness", path_str(&w)]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    assert!(r.out.contains("r(S(3,3)) = 11"), "{}", r.out);
    let c = EdgeColoring::parse(&std::fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(c.order(), 10);
    let v = dstar(&["verify", "--coloring", path_str(&w), "3", "3"]);
    assert_eq!(v.code, exit::OK, "{}", v.out);

    let r = dstar(&["ramsey", "1", "1", "--witness", path_str(&w), "--json"]);
    let j: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(j["status"], "exact");
    assert_eq!(j["value"], 5);
    assert_eq!(j["witness_order"], 4);
    assert_eq!(j["exhaustion"]["order"], 5);
}

#[test]
fn ramsey_budget_gives_bracket() {
    let dir = tempfile::tempdir().unwrap();
    let w = dir.path().join("w.txt");
    let r = dstar(&["ramsey", "20", "10", "--budget", "1000", "--witness", path_str(&w)]);
    assert_eq!(r.code, exit::INCONCLUSIVE);
    assert!(r.out.contains("in [42,"), "{}", r.out);
    assert_eq!(dstar(&["ramsey", "1", "3"]).code, exit::USAGE);
    assert_eq!(dstar(&["ramsey", "3", "3", "--threads", "0"]).code, exit::USAGE);
}

#[test]
fn budget_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let bin = env!("CARGO_BIN_EXE_dstar");
    let status = Command::new(bin)
        .args(["ramsey", "20", "10"])
        .env("DSTAR_BUDGET", "1000")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(exit::INCONCLUSIVE));
    assert!(dir.path().join("s20_10_witness.txt").exists());
    let bad = Command::new(bin)
        .args(["ramsey", "1", "1"])
        .env("DSTAR_BUDGET", "lots")
        .current_dir(dir.path())
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(exit::USAGE));
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(dstar(&["--help"]).code, exit::OK);
    assert_eq!(dstar(&["--version"]).code, exit::OK);
    assert_eq!(dstar(&[]).code, exit::USAGE);
    assert_eq!(dstar(&["frobnicate"]).code, exit::USAGE);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let mono = dir.path().join("k8.txt");
    std::fs::write(&mono, EdgeColoring::new(Graph::complete(8).unwrap()).to_text()).unwrap();
    let r = dstar(&["verify", "--coloring", path_str(&mono), "2", "2"]);
    assert_eq!(r.code, exit::FALSE, "{}", r.out);
    assert!(r.out.starts_with("not free"));

    let truncated = dir.path().join("t.txt");
    std::fs::write(&truncated, "p 5\n0 ").unwrap();
    assert_eq!(dstar(&["verify", "--coloring", path_str(&truncated), "1", "1"]).code, exit::DATA);
    let missing = dir.path().join("nope.txt");
    assert_eq!(dstar(&["verify", "--coloring", path_str(&missing), "1", "1"]).code, exit::DATA);
    assert_eq!(dstar(&["verify", "--coloring", path_str(&mono)]).code, exit::USAGE);

    let red_star = dir.path().join("m.txt");
    std::fs::write(&red_star, "p 4\n0 3\n1 3\n2 3\n").unwrap();
    let r = dstar(&["verify", "--coloring", path_str(&red_star), "1", "1", "--json"]);
    assert_eq!(r.code, exit::OK);
    let j: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(j["free"], true);
}

#[test]
fn burr_construction_files_verify() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("burr");
    let r = dstar(&["construct", "--kind", "burr", "--n", "3", "--m", "3", "--out", path_str(&stem)]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    for order in [10, 6] {
        let f = dir.path().join(format!("burr-k{order}.txt"));
        let v = dstar(&["verify", "--coloring", path_str(&f), "3", "3"]);
        assert_eq!(v.code, exit::OK, "{}", v.out);
    }
    let report: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("burr.report.json")).unwrap()).unwrap();
    assert_eq!(report["colorings"].as_array().unwrap().len(), 2);
    assert_eq!(dstar(&["construct", "--kind", "burr", "--n", "3", "--m", "3", "--k", "2"]).code, exit::USAGE);
    assert_eq!(dstar(&["construct", "--kind", "burr", "--n", "3"]).code, exit::USAGE);
}

#[test]
fn blowup_constructions_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c5.txt");
    let r = dstar(&["construct", "--kind", "blowup", "--base", "c5", "--k", "1", "--out", path_str(&out)]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    assert_eq!(parse_any(&std::fs::read_to_string(&out).unwrap()).unwrap(), Graph::cycle(5).unwrap());

    // A file base in graph6, sparsified at full density, equals the blow-up.
    let g6 = dir.path().join("lk3.g6");
    let r = dstar(&[
        "construct", "--kind", "blowup", "--base", "lk7", "--k", "2", "--format", "graph6", "--out", path_str(&g6),
    ]);
    assert_eq!(r.code, exit::OK);
    let sp = dir.path().join("sp.txt");
    let r = dstar(&[
        "construct", "--kind", "sparsified", "--base", "lk7", "--k", "2", "--p", "1", "--seed", "4", "--out",
        path_str(&sp), "--json",
    ]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    let j: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(j["measured"]["delta"], "11/21");
    assert_eq!(j["predicted"]["eta"], "2/7");
    assert_eq!(j["within_epsilon"], true);
    let a = parse_any(&std::fs::read_to_string(&g6).unwrap()).unwrap();
    let b = parse_any(&std::fs::read_to_string(&sp).unwrap()).unwrap();
    assert_eq!(a, b);
    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("sp.report.json")).unwrap()).unwrap();
    assert_eq!(sidecar, j);

    let nonregular = dir.path().join("path.txt");
    std::fs::write(&nonregular, "p 3\n0 1\n1 2\n").unwrap();
    let r = dstar(&["construct", "--kind", "sparsified", "--base", path_str(&nonregular), "--k", "2", "--p", "1/2"]);
    assert_eq!(r.code, exit::DATA, "{}", r.err);
    assert_eq!(dstar(&["construct", "--kind", "sparsified", "--base", "c5", "--k", "2"]).code, exit::USAGE);
    assert_eq!(dstar(&["construct", "--kind", "blowup", "--base", "c5", "--k", "1", "--seed", "3"]).code, exit::USAGE);
    assert_eq!(dstar(&["construct", "--kind", "blowup", "--base", "c5", "--k", "0"]).code, exit::USAGE);
}

#[test]
fn verify_graph_mode_derives_the_star() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.txt");
    let r = dstar(&["construct", "--kind", "blowup", "--base", "lk7", "--k", "3", "--out", path_str(&out)]);
    assert_eq!(r.code, exit::OK);
    let v = dstar(&["verify", "--graph", path_str(&out), "--json"]);
    assert_eq!(v.code, exit::OK, "{}", v.out);
    let j: Value = serde_json::from_str(&v.out).unwrap();
    assert_eq!((j["star"]["n"].as_u64(), j["star"]["m"].as_u64()), (Some(30), Some(14)));
    assert_eq!(j["ramsey_lower_bound"], 64);
    // Asking for a smaller star than the graph supports fails the degree test.
    assert_eq!(dstar(&["verify", "--graph", path_str(&out), "20", "14"]).code, exit::FALSE);
}

#[test]
fn bounds_eval_table_and_figures() {
    let r = dstar(&["bounds", "--eval", "2"]);
    assert_eq!(r.code, exit::OK);
    assert!(r.out.contains("21/5") && r.out.contains("30000/7117"), "{}", r.out);
    let j: Value = serde_json::from_str(&dstar(&["bounds", "--eval", "7/4", "--json"]).out).unwrap();
    assert_eq!(j["rhat_l"], "15/4");
    assert_eq!(j["family_bound"]["p"], "5/6");

    let t = dstar(&["bounds", "--table", "--x-min", "1", "--x-max", "4", "--step", "1/1000"]);
    assert_eq!(t.code, exit::OK);
    let lines: Vec<_> = t.out.lines().collect();
    assert_eq!(lines.len(), 3002);
    assert!(lines[0].starts_with("x,x_dec,rhat_l"));
    assert!(lines[1001].starts_with("2/1,2.000000000000,21/5,"), "{}", lines[1001]);
    assert_eq!(dstar(&["bounds", "--table", "--x-min", "0.5"]).code, exit::USAGE);
    assert_eq!(dstar(&["bounds", "--table", "--step", "0"]).code, exit::USAGE);
    assert_eq!(dstar(&["bounds", "--table", "--x-min", "3", "--x-max", "2"]).code, exit::USAGE);
    assert_eq!(dstar(&["bounds", "--eval", "x"]).code, exit::USAGE);

    let dir = tempfile::tempdir().unwrap();
    for n in ["1", "2", "3"] {
        let a = dir.path().join(format!("a{n}.svg"));
        let b = dir.path().join(format!("b{n}.svg"));
        assert_eq!(dstar(&["bounds", "--figure", n, "--out", path_str(&a)]).code, exit::OK);
        assert_eq!(dstar(&["bounds", "--figure", n, "--out", path_str(&b)]).code, exit::OK);
        let svg = std::fs::read(&a).unwrap();
        assert_eq!(svg, std::fs::read(&b).unwrap(), "figure {n} is not deterministic");
        assert!(svg.starts_with(b"<svg"));
    }
    let f2 = std::fs::read_to_string(dir.path().join("a2.svg")).unwrap();
    assert_eq!(f2.matches("<polyline").count(), 3);
    assert_eq!(dstar(&["bounds", "--figure", "4"]).code, exit::USAGE);
}

#[test]
fn validity_modes() {
    let r = dstar(&["validity", "--cinf"]);
    assert!(r.out.contains("389/560") && r.out.contains("19/20"), "{}", r.out);
    assert_eq!(dstar(&["validity", "--check", "0.5406", "0.2703"]).out.trim(), "invalid-by-table (row 9)");
    assert_eq!(dstar(&["validity", "--check", "0.52", "0.29"]).out.trim(), "unknown");
    assert!(dstar(&["validity", "--check", "0.4", "0.4"]).out.starts_with("valid-witness"));
    assert_eq!(dstar(&["validity", "--check", "2", "0.4"]).code, exit::USAGE);
    assert_eq!(dstar(&["validity", "--frontier", "11"]).code, exit::USAGE);
    assert_eq!(dstar(&["validity"]).code, exit::USAGE);

    let fam = dstar(&["validity", "--family", "c5", "--steps", "2"]);
    assert_eq!(fam.out, "delta,eta,provenance,witness-file\n1/5,3/5,family:c5:p=0/1,\n2/5,2/5,family:c5:p=1/2,\n3/5,1/5,family:c5:p=1/1,\n");
}

#[test]
fn frontier_csv_and_witnesses_read_back() {
    let dir = tempfile::tempdir().unwrap();
    let r = dstar(&["validity", "--frontier", "6", "--out", path_str(dir.path())]);
    assert_eq!(r.code, exit::OK, "{}", r.err);
    let csv = std::fs::read_to_string(dir.path().join("frontier-6.csv")).unwrap();
    let mut rows = csv.lines();
    assert_eq!(rows.next(), Some("delta,eta,provenance,witness-file"));
    let mut count = 0;
    for row in rows {
        let cols: Vec<_> = row.split(',').collect();
        let g = parse_any(&std::fs::read_to_string(dir.path().join(cols[3])).unwrap()).unwrap();
        let p = g.measure_profile().unwrap();
        assert_eq!(format!("{}/{}", p.delta.numer(), p.delta.denom()), cols[0]);
        assert_eq!(format!("{}/{}", p.eta.numer(), p.eta.denom()), cols[1]);
        count += 1;
    }
    assert!(count >= 3);
}
