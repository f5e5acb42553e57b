use std::io::Write;
use std::path::{Path, PathBuf};

use dstar_core::graph::io::{parse_any, to_graph6, to_text};
use dstar_core::graph::{sparsified_blowup, BlowupSpec, RegularBaseSpec};
use dstar_core::ramsey::{burr_witnesses, is_free_direct, reduction_parameters, verify_reduction_graph};
use dstar_core::validity::sparsify_point;
use dstar_core::{DoubleStar, Graph, Profile, Rational};
use num_traits::ToPrimitive;
use serde_json::{json, Value};

use crate::args::{ConstructArgs, GraphFormat, Kind};
use crate::output::{frac, print_json, profile_json, read_input, write_output};
use crate::{exit, CmdResult, Failure};

/// Finite-scale slack for a sparsified blow-up with blobs of size `k` over
/// an `n`-vertex base: `3 sqrt(ln(kn) / k)`.
pub fn epsilon(k: usize, n: usize) -> f64 {
    let k = k as f64;
    3.0 * ((k * n as f64).ln() / k).sqrt()
}

pub fn run(a: ConstructArgs, out: &mut dyn Write) -> CmdResult {
    match a.kind {
        Kind::Burr => burr(a, out),
        Kind::Blowup | Kind::Sparsified => blowup(a, out),
    }
}

fn reject(present: bool, flag: &str, kind: &str) -> Result<(), Failure> {
    if present {
        return Err(Failure::usage(format!("{flag} does not apply to --kind {kind}")));
    }
    Ok(())
}

fn burr(a: ConstructArgs, out: &mut dyn Write) -> CmdResult {
    reject(a.base.is_some(), "--base", "burr")?;
    reject(a.k.is_some(), "--k", "burr")?;
    reject(a.p.is_some(), "--p", "burr")?;
    reject(a.seed.is_some(), "--seed", "burr")?;
    reject(a.format != GraphFormat::Text, "--format", "burr")?;
    let (Some(n), Some(m)) = (a.n, a.m) else {
        return Err(Failure::usage("--kind burr needs --n and --m"));
    };
    let s = DoubleStar::new(n, m)?;
    let stem = a
        .out
        .map(|p| p.with_extension(""))
        .unwrap_or_else(|| PathBuf::from(format!("burr-s{n}-{m}")));
    let mut files = Vec::new();
    for c in burr_witnesses(s) {
        let free = is_free_direct(&c, s);
        if !free {
            return Err(Failure::internal(format!("Burr coloring of K_{} is not free for {s}", c.order())));
        }
        let path = PathBuf::from(format!("{}-k{}.txt", stem.display(), c.order()));
        write_output(&path, &c.to_text())?;
        files.push(json!({"file": path.display().to_string(), "order": c.order(), "free": free}));
    }
    let report = json!({
        "kind": "burr",
        "star": {"n": n, "m": m},
        "burr_bound": s.burr_bound(),
        "colorings": files,
    });
    let report_path = stem.with_extension("report.json");
    write_output(&report_path, &pretty(&report)?)?;
    if a.json {
        print_json(out, &report)?;
    } else {
        for f in report["colorings"].as_array().into_iter().flatten() {
            writeln!(out, "wrote {} (free coloring of K_{})", f["file"].as_str().unwrap_or(""), f["order"])?;
        }
        writeln!(out, "burr bound: r({s}) >= {}", s.burr_bound())?;
        writeln!(out, "report: {}", report_path.display())?;
    }
    Ok(exit::OK)
}

fn pretty(v: &Value) -> Result<String, Failure> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Failure::internal(e.to_string()))
}

/// `c5`, `lk7` or a graph file; the name is used in default file names.
fn load_base(spec: &str) -> Result<(Graph, String), Failure> {
    match spec {
        "c5" => Ok((RegularBaseSpec::c5().graph, "c5".into())),
        "lk7" => Ok((RegularBaseSpec::lk7().graph, "lk7".into())),
        file => {
            let path = Path::new(file);
            let g = parse_any(&read_input(path)?)?;
            let name = path.file_stem().map_or("base".into(), |s| s.to_string_lossy().into_owned());
            Ok((g, name))
        }
    }
}

fn blowup(a: ConstructArgs, out: &mut dyn Write) -> CmdResult {
    let sparse = a.kind == Kind::Sparsified;
    let kind = if sparse { "sparsified" } else { "blowup" };
    reject(a.n.is_some(), "--n", kind)?;
    reject(a.m.is_some(), "--m", kind)?;
    if !sparse {
        reject(a.p.is_some(), "--p", kind)?;
        reject(a.seed.is_some(), "--seed", kind)?;
    }
    let base_spec = a.base.as_deref().ok_or_else(|| Failure::usage(format!("--kind {kind} needs --base")))?;
    let k = a.k.ok_or_else(|| Failure::usage(format!("--kind {kind} needs --k")))?;
    if k == 0 {
        return Err(Failure::usage("--k must be at least 1"));
    }
    let (base, name) = load_base(base_spec)?;

    let (g, predicted, eps, p, seed) = if sparse {
        let p = a.p.clone().ok_or_else(|| Failure::usage("--kind sparsified needs --p"))?;
        let seed = a.seed.unwrap_or(0);
        let spec = RegularBaseSpec::from_graph(base)?;
        let predicted = sparsify_point(&spec, &p)?.point;
        let n = spec.n;
        let g = sparsified_blowup(&BlowupSpec::new(spec, k, p.clone(), seed)?)?;
        (g, predicted, epsilon(k, n), Some(p), Some(seed))
    } else {
        // Blobs are cliques and edges become complete bipartite graphs, so
        // the profile of the base carries over (when the base has an edge).
        let predicted = base.measure_profile()?;
        (base.blowup(k)?, predicted, 0.0, None, None)
    };

    let ext = match a.format {
        GraphFormat::Text => "txt",
        GraphFormat::Graph6 => "g6",
    };
    let path = a.out.clone().unwrap_or_else(|| {
        let seed_part = seed.map_or(String::new(), |s| format!("-s{s}"));
        PathBuf::from(format!("{kind}-{name}-k{k}{seed_part}.{ext}"))
    });
    let body = match a.format {
        GraphFormat::Text => to_text(&g),
        GraphFormat::Graph6 => to_graph6(&g) + "\n",
    };
    write_output(&path, &body)?;

    let counts = g.profile_counts();
    let measured = counts.profile();
    let gap = |x: &Rational, y: &Rational| (x - y).to_f64().unwrap_or(f64::INFINITY).abs();
    let within = gap(&measured.delta, &predicted.delta) <= eps && gap(&measured.eta, &predicted.eta) <= eps;
    let ramsey = ramsey_consequence(&g)?;
    let report = json!({
        "kind": kind,
        "base": name,
        "k": k,
        "p": p.as_ref().map(frac),
        "seed": seed,
        "file": path.display().to_string(),
        "order": g.order(),
        "edges": g.edge_count(),
        "min_degree": counts.min_degree,
        "max_union": counts.max_union,
        "measured": profile_json(&measured),
        "predicted": profile_json(&predicted),
        "epsilon": eps,
        "within_epsilon": within,
        "ramsey": ramsey,
    });
    let report_path = path.with_extension("report.json");
    write_output(&report_path, &pretty(&report)?)?;
    if a.json {
        print_json(out, &report)?;
    } else {
        print_summary(out, &report, &measured, &predicted, &report_path)?;
    }
    Ok(exit::OK)
}

fn print_summary(out: &mut dyn Write, r: &Value, measured: &Profile, predicted: &Profile, report: &Path) -> Result<(), Failure> {
    writeln!(out, "wrote {} ({} vertices, {} edges)", r["file"].as_str().unwrap_or(""), r["order"], r["edges"])?;
    writeln!(out, "measured  (delta, eta) = {measured} ~ ({}, {})", r["measured"]["delta_dec"].as_str().unwrap_or(""), r["measured"]["eta_dec"].as_str().unwrap_or(""))?;
    writeln!(out, "predicted (delta, eta) = {predicted} ~ ({}, {})", r["predicted"]["delta_dec"].as_str().unwrap_or(""), r["predicted"]["eta_dec"].as_str().unwrap_or(""))?;
    writeln!(out, "within epsilon {:.6}: {}", r["epsilon"].as_f64().unwrap_or(0.0), r["within_epsilon"])?;
    let ram = &r["ramsey"];
    if ram.is_null() {
        writeln!(out, "ramsey: the graph certifies no S(n,m) lower bound")?;
    } else {
        writeln!(
            out,
            "ramsey: r(S({},{})) >= {} (burr bound {})",
            ram["n"], ram["m"], ram["lower_bound"], ram["burr_bound"]
        )?;
    }
    writeln!(out, "report: {}", report.display())?;
    Ok(())
}

/// The double star whose Ramsey number the graph bounds from below, after
/// re-verifying the degree and union conditions.
fn ramsey_consequence(g: &Graph) -> Result<Value, Failure> {
    let Some(s) = reduction_parameters(g) else {
        return Ok(Value::Null);
    };
    verify_reduction_graph(g, s).map_err(|e| Failure::internal(format!("derived parameters do not verify: {e}")))?;
    let lower = g.order() + 1;
    Ok(json!({
        "n": s.n(),
        "m": s.m(),
        "lower_bound": lower,
        "burr_bound": s.burr_bound(),
        "exceeds_burr": lower > s.burr_bound(),
    }))
}
