use std::io::Write;
use std::path::Path;

use dstar_core::graph::io::parse_any;
use dstar_core::ramsey::{
    find_monochromatic_star, is_free_lemma22, reduction_parameters, verify_reduction_graph, Color,
};
use dstar_core::{DoubleStar, EdgeColoring, Error};
use serde_json::json;

use crate::args::VerifyArgs;
use crate::output::{print_json, read_input};
use crate::{exit, CmdResult, Failure};

pub fn run(a: VerifyArgs, out: &mut dyn Write) -> CmdResult {
    match (&a.coloring, &a.graph) {
        (Some(path), None) => {
            let (Some(n), Some(m)) = (a.n, a.m) else {
                return Err(Failure::usage("verify --coloring needs N and M"));
            };
            coloring(path, DoubleStar::new(n, m)?, a.json, out)
        }
        (None, Some(path)) => {
            let star = match (a.n, a.m) {
                (Some(n), Some(m)) => Some(DoubleStar::new(n, m)?),
                (None, None) => None,
                _ => return Err(Failure::usage("give both N and M, or neither")),
            };
            graph(path, star, a.json, out)
        }
        _ => Err(Failure::usage("give exactly one of --coloring and --graph")),
    }
}

fn color_name(c: Color) -> &'static str {
    match c {
        Color::Blue => "blue",
        Color::Red => "red",
    }
}

/// Free iff no monochromatic `S(n,m)`; where the two-condition
/// characterization applies, it must agree.
fn coloring(path: &Path, s: DoubleStar, json: bool, out: &mut dyn Write) -> CmdResult {
    let c = EdgeColoring::parse(&read_input(path)?)?;
    let star = find_monochromatic_star(&c, s);
    let free = star.is_none();
    let characterization = match is_free_lemma22(&c, s) {
        Ok(v) => Some(v),
        Err(Error::Usage(_)) => None,
        Err(e) => return Err(e.into()),
    };
    if characterization.is_some_and(|v| v != free) {
        return Err(Failure::internal(format!(
            "checkers disagree on {}: direct says {}, characterization says {}",
            path.display(),
            free,
            !free
        )));
    }
    if json {
        print_json(
            out,
            &json!({
                "order": c.order(),
                "star": {"n": s.n(), "m": s.m()},
                "free": free,
                "characterization": characterization,
                "monochromatic": star.map(|t| json!({"color": color_name(t.color), "big": t.big, "small": t.small})),
            }),
        )?;
    } else {
        match star {
            None => writeln!(out, "free: K_{} has no monochromatic {s}", c.order())?,
            Some(t) => writeln!(
                out,
                "not free: {} {s} with bridge {}-{} ({} has the {} leaves)",
                color_name(t.color),
                t.big,
                t.small,
                t.big,
                s.n()
            )?,
        }
        if characterization.is_none() {
            writeln!(out, "characterization not applicable: p < n+2m+2 = {}", s.n() + 2 * s.m() + 2)?;
        }
    }
    Ok(if free { exit::OK } else { exit::FALSE })
}

/// A graph with min degree `>= p-n-1` and edge unions `<= n+m+1` on
/// `p >= max(2n+2, n+2m+2)` vertices: its edges form a free blue class, so
/// `r(S(n,m)) > p`.
fn graph(path: &Path, star: Option<DoubleStar>, json: bool, out: &mut dyn Write) -> CmdResult {
    let g = parse_any(&read_input(path)?)?;
    let Some(s) = star.or_else(|| reduction_parameters(&g)) else {
        if json {
            print_json(out, &json!({"order": g.order(), "star": null, "satisfied": false}))?;
        } else {
            writeln!(out, "no double star: the graph's degrees and unions fit no S(n,m) with p >= max(2n+2, n+2m+2)")?;
        }
        return Ok(exit::FALSE);
    };
    let verdict = verify_reduction_graph(&g, s);
    let reason = match &verdict {
        Ok(()) => None,
        Err(Error::Validation(msg)) => Some(msg.clone()),
        Err(e) => return Err(Failure::internal(e.to_string())),
    };
    if json {
        print_json(
            out,
            &json!({
                "order": g.order(),
                "star": {"n": s.n(), "m": s.m()},
                "satisfied": reason.is_none(),
                "reason": reason,
                "ramsey_lower_bound": reason.is_none().then(|| g.order() + 1),
                "burr_bound": s.burr_bound(),
            }),
        )?;
    } else {
        match &reason {
            None => {
                writeln!(out, "satisfied: r({s}) >= {}", g.order() + 1)?;
                writeln!(out, "burr bound: {}", s.burr_bound())?;
            }
            Some(msg) => writeln!(out, "not satisfied for {s}: {msg}")?,
        }
    }
    Ok(if reason.is_none() { exit::OK } else { exit::FALSE })
}
