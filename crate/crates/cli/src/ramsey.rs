use std::io::Write;
use std::path::PathBuf;

use dstar_core::ramsey::{ramsey_exact, Engine, RamseyOptions, RamseyResult, DEFAULT_BUDGET};
use dstar_core::DoubleStar;
use serde_json::json;

use crate::args::RamseyArgs;
use crate::output::{print_json, threads, write_output};
use crate::{exit, CmdResult, Failure, BUDGET_ENV};

/// `--budget`, else `$DSTAR_BUDGET`, else the library default.
pub fn budget(flag: Option<u64>) -> Result<u64, Failure> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::usage(format!("{BUDGET_ENV}={v:?} is not a node count"))),
        Err(_) => Ok(DEFAULT_BUDGET),
    }
}

pub fn run(a: RamseyArgs, out: &mut dyn Write) -> CmdResult {
    let s = DoubleStar::new(a.n, a.m)?;
    let opts = RamseyOptions {
        budget: budget(a.budget)?,
        threads: threads(a.threads),
        ..RamseyOptions::default()
    };
    let result = ramsey_exact(s, &opts)?;
    let path = a
        .witness
        .unwrap_or_else(|| PathBuf::from(format!("s{}_{}_witness.txt", a.n, a.m)));
    let witness = match &result {
        RamseyResult::Exact(c) => &c.witness,
        RamseyResult::Inconclusive(b) => &b.witness,
    };
    write_output(&path, &witness.to_text())?;

    let closed_form = s.closed_form_value();
    match result {
        RamseyResult::Exact(cert) => {
            if a.json {
                print_json(
                    out,
                    &json!({
                        "star": {"n": a.n, "m": a.m},
                        "status": "exact",
                        "value": cert.value,
                        "burr_bound": s.burr_bound(),
                        "closed_form": closed_form,
                        "witness_file": path.display().to_string(),
                        "witness_order": cert.witness.order(),
                        "exhaustion": cert.exhaustion,
                        "total_nodes": cert.total_nodes,
                    }),
                )?;
            } else {
                writeln!(out, "r({s}) = {}", cert.value)?;
                writeln!(out, "witness: free coloring of K_{} in {}", cert.witness.order(), path.display())?;
                let e = &cert.exhaustion;
                writeln!(
                    out,
                    "exhaustion: no free structure on {} vertices ({} engine, {} nodes, {} prunes, {} ms)",
                    e.order,
                    match e.engine {
                        Engine::Naive => "naive",
                        Engine::Reduction => "reduction",
                    },
                    e.stats.nodes, e.stats.prunes, e.wall_ms
                )?;
                writeln!(out, "total nodes: {}", cert.total_nodes)?;
                if let Some(v) = closed_form {
                    writeln!(out, "closed form: {v}")?;
                }
            }
            if closed_form.is_some_and(|v| v != cert.value) {
                return Err(Failure::internal(format!(
                    "search value {} disagrees with the closed form {}",
                    cert.value,
                    closed_form.unwrap_or(0)
                )));
            }
            Ok(exit::OK)
        }
        RamseyResult::Inconclusive(b) => {
            let upper = b.upper.as_ref().map(|u| u.to_string());
            if a.json {
                print_json(
                    out,
                    &json!({
                        "star": {"n": a.n, "m": a.m},
                        "status": "inconclusive",
                        "lower": b.lower,
                        "upper": upper,
                        "burr_bound": s.burr_bound(),
                        "closed_form": closed_form,
                        "witness_file": path.display().to_string(),
                        "witness_order": b.witness.order(),
                        "stalled_at": b.stalled_at,
                        "reason": b.reason,
                        "total_nodes": b.total_nodes,
                    }),
                )?;
            } else {
                writeln!(out, "r({s}) in [{}, {}]", b.lower, upper.as_deref().unwrap_or("?"))?;
                writeln!(out, "witness: free coloring of K_{} in {}", b.witness.order(), path.display())?;
                writeln!(out, "inconclusive: {}", b.reason)?;
                writeln!(out, "total nodes: {}", b.total_nodes)?;
            }
            Ok(exit::INCONCLUSIVE)
        }
    }
}
