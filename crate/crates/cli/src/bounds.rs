use std::io::Write;

use dstar_core::bounds::{
    bound_row, bound_table, optimal_family_bound, rhat_l_sqrt_tight, table_csv, BoundRow,
};
use dstar_core::plot::figure;
use num_traits::ToPrimitive;
use serde_json::json;

use crate::args::BoundsArgs;
use crate::output::{dec, emit, frac, print_json};
use crate::{exit, CmdResult, Failure};

pub fn run(a: BoundsArgs, out: &mut dyn Write) -> CmdResult {
    if let Some(n) = a.figure {
        let svg = figure(n)?;
        emit(a.out.as_deref(), &svg, out)?;
        if let Some(p) = &a.out {
            writeln!(out, "wrote figure {n} to {}", p.display())?;
        }
        return Ok(exit::OK);
    }
    if let Some(x) = &a.eval {
        return eval(x, a.json, out);
    }
    let rows = bound_table(&a.x_min, &a.x_max, &a.step)?;
    let csv = table_csv(&rows);
    emit(a.out.as_deref(), &csv, out)?;
    if let Some(p) = &a.out {
        let worst = rows
            .iter()
            .max_by(|a, b| a.ratio.cmp(&b.ratio))
            .ok_or_else(|| Failure::internal("empty table"))?;
        writeln!(
            out,
            "wrote {} rows to {}; max rhat_u/rhat_l = {} at x = {}",
            rows.len(),
            p.display(),
            dec(&worst.ratio),
            frac(&worst.x)
        )?;
    }
    Ok(exit::OK)
}

fn eval(x: &dstar_core::Rational, json: bool, out: &mut dyn Write) -> CmdResult {
    let BoundRow {
        rhat_l,
        rhat_u,
        rhat_star_l,
        ratio,
        argmin_row,
        ..
    } = bound_row(x)?;
    let family = optimal_family_bound(x)?;
    let xf = x.to_f64().unwrap_or(f64::NAN);
    let tight = if xf >= 2.0 { Some(rhat_l_sqrt_tight(xf)?) } else { None };
    if json {
        return print_json(
            out,
            &json!({
                "x": frac(x),
                "rhat_l": frac(&rhat_l),
                "rhat_l_dec": dec(&rhat_l),
                "rhat_u": frac(&rhat_u),
                "rhat_u_dec": dec(&rhat_u),
                "rhat_u_row": argmin_row,
                "rhat_star_l": frac(&rhat_star_l),
                "ratio": frac(&ratio),
                "ratio_dec": dec(&ratio),
                "sqrt_tight": tight,
                "family_bound": family,
            }),
        )
        .map(|_| exit::OK);
    }
    writeln!(out, "x           = {}", frac(x))?;
    writeln!(out, "rhat_l      = {} ~ {}", frac(&rhat_l), dec(&rhat_l))?;
    writeln!(out, "rhat_u      = {} ~ {} (row {argmin_row})", frac(&rhat_u), dec(&rhat_u))?;
    writeln!(out, "rhat*_l     = {} ~ {}", frac(&rhat_star_l), dec(&rhat_star_l))?;
    writeln!(out, "ratio       = {}", dec(&ratio))?;
    if let Some(t) = tight {
        writeln!(out, "sqrt bound  = {t:.12}")?;
    }
    writeln!(
        out,
        "families    = {} ~ {} ({} at p = {})",
        frac(&family.r),
        dec(&family.r),
        family.family.name(),
        frac(&family.p)
    )?;
    Ok(exit::OK)
}
