use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use dstar_core::graph::io::to_text;
use dstar_core::scalar::rat;
use dstar_core::validity::{
    cinf_upper, classify_point, family_point, frontier_search, Family, PointStatus, Provenance, ValidPoint,
};
use dstar_core::Profile;
use serde_json::{json, Value};

use crate::args::{FamilyArg, ValidityArgs};
use crate::output::{dec, emit, frac, print_json, profile_json, threads, write_output};
use crate::{exit, CmdResult, Failure};

pub const CSV_HEADER: &str = "delta,eta,provenance,witness-file";

pub fn run(a: ValidityArgs, out: &mut dyn Write) -> CmdResult {
    if let Some(order) = a.frontier {
        return frontier(order, a.out, threads(a.threads), a.json, out);
    }
    if let Some(f) = a.family {
        return family_curve(f, a.steps, a.out, out);
    }
    if a.cinf {
        return cinf(a.json, out);
    }
    if let Some(pt) = a.check {
        let point = Profile::new(pt[0].clone(), pt[1].clone());
        return check(&point, a.json, out);
    }
    Err(Failure::usage("choose one of --frontier, --family, --cinf, --check"))
}

fn provenance_text(p: &Provenance) -> String {
    match p {
        Provenance::Measured(g) => format!("measured:order={}", g.order()),
        Provenance::Family { family, p } => format!("family:{}:p={}", family.name(), frac(p)),
        Provenance::Sparsified { base_order, p } => format!("sparsified:n={base_order}:p={}", frac(p)),
        Provenance::Derived(what) => format!("derived:{what}"),
    }
}

fn frontier(order: usize, dir: Option<PathBuf>, threads: usize, json: bool, out: &mut dyn Write) -> CmdResult {
    let points = frontier_search(order, threads)?;
    let dir = dir.unwrap_or_else(|| PathBuf::from("."));
    std::fs::create_dir_all(&dir).map_err(|e| Failure::internal(format!("cannot create {}: {e}", dir.display())))?;
    let mut csv = format!("{CSV_HEADER}\n");
    let mut listed = Vec::new();
    for (i, f) in points.iter().enumerate() {
        let v = f.valid_point();
        v.verify()?;
        let file = format!("frontier-{order}-{i}.txt");
        write_output(&dir.join(&file), &to_text(&f.witness))?;
        let _ = writeln!(csv, "{},{},{},{file}", frac(&v.point.delta), frac(&v.point.eta), provenance_text(&v.provenance));
        listed.push(json!({"profile": profile_json(&f.profile), "witness_file": file}));
    }
    let csv_path = dir.join(format!("frontier-{order}.csv"));
    write_output(&csv_path, &csv)?;
    if json {
        print_json(out, &json!({"order": order, "csv": csv_path.display().to_string(), "points": listed}))?;
    } else {
        writeln!(out, "{} Pareto-maximal profiles on {order} vertices -> {}", points.len(), csv_path.display())?;
        for f in &points {
            writeln!(out, "  {}", f.profile)?;
        }
    }
    Ok(exit::OK)
}

fn family_curve(f: FamilyArg, steps: u32, path: Option<PathBuf>, out: &mut dyn Write) -> CmdResult {
    let family = match f {
        FamilyArg::C5 => Family::C5,
        FamilyArg::Lk7 => Family::LK7,
    };
    let mut csv = format!("{CSV_HEADER}\n");
    for i in 0..=steps {
        let p = rat(i as i64, steps as i64);
        let v = family_point(family, &p)?;
        let _ = writeln!(csv, "{},{},{},", frac(&v.point.delta), frac(&v.point.eta), provenance_text(&v.provenance));
    }
    emit(path.as_deref(), &csv, out)?;
    if let Some(p) = path {
        writeln!(out, "wrote {} points of the {} family to {}", steps + 1, family.name(), p.display())?;
    }
    Ok(exit::OK)
}

fn cinf(json: bool, out: &mut dyn Write) -> CmdResult {
    let (c, p) = cinf_upper();
    if json {
        print_json(out, &json!({"c": frac(&c), "c_dec": dec(&c), "p": frac(&p), "family": "lk7"}))?;
    } else {
        writeln!(out, "c_inf <= {} ~ {} at p = {} (sparsified L(K7) family)", frac(&c), dec(&c), frac(&p))?;
    }
    Ok(exit::OK)
}

fn valid_json(v: &ValidPoint) -> Value {
    json!({"point": profile_json(&v.point), "provenance": provenance_text(&v.provenance)})
}

fn check(point: &Profile, json: bool, out: &mut dyn Write) -> CmdResult {
    let status = classify_point(point)?;
    let (word, detail): (&str, Value) = match &status {
        PointStatus::Valid(v) => ("valid-witness", valid_json(v)),
        PointStatus::InvalidByTable(row) => ("invalid-by-table", json!({ "row": row })),
        PointStatus::Unknown => ("unknown", Value::Null),
    };
    if json {
        print_json(out, &json!({"point": profile_json(point), "status": word, "detail": detail}))?;
    } else {
        match &status {
            PointStatus::Valid(v) => writeln!(out, "{word}: dominated by {} ({})", v.point, provenance_text(&v.provenance))?,
            PointStatus::InvalidByTable(row) => writeln!(out, "{word} (row {row})")?,
            PointStatus::Unknown => writeln!(out, "{word}")?,
        }
    }
    Ok(exit::OK)
}
