use std::io::Write;
use std::path::Path;

use dstar_core::scalar::{to_decimal, to_fraction};
use dstar_core::{Profile, Rational};
use serde_json::{json, Value};

use crate::Failure;

pub fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::data(format!("cannot read {}: {e}", path.display())))
}

pub fn write_output(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::internal(format!("cannot write {}: {e}", path.display())))
}

/// Writes `contents` to `path`, or to `out` when no path is given.
pub fn emit(path: Option<&Path>, contents: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => write_output(p, contents),
        None => Ok(out.write_all(contents.as_bytes())?),
    }
}

pub fn print_json(out: &mut dyn Write, value: &Value) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::internal(e.to_string()))?;
    writeln!(out, "{text}")?;
    Ok(())
}

pub fn frac(r: &Rational) -> String {
    to_fraction(r)
}

pub fn dec(r: &Rational) -> String {
    to_decimal(r, 12)
}

/// `{"delta": "a/b", "eta": "c/d", "delta_dec": ..., "eta_dec": ...}`.
pub fn profile_json(p: &Profile) -> Value {
    json!({
        "delta": frac(&p.delta),
        "eta": frac(&p.eta),
        "delta_dec": dec(&p.delta),
        "eta_dec": dec(&p.eta),
    })
}

pub fn threads(requested: Option<u32>) -> usize {
    requested
        .map(|t| t as usize)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}
