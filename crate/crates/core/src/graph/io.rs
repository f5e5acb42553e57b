//! Plain-text and graph6 serialization.
//!
//! Text format: a header line `p <order>`, then one `<u> <v>` line per edge
//! with `u < v`, edges in ascending lexicographic order. Blank lines and
//! lines starting with `#` are ignored on input. The writer emits exactly
//! this layout, so output is byte-stable.

use std::collections::HashSet;
use std::fmt::Write as _;

use super::{Graph, MAX_ORDER};
use crate::error::{Error, Result};

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn to_text(g: &Graph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p {}", g.order());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn parse_text(input: &str) -> Result<Graph> {
    let mut order: Option<usize> = None;
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    for (i, raw) in input.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match order {
            None => {
                if fields.len() != 2 || fields[0] != "p" {
                    return Err(parse_err(lineno, "expected header `p <order>`"));
                }
                let p: usize = fields[1]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad order {:?}", fields[1])))?;
                if p == 0 || p > MAX_ORDER {
                    return Err(parse_err(lineno, format!("order {p} outside 1..={MAX_ORDER}")));
                }
                order = Some(p);
            }
            Some(p) => {
                if fields.len() != 2 {
                    return Err(parse_err(lineno, "expected `<u> <v>`"));
                }
                let u: usize = fields[0]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad vertex {:?}", fields[0])))?;
                let v: usize = fields[1]
                    .parse()
                    .map_err(|_| parse_err(lineno, format!("bad vertex {:?}", fields[1])))?;
                if u >= v {
                    return Err(parse_err(lineno, format!("edge {u} {v} must have u < v")));
                }
                if v >= p {
                    return Err(parse_err(lineno, format!("vertex {v} out of range for order {p}")));
                }
                if !seen.insert((u, v)) {
                    return Err(parse_err(lineno, format!("duplicate edge {u} {v}")));
                }
                edges.push((u, v));
            }
        }
    }
    let p = order.ok_or_else(|| parse_err(0, "missing header `p <order>`"))?;
    Graph::from_edges(p, edges)
}

/// graph6 encoding (no `>>graph6<<` header, no trailing newline).
pub fn to_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut bytes = Vec::new();
    if n <= 62 {
        bytes.push(n as u8 + 63);
    } else {
        bytes.push(126);
        for shift in [12, 6, 0] {
            bytes.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | u8::from(g.has_edge(i, j));
            filled += 1;
            if filled == 6 {
                bytes.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        bytes.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(bytes).expect("graph6 is printable ASCII")
}

pub fn parse_graph6(input: &str) -> Result<Graph> {
    let s = input.trim();
    let s = s.strip_prefix(">>graph6<<").unwrap_or(s).as_bytes();
    let bad = |msg: &str| parse_err(1, format!("graph6: {msg}"));
    if s.iter().any(|&b| !(63..=126).contains(&b)) {
        return Err(bad("byte outside 63..=126"));
    }
    let (n, body) = match s.first() {
        None => return Err(bad("empty input")),
        Some(&126) => {
            if s.get(1) == Some(&126) {
                return Err(bad("orders above 258047 are not supported"));
            }
            if s.len() < 4 {
                return Err(bad("truncated order field"));
            }
            let n = s[1..4]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            (n, &s[4..])
        }
        Some(&b) => ((b - 63) as usize, &s[1..]),
    };
    if n == 0 || n > MAX_ORDER {
        return Err(bad(&format!("order {n} outside 1..={MAX_ORDER}")));
    }
    let nbits = n * (n - 1) / 2;
    if body.len() != nbits.div_ceil(6) {
        return Err(bad(&format!(
            "expected {} data bytes for order {n}, found {}",
            nbits.div_ceil(6),
            body.len()
        )));
    }
    let bit = |k: usize| (body[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    let mut g = Graph::empty(n)?;
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bit(k) {
                g.insert_edge(i, j);
            }
            k += 1;
        }
    }
    Ok(g)
}

/// Accepts either format: input whose first significant line starts with
/// `p` is read as text, anything else as graph6.
pub fn parse_any(input: &str) -> Result<Graph> {
    let first = input
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.starts_with("p ") || l == "p" => parse_text(input),
        Some(l) => parse_graph6(l),
        None => Err(parse_err(0, "empty input")),
    }
}
