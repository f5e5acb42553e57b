//! Deterministic SVG rendering of the three bound figures.
//!
//! Output depends only on the inputs: fixed canvas, fixed palette, fixed
//! sampling grids, and every coordinate printed with two decimals.
//!
//! Palette: valid region and `rhat_l` blue `#1f5fbf`, invalid region and
//! `rhat_u` red `#c0392b`, `rhat_star_l` gray `#555555`, ratio black.

use std::fmt::Write as _;

use crate::bounds::{rhat_l, rhat_star_l, rhat_u};
use crate::error::{usage, Result};
use crate::graph::DeltaEtaProfile;
use crate::scalar::Scalar;
use crate::validity::{Family, InvalidPointTable};

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 600.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 70.0;

const BLUE: &str = "#1f5fbf";
const RED: &str = "#c0392b";
const GRAY: &str = "#555555";

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - TOP - BOTTOM)
    }

    fn points(&self, pts: &[(f64, f64)]) -> String {
        let coords: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y)))
            .collect();
        coords.join(" ")
    }
}

/// Roughly `target` round tick positions covering `[lo, hi]`.
fn ticks(lo: f64, hi: f64, target: usize) -> Vec<f64> {
    let raw = (hi - lo) / target as f64;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag);
    let first = (lo / step - 1e-9).ceil() as i64;
    let last = (hi / step + 1e-9).floor() as i64;
    (first..=last).map(|k| k as f64 * step).collect()
}

/// Enough decimals to tell adjacent ticks apart (`0.25` steps need two).
fn decimals_for(ticks: &[f64]) -> usize {
    if ticks.len() < 2 {
        return 2;
    }
    let step = ticks[1] - ticks[0];
    let exponent = step.log10().floor();
    let mantissa = step / 10f64.powf(exponent);
    let extra = usize::from((mantissa - 2.5).abs() < 1e-9);
    (-exponent).max(0.0) as usize + extra
}

fn open(out: &mut String, title: &str, frame: &Frame, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(out, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<defs><clipPath id="plot"><rect x="{LEFT}" y="{TOP}" width="{:.2}" height="{:.2}"/></clipPath></defs>"#,
        WIDTH - LEFT - RIGHT,
        HEIGHT - TOP - BOTTOM
    );
    let _ = writeln!(out, r#"<text x="{:.2}" y="28" text-anchor="middle" font-size="16">{title}</text>"#, WIDTH / 2.0);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{xlabel}</text>"#,
        LEFT + (WIDTH - LEFT - RIGHT) / 2.0,
        HEIGHT - 20.0
    );
    let _ = writeln!(
        out,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{ylabel}</text>"#,
        TOP + (HEIGHT - TOP - BOTTOM) / 2.0,
        TOP + (HEIGHT - TOP - BOTTOM) / 2.0
    );
    let xt = ticks(frame.x0, frame.x1, 8);
    let yt = ticks(frame.y0, frame.y1, 8);
    let (xd, yd) = (decimals_for(&xt), decimals_for(&yt));
    for x in &xt {
        let px = frame.px(*x);
        let _ = writeln!(
            out,
            r##"<line x1="{px:.2}" y1="{TOP:.2}" x2="{px:.2}" y2="{:.2}" stroke="#e0e0e0"/><text x="{px:.2}" y="{:.2}" text-anchor="middle">{x:.xd$}</text>"##,
            HEIGHT - BOTTOM,
            HEIGHT - BOTTOM + 18.0
        );
    }
    for y in &yt {
        let py = frame.py(*y);
        let _ = writeln!(
            out,
            r##"<line x1="{LEFT:.2}" y1="{py:.2}" x2="{:.2}" y2="{py:.2}" stroke="#e0e0e0"/><text x="{:.2}" y="{:.2}" text-anchor="end">{y:.yd$}</text>"##,
            WIDTH - RIGHT,
            LEFT - 6.0,
            py + 4.0
        );
    }
}

fn close(out: &mut String) {
    let _ = writeln!(
        out,
        r#"<rect x="{LEFT}" y="{TOP}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        WIDTH - LEFT - RIGHT,
        HEIGHT - TOP - BOTTOM
    );
    out.push_str("</svg>\n");
}

fn polyline(out: &mut String, frame: &Frame, pts: &[(f64, f64)], color: &str, dash: Option<&str>, class: &str) {
    let dash = dash.map_or(String::new(), |d| format!(r#" stroke-dasharray="{d}""#));
    let _ = writeln!(
        out,
        r#"<polyline class="{class}" clip-path="url(#plot)" fill="none" stroke="{color}" stroke-width="2"{dash} points="{}"/>"#,
        frame.points(pts)
    );
}

fn legend(out: &mut String, entries: &[(&str, &str)]) {
    for (i, (label, color)) in entries.iter().enumerate() {
        let y = TOP + 20.0 + 20.0 * i as f64;
        let x = WIDTH - RIGHT - 190.0;
        let _ = writeln!(
            out,
            r#"<line x1="{x:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="3"/><text x="{:.2}" y="{:.2}">{label}</text>"#,
            x + 24.0,
            x + 30.0,
            y + 4.0
        );
    }
}

fn grid(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect()
}

/// Highest family `eta` reachable at `delta` (the lower envelope of the
/// known valid region), or `None` if neither family reaches `delta`.
fn family_envelope(delta: f64) -> Option<f64> {
    [Family::C5, Family::LK7]
        .iter()
        .filter_map(|f| {
            let p = match f {
                Family::C5 => (5.0 * delta - 1.0) / 2.0,
                Family::LK7 => (21.0 * delta - 1.0) / 10.0,
            }
            .max(0.0);
            (p <= 1.0).then(|| f.point(p).eta)
        })
        .reduce(f64::max)
}

/// Valid (blue) and invalid (red) points in `[0.5, 0.545] x [0.265, 0.32]`.
pub fn figure1() -> String {
    let frame = Frame {
        x0: 0.5,
        x1: 0.545,
        y0: 0.265,
        y1: 0.32,
    };
    let mut out = String::new();
    open(&mut out, "Valid and invalid (delta, eta)", &frame, "delta", "eta");

    let mut valid = vec![(frame.x0, frame.y0)];
    for d in grid(frame.x0, frame.x1, 450) {
        let e = family_envelope(d).unwrap_or(frame.y0).clamp(frame.y0, frame.y1);
        valid.push((d, e));
    }
    valid.push((frame.x1, frame.y0));
    let _ = writeln!(
        out,
        r#"<polygon class="valid" clip-path="url(#plot)" fill="{BLUE}" fill-opacity="0.55" stroke="none" points="{}"/>"#,
        frame.points(&valid)
    );

    let mut rows: Vec<(f64, f64)> = InvalidPointTable::standard()
        .rows()
        .iter()
        .map(|r: &DeltaEtaProfile| (r.delta.to_f64(), r.eta.to_f64()))
        .collect();
    rows.sort_by(|a, b| a.0.total_cmp(&b.0));
    let top = frame.y1;
    let mut stairs = vec![(frame.x1, top), (rows[0].0, top)];
    let mut level = f64::INFINITY;
    for (d, e) in &rows {
        let new_level = level.min(*e);
        if level.is_finite() {
            stairs.push((*d, level.min(top)));
        }
        stairs.push((*d, new_level.min(top)));
        level = new_level;
    }
    stairs.push((frame.x1, level.min(top)));
    let _ = writeln!(
        out,
        r#"<polygon class="invalid" clip-path="url(#plot)" fill="{RED}" fill-opacity="0.55" stroke="none" points="{}"/>"#,
        frame.points(&stairs)
    );
    for (family, dash) in [(Family::C5, "6,4"), (Family::LK7, "2,3")] {
        let curve: Vec<(f64, f64)> = grid(0.0, 1.0, 1000)
            .into_iter()
            .map(|p| {
                let pt = family.point(p);
                (pt.delta, pt.eta)
            })
            .collect();
        polyline(&mut out, &frame, &curve, "#0b2f6b", Some(dash), family.name());
    }
    legend(&mut out, &[("valid (C5, L(K7) families)", BLUE), ("invalid (table rows)", RED)]);
    close(&mut out);
    out
}

fn y_frame(series: &[&[(f64, f64)]], x0: f64, x1: f64) -> Frame {
    let ys = series.iter().flat_map(|s| s.iter().map(|p| p.1));
    let (lo, hi) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    let pad = (hi - lo) * 0.05;
    Frame {
        x0,
        x1,
        y0: lo - pad,
        y1: hi + pad,
    }
}

/// `rhat_star_l`, `rhat_l` and `rhat_u` on `[1.65, 2.6]`.
pub fn figure2() -> String {
    let xs = grid(1.65, 2.6, 950);
    let sample = |f: fn(&f64) -> Result<f64>| -> Vec<(f64, f64)> {
        xs.iter().map(|x| (*x, f(x).expect("x >= 1"))).collect()
    };
    let star = sample(rhat_star_l);
    let lower = sample(rhat_l);
    let upper = sample(rhat_u);
    let frame = y_frame(&[&star, &lower, &upper], 1.65, 2.6);
    let mut out = String::new();
    open(&mut out, "Bounds on rhat(x)", &frame, "x", "r / m");
    polyline(&mut out, &frame, &star, GRAY, Some("6,4"), "rhat_star_l");
    polyline(&mut out, &frame, &lower, BLUE, None, "rhat_l");
    polyline(&mut out, &frame, &upper, RED, None, "rhat_u");
    legend(&mut out, &[("max(x+2, 2x)", GRAY), ("lower bound", BLUE), ("upper bound", RED)]);
    close(&mut out);
    out
}

/// `rhat_u / rhat_l` on `[1.5, 3]`.
pub fn figure3() -> String {
    let ratio: Vec<(f64, f64)> = grid(1.5, 3.0, 1500)
        .into_iter()
        .map(|x| (x, rhat_u(&x).expect("x >= 1") / rhat_l(&x).expect("x >= 1")))
        .collect();
    let frame = y_frame(&[&ratio], 1.5, 3.0);
    let mut out = String::new();
    open(&mut out, "Ratio of upper to lower bound", &frame, "x", "ratio");
    polyline(&mut out, &frame, &ratio, "black", None, "ratio");
    close(&mut out);
    out
}

pub fn figure(number: u8) -> Result<String> {
    match number {
        1 => Ok(figure1()),
        2 => Ok(figure2()),
        3 => Ok(figure3()),
        _ => Err(usage(format!("figures are numbered 1 to 3, got {number}"))),
    }
}
