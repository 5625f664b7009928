//! Least-squares fits of the figure of merit and stabilizer geometry.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::csscode::CodeInstance;
use crate::error::{Error, Result};
use crate::records::CodeRecord;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Ordinary least squares `y = slope x + intercept`.
///
/// `r_squared` is `1 - SS_res / SS_tot`; when every `y` is equal the fit is
/// exact and `r_squared` is reported as 1.
pub fn linear_fit(points: &[(f64, f64)]) -> Result<FitResult> {
    if points.len() < 2 {
        return Err(Error::DegenerateInput(format!("{} points", points.len())));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx <= f64::EPSILON * mx.abs().max(1.0) {
        return Err(Error::DegenerateInput("all x values are equal".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points.iter().map(|p| (p.1 - slope * p.0 - intercept).powi(2)).sum();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ss_res / syy };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        points: points.len(),
    })
}

/// Fit of `k d^2 / n` against `n ln p`; needs at least two distinct `p`.
pub fn global_fit(records: &[CodeRecord]) -> Result<FitResult> {
    let mut primes: Vec<u32> = records.iter().map(|r| r.p).collect();
    primes.sort_unstable();
    primes.dedup();
    if primes.len() < 2 {
        return Err(Error::DegenerateInput(format!("records span {} prime(s)", primes.len())));
    }
    let pts: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.n as f64 * (r.p as f64).ln(), r.kd2_over_n))
        .collect();
    linear_fit(&pts)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlopeReport {
    /// Fit of `k d^2 / n` against `n`, per prime.
    pub per_p: Vec<(u32, FitResult)>,
    /// Fit of those slopes against `ln p`.
    pub slope_vs_ln_p: Option<FitResult>,
}

/// Per-prime fits; primes with fewer than two usable points are skipped.
pub fn per_p_slopes(records: &[CodeRecord]) -> SlopeReport {
    let mut groups: BTreeMap<u32, Vec<(f64, f64)>> = BTreeMap::new();
    for r in records {
        groups.entry(r.p).or_default().push((r.n as f64, r.kd2_over_n));
    }
    let mut per_p = Vec::new();
    for (p, pts) in groups {
        match linear_fit(&pts) {
            Ok(fit) => per_p.push((p, fit)),
            Err(e) => log::warn!("skipping p={p}: {e}"),
        }
    }
    let second: Vec<(f64, f64)> = per_p.iter().map(|(p, f)| ((*p as f64).ln(), f.slope)).collect();
    SlopeReport {
        slope_vs_ln_p: linear_fit(&second).ok(),
        per_p,
    }
}

/// Largest Euclidean distance between two qudits acted on by one stabilizer,
/// measured in lattice units from the unreduced exponents of `f` and `g`.
pub fn stabilizer_range(c: &CodeInstance) -> f64 {
    let pts: Vec<(i64, i64)> = c.f.exponents().chain(c.g.exponents()).map(|e| (e.i, e.j)).collect();
    let mut best = 0i64;
    for (i, a) in pts.iter().enumerate() {
        for b in &pts[i + 1..] {
            best = best.max((a.0 - b.0).pow(2) + (a.1 - b.1).pow(2));
        }
    }
    (best as f64).sqrt()
}

const PALETTE: [&str; 6] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"];

/// Scatter plot of `(x, y)` series with one fitted line each, as a standalone SVG.
pub fn svg_plot(title: &str, x_label: &str, y_label: &str, series: &[(String, Vec<(f64, f64)>, Option<FitResult>)]) -> String {
    let (w, h, m) = (640.0, 440.0, 56.0);
    let all: Vec<(f64, f64)> = series.iter().flat_map(|s| s.1.iter().copied()).collect();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in &all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if all.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let y0 = y0.min(0.0);
    let sx = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let sy = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{title}</text>"#, w / 2.0);
    let _ = writeln!(
        s,
        r#"<line x1="{m}" y1="{b}" x2="{r}" y2="{b}" stroke="black"/><line x1="{m}" y1="{m}" x2="{m}" y2="{b}" stroke="black"/>"#,
        b = h - m,
        r = w - m
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{x_label}</text>"#, w / 2.0, h - 14.0);
    let _ = writeln!(
        s,
        r#"<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{y_label}</text>"#,
        h / 2.0,
        h / 2.0
    );
    for i in 0..=4 {
        let fx = x0 + (x1 - x0) * i as f64 / 4.0;
        let fy = y0 + (y1 - y0) * i as f64 / 4.0;
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{fx:.1}</text>"#, sx(fx), h - m + 16.0);
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{fy:.1}</text>"#, m - 6.0, sy(fy) + 4.0);
    }
    for (idx, (name, pts, fit)) in series.iter().enumerate() {
        let color = PALETTE[idx % PALETTE.len()];
        for &(x, y) in pts {
            let _ = writeln!(s, r#"<circle cx="{:.1}" cy="{:.1}" r="3" fill="{color}"/>"#, sx(x), sy(y));
        }
        if let Some(f) = fit {
            let (a, b) = (f.slope * x0 + f.intercept, f.slope * x1 + f.intercept);
            let _ = writeln!(
                s,
                r#"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}"/>"#,
                sx(x0),
                sy(a),
                sx(x1),
                sy(b)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" fill="{color}">{name}</text>"#,
            m + 10.0,
            m + 14.0 * idx as f64
        );
    }
    s.push_str("</svg>\n");
    s
}
