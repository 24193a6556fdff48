//! Minimal self-contained SVG line plots.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use qdds_core::{fir_response_magnitude, FilterSpec, TracePoint};

use crate::error::{HarnessError, Result};

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 6;
const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];
/// Floor of the response plot, in dB.
pub const RESPONSE_FLOOR_DB: f64 = -120.0;
const RESPONSE_SAMPLES: usize = 1024;

/// A marker line across the plot area.
#[derive(Debug, Clone, PartialEq)]
pub struct Marker {
    pub value: f64,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinePlot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_y: bool,
    pub series: Vec<Vec<(f64, f64)>>,
    pub hlines: Vec<Marker>,
    pub vlines: Vec<Marker>,
}

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>) -> Self {
        let (lo, hi) = values
            .filter(|v| v.is_finite())
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                (lo.min(v), hi.max(v))
            });
        if !lo.is_finite() {
            return Axis { lo: 0.0, hi: 1.0 };
        }
        if lo == hi {
            let pad = if lo == 0.0 { 1.0 } else { 0.5 * lo.abs() };
            return Axis {
                lo: lo - pad,
                hi: hi + pad,
            };
        }
        Axis { lo, hi }
    }

    fn frac(&self, v: f64) -> f64 {
        (v - self.lo) / (self.hi - self.lo)
    }

    fn tick(&self, i: usize) -> f64 {
        self.lo + (self.hi - self.lo) * i as f64 / (TICKS - 1) as f64
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 || (1e-2..1e4).contains(&v.abs()) {
        format!("{v:.3}")
    } else {
        format!("{v:.2e}")
    }
}

impl LinePlot {
    fn transform_y(&self, y: f64) -> f64 {
        if self.log_y {
            if y > 0.0 {
                y.log10()
            } else {
                f64::NEG_INFINITY
            }
        } else {
            y
        }
    }

    pub fn render(&self) -> String {
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let xs = Axis::fit(
            self.series
                .iter()
                .flatten()
                .map(|p| p.0)
                .chain(self.vlines.iter().map(|m| m.value)),
        );
        let ys = Axis::fit(
            self.series
                .iter()
                .flatten()
                .map(|p| self.transform_y(p.1))
                .chain(self.hlines.iter().map(|m| self.transform_y(m.value))),
        );
        let px = |x: f64| LEFT + xs.frac(x) * plot_w;
        let py = |y: f64| TOP + (1.0 - ys.frac(y)) * plot_h;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            svg,
            r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
        );

        for i in 0..TICKS {
            let xv = xs.tick(i);
            let x = px(xv);
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{TOP}" stroke="#e0e0e0"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"##,
                TOP + plot_h,
                TOP + plot_h + 18.0,
                fmt_tick(xv)
            );
            let yv = ys.tick(i);
            let y = py(yv);
            let label = if self.log_y { 10f64.powf(yv) } else { yv };
            let _ = writeln!(
                svg,
                r##"<line x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#e0e0e0"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                LEFT + plot_w,
                LEFT - 6.0,
                y + 4.0,
                fmt_tick(label)
            );
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let y_label = if self.log_y {
            format!("{} (log scale)", self.y_label)
        } else {
            self.y_label.clone()
        };
        let _ = writeln!(
            svg,
            r#"<text x="20" y="{:.1}" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
            TOP + plot_h / 2.0,
            TOP + plot_h / 2.0,
            escape(&y_label)
        );

        for (i, series) in self.series.iter().enumerate() {
            let points: Vec<String> = series
                .iter()
                .map(|&(x, y)| (x, self.transform_y(y)))
                .filter(|(x, y)| x.is_finite() && y.is_finite())
                .map(|(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
                .collect();
            let _ = writeln!(
                svg,
                r#"<polyline class="series" fill="none" stroke="{}" stroke-width="1.5" points="{}"/>"#,
                PALETTE[i % PALETTE.len()],
                points.join(" ")
            );
        }
        for m in &self.hlines {
            let y = self.transform_y(m.value);
            if y.is_finite() {
                let y = py(y);
                let _ = writeln!(
                    svg,
                    r#"<line class="marker" x1="{LEFT}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black" stroke-dasharray="6 4"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
                    LEFT + plot_w,
                    LEFT + plot_w - 4.0,
                    y - 4.0,
                    escape(&m.label)
                );
            }
        }
        for m in &self.vlines {
            let x = px(m.value);
            let _ = writeln!(
                svg,
                r#"<line class="marker" x1="{x:.2}" y1="{TOP}" x2="{x:.2}" y2="{:.2}" stroke="gray" stroke-dasharray="2 3"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                TOP + plot_h,
                x + 3.0,
                TOP + 14.0,
                escape(&m.label)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

/// Best cost against iteration, one polyline per trace.
pub fn convergence_plot(title: &str, traces: &[&[TracePoint]], log_y: bool) -> LinePlot {
    LinePlot {
        title: title.to_string(),
        x_label: "iteration".into(),
        y_label: "best cost".into(),
        log_y,
        series: traces
            .iter()
            .map(|t| t.iter().map(|p| (p.iter as f64, p.best_cost)).collect())
            .collect(),
        hlines: Vec::new(),
        vlines: Vec::new(),
    }
}

/// 20·log10|H(ω)| against ω/π on [0, 1], floored at [`RESPONSE_FLOOR_DB`].
pub fn response_plot(title: &str, h: &[f64], spec: &FilterSpec, delta_db: f64) -> LinePlot {
    let series = (0..RESPONSE_SAMPLES)
        .map(|i| {
            let f = i as f64 / (RESPONSE_SAMPLES - 1) as f64;
            let mag = fir_response_magnitude(h, f * PI);
            let db = if mag > 0.0 {
                20.0 * mag.log10()
            } else {
                RESPONSE_FLOOR_DB
            };
            (f, db.max(RESPONSE_FLOOR_DB))
        })
        .collect();
    let mut hlines = Vec::new();
    if delta_db.is_finite() {
        hlines.push(Marker {
            value: delta_db,
            label: format!("Δ = {delta_db:.4} dB"),
        });
    }
    LinePlot {
        title: title.to_string(),
        x_label: "normalized frequency ω/π".into(),
        y_label: "magnitude (dB)".into(),
        log_y: false,
        series: vec![series],
        hlines,
        vlines: vec![
            Marker {
                value: spec.omega_p / PI,
                label: "ωp".into(),
            },
            Marker {
                value: spec.omega_s / PI,
                label: "ωs".into(),
            },
        ],
    }
}

pub fn emit_plot(plot: &LinePlot, path: &Path) -> Result<()> {
    std::fs::write(path, plot.render()).map_err(|e| HarnessError::io(path, e))
}
