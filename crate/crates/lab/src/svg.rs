//! Minimal self-contained SVG line/marker plots.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 55.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Markers,
}

#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Symmetric error bars, drawn for marker series.
    pub err: Option<Vec<f64>>,
    pub style: Style,
}

impl Series {
    pub fn line(label: &str, x: Vec<f64>, y: Vec<f64>) -> Self {
        Self { label: label.to_owned(), x, y, err: None, style: Style::Line }
    }

    pub fn markers(label: &str, x: Vec<f64>, y: Vec<f64>) -> Self {
        Self { label: label.to_owned(), x, y, err: None, style: Style::Markers }
    }

    pub fn with_errors(mut self, err: Vec<f64>) -> Self {
        self.err = Some(err);
        self
    }
}

#[derive(Debug, Clone)]
pub struct Plot {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub log_x: bool,
    pub series: Vec<Series>,
}

impl Plot {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.to_owned(),
            x_label: x_label.to_owned(),
            y_label: y_label.to_owned(),
            log_x: false,
            series: Vec::new(),
        }
    }

    pub fn log_x(mut self) -> Self {
        self.log_x = true;
        self
    }

    pub fn series(mut self, s: Series) -> Self {
        self.series.push(s);
        self
    }

    fn tx(&self, x: f64) -> f64 {
        if self.log_x { x.log10() } else { x }
    }

    fn bounds(&self) -> (f64, f64, f64, f64) {
        let mut xs = (f64::INFINITY, f64::NEG_INFINITY);
        let mut ys = (f64::INFINITY, f64::NEG_INFINITY);
        for s in &self.series {
            for (i, (&x, &y)) in s.x.iter().zip(&s.y).enumerate() {
                let x = self.tx(x);
                if !x.is_finite() || !y.is_finite() {
                    continue;
                }
                let e = s.err.as_ref().map_or(0.0, |e| e[i]);
                xs = (xs.0.min(x), xs.1.max(x));
                ys = (ys.0.min(y - e), ys.1.max(y + e));
            }
        }
        if !xs.0.is_finite() {
            return (0.0, 1.0, 0.0, 1.0);
        }
        let pad = |lo: f64, hi: f64| {
            if hi - lo < 1e-300 {
                let d = lo.abs().max(1.0) * 0.5;
                (lo - d, hi + d)
            } else {
                let d = (hi - lo) * 0.05;
                (lo - d, hi + d)
            }
        };
        let (x0, x1) = pad(xs.0, xs.1);
        let (y0, y1) = pad(ys.0, ys.1);
        (x0, x1, y0, y1)
    }

    pub fn render(&self) -> String {
        let (x0, x1, y0, y1) = self.bounds();
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let px = |x: f64| LEFT + (self.tx(x) - x0) / (x1 - x0) * pw;
        let py = |y: f64| TOP + (1.0 - (y - y0) / (y1 - y0)) * ph;

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            s,
            r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
        );

        for i in 0..=5 {
            let f = i as f64 / 5.0;
            let xv = x0 + f * (x1 - x0);
            let label = if self.log_x { tick(10f64.powf(xv)) } else { tick(xv) };
            let gx = LEFT + f * pw;
            let _ = writeln!(
                s,
                r##"<line x1="{gx:.2}" y1="{TOP}" x2="{gx:.2}" y2="{:.2}" stroke="#ddd"/><text x="{gx:.2}" y="{:.2}" text-anchor="middle">{label}</text>"##,
                TOP + ph,
                TOP + ph + 16.0
            );
            let yv = y0 + f * (y1 - y0);
            let gy = TOP + (1.0 - f) * ph;
            let _ = writeln!(
                s,
                r##"<line x1="{LEFT}" y1="{gy:.2}" x2="{:.2}" y2="{gy:.2}" stroke="#ddd"/><text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"##,
                LEFT + pw,
                LEFT - 6.0,
                gy + 4.0,
                tick(yv)
            );
        }
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 12.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            s,
            r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{}</text>"#,
            TOP + ph / 2.0,
            TOP + ph / 2.0,
            escape(&self.y_label)
        );

        for (n, series) in self.series.iter().enumerate() {
            let color = PALETTE[n % PALETTE.len()];
            let pts: Vec<(f64, f64)> = series
                .x
                .iter()
                .zip(&series.y)
                .filter(|(x, y)| self.tx(**x).is_finite() && y.is_finite())
                .map(|(&x, &y)| (px(x), py(y)))
                .collect();
            match series.style {
                Style::Line => {
                    let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                    let _ = writeln!(
                        s,
                        r#"<polyline fill="none" stroke="{color}" stroke-width="1.6" points="{}"/>"#,
                        path.join(" ")
                    );
                }
                Style::Markers => {
                    for (i, (&x, &y)) in series.x.iter().zip(&series.y).enumerate() {
                        if !self.tx(x).is_finite() || !y.is_finite() {
                            continue;
                        }
                        if let Some(e) = &series.err {
                            let _ = writeln!(
                                s,
                                r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}"/>"#,
                                px(x),
                                py(y - e[i]),
                                px(x),
                                py(y + e[i])
                            );
                        }
                        let _ = writeln!(
                            s,
                            r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{color}"/>"#,
                            px(x),
                            py(y)
                        );
                    }
                }
            }
            let ly = TOP + 14.0 + 16.0 * n as f64;
            let lx = LEFT + pw - 150.0;
            let _ = writeln!(
                s,
                r#"<rect x="{lx:.2}" y="{:.2}" width="12" height="4" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                ly - 4.0,
                lx + 18.0,
                ly + 1.0,
                escape(&series.label)
            );
        }
        s.push_str("</svg>\n");
        s
    }

    pub fn save(&self, dir: &Path, stem: &str) -> Result<PathBuf> {
        let path = dir.join(format!("{stem}.svg"));
        fs::write(&path, self.render()).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}

fn tick(v: f64) -> String {
    if v == 0.0 || (1e-3..1e4).contains(&v.abs()) {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
