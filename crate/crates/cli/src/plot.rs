//! Minimal SVG rendering of a sweep CSV: deficit, hd² and l1² against eps on
//! log-log axes, and the two ratios against eps.

use std::fmt::Write;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub eps: f64,
    pub deficit: f64,
    pub hd: f64,
    pub l1: f64,
    pub ratio_hd: Option<f64>,
    pub ratio_l1: Option<f64>,
}

pub fn parse_sweep_csv(text: &str) -> Result<Vec<Row>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers()?.clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .with_context(|| format!("missing column `{name}`"))
    };
    let (ie, id, ih, il, irh, irl) = (
        col("eps")?,
        col("deficit")?,
        col("hd")?,
        col("l1")?,
        col("ratio_hd")?,
        col("ratio_l1")?,
    );
    let mut rows = Vec::new();
    for (line, rec) in reader.records().enumerate() {
        let rec = rec?;
        let num = |i: usize| -> Result<f64> {
            rec[i]
                .parse()
                .with_context(|| format!("row {}: bad number `{}`", line + 1, &rec[i]))
        };
        let ratio = |i: usize| -> Result<Option<f64>> {
            if &rec[i] == "degenerate" {
                Ok(None)
            } else {
                num(i).map(Some)
            }
        };
        rows.push(Row {
            eps: num(ie)?,
            deficit: num(id)?,
            hd: num(ih)?,
            l1: num(il)?,
            ratio_hd: ratio(irh)?,
            ratio_l1: ratio(irl)?,
        });
    }
    if rows.is_empty() {
        bail!("sweep CSV has no rows");
    }
    Ok(rows)
}

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 320.0;
const MARGIN: f64 = 56.0;

struct Series<'a> {
    label: &'a str,
    color: &'a str,
    points: Vec<(f64, f64)>,
}

struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Axis {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let v = if log { v.log10() } else { v };
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if !lo.is_finite() {
            (lo, hi) = (0.0, 1.0);
        }
        let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5 };
        Axis {
            lo: lo - pad,
            hi: hi + pad,
            log,
        }
    }

    fn frac(&self, v: f64) -> f64 {
        let v = if self.log { v.log10() } else { v };
        (v - self.lo) / (self.hi - self.lo)
    }

    fn label(&self, t: f64) -> String {
        let v = self.lo + t * (self.hi - self.lo);
        if self.log {
            format!("1e{v:.1}")
        } else {
            format!("{v:.3}")
        }
    }
}

fn panel(svg: &mut String, x0: f64, title: &str, series: &[Series], log_y: bool) {
    let usable = |v: f64| v.is_finite() && (!log_y || v > 0.0);
    let series: Vec<Series> = series
        .iter()
        .map(|s| Series {
            label: s.label,
            color: s.color,
            points: s
                .points
                .iter()
                .copied()
                .filter(|&(x, y)| x > 0.0 && usable(y))
                .collect(),
        })
        .collect();
    let ax = Axis::fit(
        series.iter().flat_map(|s| s.points.iter().map(|p| p.0)),
        true,
    );
    let ay = Axis::fit(
        series.iter().flat_map(|s| s.points.iter().map(|p| p.1)),
        log_y,
    );
    let (w, h) = (PANEL_W - 2.0 * MARGIN, PANEL_H - 2.0 * MARGIN);
    let px = |x: f64| x0 + MARGIN + ax.frac(x) * w;
    let py = |y: f64| MARGIN + (1.0 - ay.frac(y)) * h;
    let _ = writeln!(
        svg,
        r#"<rect x="{}" y="{MARGIN}" width="{w}" height="{h}" fill="none" stroke="black"/>"#,
        x0 + MARGIN
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">{title}</text>"#,
        x0 + PANEL_W / 2.0,
        MARGIN - 16.0
    );
    for t in [0.0, 0.5, 1.0] {
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="middle">{}</text>"#,
            x0 + MARGIN + t * w,
            MARGIN + h + 14.0,
            ax.label(t)
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-size="10" text-anchor="end">{}</text>"#,
            x0 + MARGIN - 4.0,
            MARGIN + (1.0 - t) * h + 3.0,
            ay.label(t)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">eps</text>"#,
        x0 + PANEL_W / 2.0,
        PANEL_H - 18.0
    );
    for (i, s) in series.iter().enumerate() {
        let pts: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{}" points="{}"/>"#,
            s.color,
            pts.join(" ")
        );
        for &(x, y) in &s.points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{}"/>"#,
                px(x),
                py(y),
                s.color
            );
        }
        let ly = MARGIN + 14.0 + 14.0 * i as f64;
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{ly}" font-size="11" fill="{}">{}</text>"#,
            x0 + MARGIN + 8.0,
            s.color,
            s.label
        );
    }
}

pub fn render(rows: &[Row]) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{PANEL_H}" font-family="sans-serif" font-size="12">"#,
        2.0 * PANEL_W
    );
    let xy = |f: &dyn Fn(&Row) -> f64| rows.iter().map(|r| (r.eps, f(r))).collect::<Vec<_>>();
    panel(
        &mut svg,
        0.0,
        "deficit and squared distances",
        &[
            Series {
                label: "deficit",
                color: "black",
                points: xy(&|r| r.deficit),
            },
            Series {
                label: "hd^2",
                color: "steelblue",
                points: xy(&|r| r.hd * r.hd),
            },
            Series {
                label: "l1^2",
                color: "darkorange",
                points: xy(&|r| r.l1 * r.l1),
            },
        ],
        true,
    );
    panel(
        &mut svg,
        PANEL_W,
        "ratios",
        &[
            Series {
                label: "hd^2/deficit",
                color: "steelblue",
                points: xy(&|r| r.ratio_hd.unwrap_or(f64::NAN)),
            },
            Series {
                label: "l1^2/deficit",
                color: "darkorange",
                points: xy(&|r| r.ratio_l1.unwrap_or(f64::NAN)),
            },
        ],
        false,
    );
    svg.push_str("</svg>\n");
    svg
}
