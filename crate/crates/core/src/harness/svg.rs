//! Static SVG line charts for sweep traces.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::trace::{read_trace, TraceRow};
use crate::error::Result;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 460.0;
const LEFT: f64 = 90.0;
const RIGHT: f64 = 30.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;
/// Longer series are thinned to about this many vertices.
const MAX_POINTS: usize = 2_000;

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub color: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct LineChart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    /// Plot `log10(y)`; only honoured when every y is positive.
    pub log_y: bool,
    pub series: Vec<Series>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let norm = raw / mag;
    let nice = if norm < 1.5 {
        1.0
    } else if norm < 3.5 {
        2.0
    } else if norm < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * mag
}

fn ticks(lo: f64, hi: f64) -> Vec<f64> {
    let step = nice_step(hi - lo);
    let mut t = (lo / step).ceil() * step;
    let mut out = Vec::new();
    while t <= hi + step * 1e-9 {
        out.push(if t.abs() < step * 1e-9 { 0.0 } else { t });
        t += step;
    }
    out
}

fn padded_range(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() || !hi.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
        let pad = 0.5 * hi.abs().max(1.0);
        return (lo - pad, hi + pad);
    }
    let pad = 0.04 * (hi - lo);
    (lo - pad, hi + pad)
}

fn thin(points: &[(f64, f64)]) -> Vec<(f64, f64)> {
    if points.len() <= MAX_POINTS {
        return points.to_vec();
    }
    let stride = points.len().div_ceil(MAX_POINTS);
    let mut out: Vec<(f64, f64)> = points.iter().step_by(stride).copied().collect();
    if let Some(&last) = points.last() {
        if out.last() != Some(&last) {
            out.push(last);
        }
    }
    out
}

impl LineChart {
    pub fn render(&self) -> String {
        let log_y = self.log_y && self.series.iter().flat_map(|s| &s.points).all(|&(_, y)| y > 0.0);
        let ty = |y: f64| if log_y { y.log10() } else { y };

        let (x_lo, x_hi) = padded_range(self.series.iter().flat_map(|s| s.points.iter().map(|p| p.0)));
        let (y_lo, y_hi) = padded_range(self.series.iter().flat_map(|s| s.points.iter().map(|p| ty(p.1))));
        let plot_w = WIDTH - LEFT - RIGHT;
        let plot_h = HEIGHT - TOP - BOTTOM;
        let sx = |x: f64| LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w;
        let sy = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        let _ = writeln!(svg, r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="28" text-anchor="middle" font-size="15">{}</text>"#,
            WIDTH / 2.0,
            escape(&self.title)
        );
        let _ = writeln!(
            svg,
            r##"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#444"/>"##
        );

        for t in ticks(x_lo, x_hi) {
            let x = sx(t);
            let _ = writeln!(
                svg,
                r##"<line x1="{x:.2}" y1="{}" x2="{x:.2}" y2="{}" stroke="#444"/><text x="{x:.2}" y="{}" text-anchor="middle">{}</text>"##,
                TOP + plot_h,
                TOP + plot_h + 5.0,
                TOP + plot_h + 19.0,
                format_tick(t)
            );
        }
        for t in ticks(y_lo, y_hi) {
            let y = sy(t);
            let label = if log_y { format!("1e{}", format_tick(t)) } else { format_tick(t) };
            let _ = writeln!(
                svg,
                r##"<line x1="{}" y1="{y:.2}" x2="{}" y2="{y:.2}" stroke="#ddd"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"##,
                LEFT,
                LEFT + plot_w,
                LEFT - 6.0,
                y + 4.0,
                escape(&label)
            );
        }

        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            LEFT + plot_w / 2.0,
            HEIGHT - 15.0,
            escape(&self.x_label)
        );
        let _ = writeln!(
            svg,
            r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">{1}</text>"#,
            TOP + plot_h / 2.0,
            escape(&self.y_label)
        );

        for (k, s) in self.series.iter().enumerate() {
            let pts = thin(&s.points)
                .iter()
                .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(ty(y))))
                .collect::<Vec<_>>()
                .join(" ");
            let _ = writeln!(
                svg,
                r#"<polyline fill="none" stroke="{}" stroke-width="1.6" points="{pts}"/>"#,
                escape(&s.color)
            );
            let ly = TOP + 16.0 + 18.0 * k as f64;
            let lx = LEFT + plot_w - 150.0;
            let _ = writeln!(
                svg,
                r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{}" stroke-width="2"/><text x="{}" y="{}">{}</text>"#,
                lx + 24.0,
                escape(&s.color),
                lx + 30.0,
                ly + 4.0,
                escape(&s.name)
            );
        }
        svg.push_str("</svg>\n");
        svg
    }
}

fn format_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if (1e-3..1e5).contains(&a) {
        let s = format!("{v:.4}");
        let s = s.trim_end_matches('0').trim_end_matches('.');
        s.to_string()
    } else {
        format!("{v:.2e}")
    }
}

/// Files written and figures skipped by [`plot_traces`].
#[derive(Debug, Clone, Default)]
pub struct PlotReport {
    pub written: Vec<PathBuf>,
    pub skipped: Vec<String>,
}

fn series(name: &str, color: &str, rows: &[TraceRow], pick: impl Fn(&TraceRow) -> f64) -> Series {
    Series {
        name: name.into(),
        color: color.into(),
        points: rows.iter().map(|r| (r.sweep as f64, pick(r))).collect(),
    }
}

/// Draws the three sweep plots into `out_dir`:
///
/// - `objective.svg`: `<c, x>` for both runs (needs both traces);
/// - `proximity.svg`: proximity for both runs (needs both traces);
/// - `objective_pm.svg`: `<c, x>` and `<-c, x>` along the baseline run.
pub fn plot_traces(linsup: Option<&Path>, baseline: Option<&Path>, out_dir: &Path) -> Result<PlotReport> {
    let sup = linsup.map(read_trace).transpose()?;
    let base = baseline.map(read_trace).transpose()?;
    fs::create_dir_all(out_dir)?;
    let mut report = PlotReport::default();

    let mut emit = |name: &str, chart: LineChart| -> Result<()> {
        let path = out_dir.join(name);
        fs::write(&path, chart.render())?;
        report.written.push(path);
        Ok(())
    };

    match (&sup, &base) {
        (Some(s), Some(b)) => {
            emit(
                "objective.svg",
                LineChart {
                    title: "Linear objective per sweep".into(),
                    x_label: "sweep".into(),
                    y_label: "<c, x>".into(),
                    log_y: false,
                    series: vec![
                        series("LinSup", "#d62728", s, |r| r.objective),
                        series("Cimmino (baseline)", "#1f77b4", b, |r| r.objective),
                    ],
                },
            )?;
            emit(
                "proximity.svg",
                LineChart {
                    title: "Proximity per sweep".into(),
                    x_label: "sweep".into(),
                    y_label: "Pr(x)".into(),
                    log_y: true,
                    series: vec![
                        series("LinSup", "#d62728", s, |r| r.proximity),
                        series("Cimmino (baseline)", "#1f77b4", b, |r| r.proximity),
                    ],
                },
            )?;
        }
        _ => {
            report.skipped.push("objective.svg: needs both LinSup and baseline traces".into());
            report.skipped.push("proximity.svg: needs both LinSup and baseline traces".into());
        }
    }

    match &base {
        Some(b) if b.iter().all(|r| r.neg_objective.is_some()) => {
            emit(
                "objective_pm.svg",
                LineChart {
                    title: "Baseline iterates: <c, x> and <-c, x>".into(),
                    x_label: "sweep".into(),
                    y_label: "value".into(),
                    log_y: false,
                    series: vec![
                        series("<c, x>", "#1f77b4", b, |r| r.objective),
                        series("<-c, x>", "#2ca02c", b, |r| r.neg_objective.unwrap_or(f64::NAN)),
                    ],
                },
            )?;
        }
        Some(_) => report.skipped.push("objective_pm.svg: baseline trace has no neg_objective values".into()),
        None => report.skipped.push("objective_pm.svg: needs a baseline trace".into()),
    }

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tick_spacing_is_nice() {
        assert_eq!(ticks(0.0, 10.0), vec![0.0, 2.0, 4.0, 6.0, 8.0, 10.0]);
        let t = ticks(-0.3, 0.7);
        assert!(t.contains(&0.0));
    }

    #[test]
    fn thinning_keeps_last_point() {
        let pts: Vec<(f64, f64)> = (0..10_001).map(|i| (i as f64, 1.0)).collect();
        let thinned = thin(&pts);
        assert!(thinned.len() <= MAX_POINTS + 1);
        assert_eq!(thinned.last(), pts.last());
    }

    #[test]
    fn constant_series_renders() {
        let chart = LineChart {
            title: "a < b & c".into(),
            x_label: "x".into(),
            y_label: "y".into(),
            log_y: true,
            series: vec![Series { name: "s".into(), color: "red".into(), points: vec![(1.0, 0.0), (2.0, 0.0)] }],
        };
        let svg = chart.render();
        assert!(svg.contains("a &lt; b &amp; c"));
        assert!(!svg.contains("NaN") && !svg.contains("inf"));
    }
}
