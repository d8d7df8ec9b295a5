//! Minimal SVG renderings: line/marker plots and heat maps.

use std::fmt::Write as _;

use hmbec::sweep::{SweepResult, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Plot {
    Lines {
        x_label: String,
        y_label: String,
        series: Vec<Series>,
        markers: bool,
    },
    /// `values[i][j]` sits at `(xs[i], ys[j])`.
    Heat {
        x_label: String,
        y_label: String,
        xs: Vec<f64>,
        ys: Vec<f64>,
        values: Vec<Vec<f64>>,
    },
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;

fn bounds(vals: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = vals
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if lo > hi {
        return None;
    }
    if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { 0.05 * lo.abs() };
        return Some((lo - pad, hi + pad));
    }
    Some((lo, hi))
}

fn scale(v: f64, (lo, hi): (f64, f64), from: f64, to: f64) -> f64 {
    from + (v - lo) / (hi - lo) * (to - from)
}

/// Five-stop blue–green–yellow ramp.
fn colour(t: f64) -> String {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    if !t.is_finite() {
        return "#bbbbbb".into();
    }
    let t = t.clamp(0.0, 1.0) * 4.0;
    let i = (t.floor() as usize).min(3);
    let f = t - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let mix = |x: f64, y: f64| (x + (y - x) * f).round() as u8;
    format!("#{:02x}{:02x}{:02x}", mix(a.0, b.0), mix(a.1, b.1), mix(a.2, b.2))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn frame(out: &mut String, x_label: &str, y_label: &str, xb: (f64, f64), yb: (f64, f64)) {
    let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
    let _ = writeln!(
        out,
        r#"<rect x="{x0}" y="{y1}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        x1 - x0,
        y0 - y1
    );
    let _ = writeln!(
        out,
        r#"<text x="{x0}" y="{}" font-size="11">{:.4}</text>"#,
        y0 + 16.0,
        xb.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{x1}" y="{}" font-size="11" text-anchor="end">{:.4}</text>"#,
        y0 + 16.0,
        xb.1
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{y0}" font-size="11" text-anchor="end">{:.4}</text>"#,
        x0 - 4.0,
        yb.0
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{:.4}</text>"#,
        x0 - 4.0,
        y1 + 10.0,
        yb.1
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="13" text-anchor="middle">{}</text>"#,
        0.5 * (x0 + x1),
        HEIGHT - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="15" y="{}" font-size="13" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
        0.5 * (y0 + y1),
        0.5 * (y0 + y1),
        escape(y_label)
    );
}

pub fn render_svg(plot: &Plot) -> Result<String, String> {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    match plot {
        Plot::Lines {
            x_label,
            y_label,
            series,
            markers,
        } => {
            let all = || series.iter().flat_map(|s| s.points.iter());
            if all().next().is_none() {
                return Err("nothing to plot: the result is empty".into());
            }
            let xb = bounds(all().map(|p| p.0)).ok_or("no finite x values to plot")?;
            let yb = bounds(all().map(|p| p.1)).ok_or("no finite y values to plot")?;
            frame(&mut out, x_label, y_label, xb, yb);
            for (k, s) in series.iter().enumerate() {
                let stroke = colour(if series.len() > 1 {
                    k as f64 / (series.len() - 1) as f64
                } else {
                    0.2
                });
                let pts: Vec<(f64, f64)> = s
                    .points
                    .iter()
                    .filter(|p| p.0.is_finite() && p.1.is_finite())
                    .map(|&(x, y)| {
                        (
                            scale(x, xb, MARGIN, WIDTH - MARGIN),
                            scale(y, yb, HEIGHT - MARGIN, MARGIN),
                        )
                    })
                    .collect();
                if *markers || pts.len() == 1 {
                    for (x, y) in &pts {
                        let _ = writeln!(out, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{stroke}"/>"#);
                    }
                } else {
                    let path: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
                    let _ = writeln!(
                        out,
                        r#"<polyline fill="none" stroke="{stroke}" stroke-width="1.5" points="{}"><title>{}</title></polyline>"#,
                        path.join(" "),
                        escape(&s.name)
                    );
                }
            }
        }
        Plot::Heat {
            x_label,
            y_label,
            xs,
            ys,
            values,
        } => {
            if xs.is_empty() || ys.is_empty() {
                return Err("nothing to plot: the result is empty".into());
            }
            if values.len() != xs.len() || values.iter().any(|r| r.len() != ys.len()) {
                return Err("heat map values do not match the axes".into());
            }
            let vb = bounds(values.iter().flatten().copied()).ok_or("no finite values to plot")?;
            let xb = bounds(xs.iter().copied()).unwrap();
            let yb = bounds(ys.iter().copied()).unwrap();
            frame(&mut out, x_label, y_label, xb, yb);
            let cw = (WIDTH - 2.0 * MARGIN) / xs.len() as f64;
            let ch = (HEIGHT - 2.0 * MARGIN) / ys.len() as f64;
            let extreme = |better: fn(f64, f64) -> bool| {
                let mut best: Option<(usize, usize, f64)> = None;
                for (i, row) in values.iter().enumerate() {
                    for (j, &v) in row.iter().enumerate() {
                        if v.is_finite() && best.is_none_or(|b| better(v, b.2)) {
                            best = Some((i, j, v));
                        }
                    }
                }
                best.map(|b| (b.0, b.1))
            };
            let min_cell = extreme(|a, b| a < b);
            let max_cell = extreme(|a, b| a > b);
            for (i, row) in values.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    let x = MARGIN + i as f64 * cw;
                    let y = HEIGHT - MARGIN - (j + 1) as f64 * ch;
                    let class = if Some((i, j)) == min_cell {
                        r#" class="min""#
                    } else if Some((i, j)) == max_cell {
                        r#" class="max""#
                    } else {
                        ""
                    };
                    let _ = writeln!(
                        out,
                        r#"<rect{class} data-i="{i}" data-j="{j}" x="{x:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                        cw + 0.01,
                        ch + 0.01,
                        colour(scale(v, vb, 0.0, 1.0))
                    );
                }
            }
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Numeric view of an output column; text labels become their rank among
/// the distinct labels.
fn numeric_column(result: &SweepResult, output: &str) -> Result<Vec<f64>, String> {
    let col = result
        .column(output)
        .ok_or_else(|| format!("no output column '{output}'"))?;
    let mut labels: Vec<&str> = col
        .iter()
        .filter_map(|v| match v {
            Some(Value::Text(s)) => Some(s.as_str()),
            _ => None,
        })
        .collect();
    labels.sort_unstable();
    labels.dedup();
    Ok(col
        .iter()
        .map(|v| match v {
            Some(Value::Text(s)) => labels.iter().position(|l| l == s).unwrap() as f64,
            Some(v) => v.as_f64().unwrap_or(f64::NAN),
            None => f64::NAN,
        })
        .collect())
}

/// Line plot of one or more outputs for 1-axis sweeps, heat map of the
/// first output for 2-axis sweeps.
pub fn plot_sweep(result: &SweepResult, outputs: &[&str]) -> Result<Plot, String> {
    if result.rows.is_empty() {
        return Err("nothing to plot: the result is empty".into());
    }
    let axes = &result.spec.axes;
    match axes.len() {
        1 => {
            let series = outputs
                .iter()
                .map(|o| {
                    let ys = numeric_column(result, o)?;
                    Ok(Series {
                        name: o.to_string(),
                        points: result.rows.iter().zip(ys).map(|(r, y)| (r.point[0], y)).collect(),
                    })
                })
                .collect::<Result<Vec<_>, String>>()?;
            Ok(Plot::Lines {
                x_label: axes[0].name.clone(),
                y_label: outputs.join(", "),
                series,
                markers: result.rows.len() == 1,
            })
        }
        2 => {
            let first = outputs.first().ok_or("no output selected")?;
            let vals = numeric_column(result, first)?;
            let (nx, ny) = (axes[0].count, axes[1].count);
            let values = (0..nx).map(|i| vals[i * ny..(i + 1) * ny].to_vec()).collect();
            Ok(Plot::Heat {
                x_label: axes[0].name.clone(),
                y_label: axes[1].name.clone(),
                xs: axes[0].values(),
                ys: axes[1].values(),
                values,
            })
        }
        n => Err(format!("cannot plot a sweep with {n} axes")),
    }
}
