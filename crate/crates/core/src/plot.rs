//! Deterministic static SVG plots of experiment summaries: mean final regret
//! against the swept parameter, one polyline per policy, error bars at ±std.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::io::fmt_sig9;
use crate::sim::SummaryRow;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

/// Parse a summary CSV (`experiment,policy,param,mean,std,trials`).
pub fn parse_summary_csv(bytes: &[u8]) -> Result<(String, Vec<SummaryRow>)> {
    let mut reader = csv::Reader::from_reader(bytes);
    let mut name = String::new();
    let mut rows = Vec::new();
    for rec in reader.records() {
        let rec = rec?;
        let field = |i: usize| rec.get(i).unwrap_or("");
        let num = |i: usize| -> Result<f64> {
            crate::io::parse_real(field(i))
                .ok_or_else(|| Error::invalid(format!("bad number `{}` in summary", field(i))))
        };
        name = field(0).to_string();
        let trials: u64 = field(5)
            .parse()
            .map_err(|_| Error::invalid(format!("bad trial count `{}`", field(5))))?;
        rows.push(SummaryRow {
            policy: field(1).to_string(),
            param: num(2)?,
            mean: num(3)?,
            std: num(4)?,
            trials,
            std_defined: trials > 1,
        });
    }
    Ok((name, rows))
}

fn nice_step(span: f64) -> f64 {
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag)
}

/// Render the summary of one experiment; `None` when there is nothing to draw.
pub fn render_plot(title: &str, x_label: &str, rows: &[SummaryRow]) -> Option<String> {
    let rows: Vec<&SummaryRow> = rows.iter().filter(|r| r.mean.is_finite() && r.param.is_finite()).collect();
    if rows.is_empty() {
        return None;
    }
    let mut by_policy: BTreeMap<&str, Vec<&SummaryRow>> = BTreeMap::new();
    for r in &rows {
        by_policy.entry(r.policy.as_str()).or_default().push(r);
    }
    for pts in by_policy.values_mut() {
        pts.sort_by(|a, b| a.param.total_cmp(&b.param));
    }
    let mut xs: Vec<f64> = rows.iter().map(|r| r.param).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let (x_lo, x_hi) = (xs[0], xs[xs.len() - 1]);
    let x_span = if x_hi > x_lo { x_hi - x_lo } else { 1.0 };
    let y_top = rows
        .iter()
        .map(|r| r.mean + if r.std.is_finite() { r.std } else { 0.0 })
        .fold(0.0, f64::max);
    let y_bot = rows.iter().map(|r| r.mean - r.std.max(0.0)).fold(0.0, f64::min);
    let step = nice_step(if y_top > y_bot { y_top - y_bot } else { 1.0 });
    let y_lo = (y_bot / step).floor() * step;
    let y_hi = ((y_top / step).ceil() * step).max(y_lo + step);

    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| {
        if x_hi > x_lo {
            LEFT + (x - x_lo) / x_span * plot_w
        } else {
            LEFT + plot_w / 2.0
        }
    };
    let py = |y: f64| TOP + (y_hi - y) / (y_hi - y_lo) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="22" text-anchor="middle" font-size="15">{}</text>"#, LEFT + plot_w / 2.0, escape(title));
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for &x in &xs {
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{1}" x2="{0:.2}" y2="{2}" stroke="black"/><text x="{0:.2}" y="{3}" text-anchor="middle">{4}</text>"#,
            px(x),
            TOP + plot_h,
            TOP + plot_h + 5.0,
            TOP + plot_h + 19.0,
            fmt_sig9(x)
        );
    }
    let mut y = y_lo;
    while y <= y_hi + step * 1e-9 {
        let _ = writeln!(
            s,
            r##"<line x1="{0}" y1="{1:.2}" x2="{2}" y2="{1:.2}" stroke="#dddddd"/><text x="{3}" y="{4:.2}" text-anchor="end">{5}</text>"##,
            LEFT,
            py(y),
            LEFT + plot_w,
            LEFT - 6.0,
            py(y) + 4.0,
            fmt_sig9((y / step).round() * step)
        );
        y += step;
    }
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, LEFT + plot_w / 2.0, HEIGHT - 18.0, escape(x_label));
    let _ = writeln!(
        s,
        r#"<text x="20" y="{0}" text-anchor="middle" transform="rotate(-90 20 {0})">mean final regret</text>"#,
        TOP + plot_h / 2.0
    );
    for (i, (policy, pts)) in by_policy.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let line: Vec<String> = pts.iter().map(|r| format!("{:.2},{:.2}", px(r.param), py(r.mean))).collect();
        let _ = writeln!(s, r#"<g stroke="{color}" fill="{color}">"#);
        if pts.len() > 1 {
            let _ = writeln!(s, r#"<polyline fill="none" stroke-width="2" points="{}"/>"#, line.join(" "));
        }
        for r in pts {
            if r.std > 0.0 && r.std.is_finite() {
                let _ = writeln!(
                    s,
                    r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}"/>"#,
                    px(r.param),
                    py(r.mean - r.std),
                    py(r.mean + r.std)
                );
            }
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#, px(r.param), py(r.mean));
        }
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let _ = writeln!(
            s,
            r#"<line x1="{0}" y1="{1}" x2="{2}" y2="{1}" stroke-width="2"/><text x="{3}" y="{4}" stroke="none" fill="black">{5}</text>"#,
            WIDTH - RIGHT + 15.0,
            ly,
            WIDTH - RIGHT + 40.0,
            WIDTH - RIGHT + 46.0,
            ly + 4.0,
            escape(policy)
        );
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    Some(s)
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
