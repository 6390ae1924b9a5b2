//! Plain-text SVG charts. Every number is written with fixed precision so
//! identical inputs give identical bytes.

use std::fmt::Write as _;

const FONT: &str = "font-family=\"Helvetica, Arial, sans-serif\"";
const AXIS: &str = "#333333";
const GRID: &str = "#e5e5e5";
const POSITIVE: &str = "#2e86c1";
const NEGATIVE: &str = "#cb4335";
const PALETTE: [&str; 8] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
];

pub fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            _ => out.push(c),
        }
    }
    out
}

fn open(svg: &mut String, width: f64, height: f64, title: &str) {
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{width:.0}" height="{height:.0}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="24" text-anchor="middle" {FONT} font-size="16" font-weight="bold">{}</text>"#,
        width / 2.0,
        escape_xml(title)
    );
}

fn close(svg: &mut String) {
    svg.push_str("</svg>\n");
}

/// One named bar series over shared categories. `None` leaves a gap.
pub struct BarSeries {
    pub name: String,
    pub values: Vec<Option<f64>>,
}

/// Vertical grouped bars: one group per category, one bar per series.
pub fn grouped_bar_chart(title: &str, y_label: &str, categories: &[String], series: &[BarSeries]) -> String {
    let (width, height) = (900.0, 460.0);
    let (left, right, top, bottom) = (70.0, 170.0, 50.0, 70.0);
    let plot_w = width - left - right;
    let plot_h = height - top - bottom;
    let y_max = series
        .iter()
        .flat_map(|s| s.values.iter().flatten().copied())
        .fold(0.0_f64, f64::max);
    let y_max = nice_ceiling(y_max);

    let mut svg = String::new();
    open(&mut svg, width, height, title);

    for i in 0..=5 {
        let v = y_max * i as f64 / 5.0;
        let y = top + plot_h - plot_h * i as f64 / 5.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{left:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{GRID}"/>"#,
            left + plot_w
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end" {FONT} font-size="11">{v:.2}</text>"#,
            left - 6.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.2}" text-anchor="middle" {FONT} font-size="12" transform="rotate(-90 18 {:.2})">{}</text>"#,
        top + plot_h / 2.0,
        top + plot_h / 2.0,
        escape_xml(y_label)
    );

    let group_w = plot_w / categories.len().max(1) as f64;
    let bar_w = group_w * 0.8 / series.len().max(1) as f64;
    for (ci, category) in categories.iter().enumerate() {
        let gx = left + group_w * ci as f64 + group_w * 0.1;
        let _ = writeln!(svg, r#"<g class="group" data-category="{}">"#, escape_xml(category));
        for (si, s) in series.iter().enumerate() {
            if let Some(Some(v)) = s.values.get(ci) {
                let h = if y_max > 0.0 { plot_h * v / y_max } else { 0.0 };
                let _ = writeln!(
                    svg,
                    r#"<rect x="{:.2}" y="{:.2}" width="{bar_w:.2}" height="{h:.2}" fill="{}"><title>{}: {v:.3}</title></rect>"#,
                    gx + bar_w * si as f64,
                    top + plot_h - h,
                    PALETTE[si % PALETTE.len()],
                    escape_xml(&s.name)
                );
            }
        }
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" {FONT} font-size="11">{}</text>"#,
            gx + group_w * 0.4,
            top + plot_h + 18.0,
            escape_xml(category)
        );
        svg.push_str("</g>\n");
    }
    let _ = writeln!(
        svg,
        r#"<line x1="{left:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{AXIS}"/>"#,
        top + plot_h,
        left + plot_w,
        top + plot_h
    );

    for (si, s) in series.iter().enumerate() {
        let y = top + 10.0 + 20.0 * si as f64;
        let x = left + plot_w + 20.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{x:.2}" y="{:.2}" width="12" height="12" fill="{}"/>"#,
            y - 10.0,
            PALETTE[si % PALETTE.len()]
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{y:.2}" {FONT} font-size="12">{}</text>"#,
            x + 18.0,
            escape_xml(&s.name)
        );
    }
    close(&mut svg);
    svg
}

/// A small-multiples panel of per-bin (positive, negative) counts.
pub struct SentimentPanel {
    pub label: String,
    pub bins: Vec<(usize, usize)>,
}

/// Grid of panels; positive bars rise above each panel's axis and negative
/// bars fall below it. All panels share one y scale.
pub fn sentiment_small_multiples(title: &str, x_label: &str, panels: &[SentimentPanel], columns: usize) -> String {
    let columns = columns.max(1);
    let rows = panels.len().div_ceil(columns).max(1);
    let (panel_w, panel_h) = (200.0, 130.0);
    let (pad, top) = (16.0, 44.0);
    let width = columns as f64 * (panel_w + pad) + pad;
    let height = top + rows as f64 * (panel_h + pad) + 30.0;
    let y_max = panels
        .iter()
        .flat_map(|p| p.bins.iter().map(|&(a, b)| a.max(b)))
        .max()
        .unwrap_or(0)
        .max(1) as f64;
    let max_bins = panels.iter().map(|p| p.bins.len()).max().unwrap_or(0).max(1) as f64;

    let mut svg = String::new();
    open(&mut svg, width, height, title);
    for (i, panel) in panels.iter().enumerate() {
        let px = pad + (i % columns) as f64 * (panel_w + pad);
        let py = top + (i / columns) as f64 * (panel_h + pad);
        let inner_top = py + 18.0;
        let half = (panel_h - 22.0) / 2.0;
        let axis_y = inner_top + half;
        let bar_w = panel_w / max_bins;
        let _ = writeln!(svg, r#"<g class="panel" data-label="{}">"#, escape_xml(&panel.label));
        let _ = writeln!(
            svg,
            r#"<rect x="{px:.2}" y="{py:.2}" width="{panel_w:.2}" height="{panel_h:.2}" fill="none" stroke="{GRID}"/>"#
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" {FONT} font-size="11">{}</text>"#,
            px + 4.0,
            py + 13.0,
            escape_xml(&panel.label)
        );
        for (b, &(pos, neg)) in panel.bins.iter().enumerate() {
            let x = px + bar_w * b as f64 + bar_w * 0.1;
            let w = bar_w * 0.8;
            if pos > 0 {
                let h = half * pos as f64 / y_max;
                let _ = writeln!(
                    svg,
                    r#"<rect x="{x:.2}" y="{:.2}" width="{w:.2}" height="{h:.2}" fill="{POSITIVE}"/>"#,
                    axis_y - h
                );
            }
            if neg > 0 {
                let h = half * neg as f64 / y_max;
                let _ = writeln!(
                    svg,
                    r#"<rect x="{x:.2}" y="{axis_y:.2}" width="{w:.2}" height="{h:.2}" fill="{NEGATIVE}"/>"#
                );
            }
        }
        let _ = writeln!(
            svg,
            r#"<line x1="{px:.2}" y1="{axis_y:.2}" x2="{:.2}" y2="{axis_y:.2}" stroke="{AXIS}"/>"#,
            px + panel_w
        );
        svg.push_str("</g>\n");
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle" {FONT} font-size="12">{}</text>"#,
        width / 2.0,
        height - 10.0,
        escape_xml(x_label)
    );
    close(&mut svg);
    svg
}

/// Term bars for one topic.
pub struct TopicPanel {
    pub label: String,
    pub terms: Vec<(String, f64)>,
}

/// One panel per topic with horizontal bars for its top terms.
pub fn topic_panels(title: &str, panels: &[TopicPanel], columns: usize) -> String {
    let columns = columns.max(1);
    let rows = panels.len().div_ceil(columns).max(1);
    let max_terms = panels.iter().map(|p| p.terms.len()).max().unwrap_or(0).max(1);
    let (panel_w, row_h) = (240.0, 16.0);
    let panel_h = 26.0 + row_h * max_terms as f64;
    let (pad, top) = (16.0, 44.0);
    let width = columns as f64 * (panel_w + pad) + pad;
    let height = top + rows as f64 * (panel_h + pad);
    let label_w = 90.0;

    let mut svg = String::new();
    open(&mut svg, width, height, title);
    for (i, panel) in panels.iter().enumerate() {
        let px = pad + (i % columns) as f64 * (panel_w + pad);
        let py = top + (i / columns) as f64 * (panel_h + pad);
        let w_max = panel.terms.iter().map(|t| t.1).fold(0.0_f64, f64::max);
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(svg, r#"<g class="panel" data-label="{}">"#, escape_xml(&panel.label));
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" {FONT} font-size="12" font-weight="bold">{}</text>"#,
            px,
            py + 14.0,
            escape_xml(&panel.label)
        );
        for (r, (term, weight)) in panel.terms.iter().enumerate() {
            let y = py + 22.0 + row_h * r as f64;
            let bar = if w_max > 0.0 {
                (panel_w - label_w - 8.0) * weight / w_max
            } else {
                0.0
            };
            let _ = writeln!(
                svg,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="end" {FONT} font-size="11">{}</text>"#,
                px + label_w - 4.0,
                y + 11.0,
                escape_xml(term)
            );
            let _ = writeln!(
                svg,
                r#"<rect x="{:.2}" y="{:.2}" width="{bar:.2}" height="{:.2}" fill="{color}"><title>{weight:.4}</title></rect>"#,
                px + label_w,
                y + 2.0,
                row_h - 4.0
            );
        }
        svg.push_str("</g>\n");
    }
    close(&mut svg);
    svg
}

fn nice_ceiling(v: f64) -> f64 {
    if v <= 0.0 {
        return 1.0;
    }
    let magnitude = 10f64.powf(v.log10().floor());
    for step in [1.0, 2.0, 2.5, 5.0, 10.0] {
        if step * magnitude >= v {
            return step * magnitude;
        }
    }
    10.0 * magnitude
}
