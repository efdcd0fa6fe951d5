//! Minimal SVG stem-plot writer. No plotting dependency: the figures are
//! part of the tested artifact, so their rendering must be deterministic.

use std::fmt::Write as _;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 360.0;
const MARGIN_LEFT: f64 = 56.0;
const MARGIN_RIGHT: f64 = 16.0;
const MARGIN_TOP: f64 = 28.0;
const MARGIN_BOTTOM: f64 = 40.0;

/// Render one stem per value: a vertical line from the baseline up to the
/// value, with axes, ticks, and a title.
pub fn stem_plot(title: &str, values: &[f64]) -> String {
    let n = values.len().max(1);
    let y_max = values.iter().copied().fold(0.0f64, f64::max).max(1e-12);
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_of = |i: usize| MARGIN_LEFT + plot_w * (i as f64 + 0.5) / n as f64;
    let y_of = |v: f64| MARGIN_TOP + plot_h * (1.0 - v / y_max);
    let baseline = MARGIN_TOP + plot_h;

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    svg.push('\n');
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="18" font-family="monospace" font-size="13" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        title
    );
    // axes
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN_LEFT}" y1="{baseline}" x2="{}" y2="{baseline}" stroke="black" stroke-width="1"/>"#,
        WIDTH - MARGIN_RIGHT
    );
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" y2="{baseline}" stroke="black" stroke-width="1"/>"#
    );
    // y ticks at 0, max/2, max
    for frac in [0.0, 0.5, 1.0] {
        let v = y_max * frac;
        let y = y_of(v);
        let _ = writeln!(
            svg,
            r#"<line x1="{}" y1="{y}" x2="{MARGIN_LEFT}" y2="{y}" stroke="black" stroke-width="1"/>"#,
            MARGIN_LEFT - 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="11" text-anchor="end">{v:.4}</text>"#,
            MARGIN_LEFT - 7.0,
            y + 4.0
        );
    }
    // x ticks at 0, n/2, n-1
    for i in [0, n / 2, n - 1] {
        let x = x_of(i);
        let _ = writeln!(
            svg,
            r#"<line x1="{x}" y1="{baseline}" x2="{x}" y2="{}" stroke="black" stroke-width="1"/>"#,
            baseline + 4.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x}" y="{}" font-family="monospace" font-size="11" text-anchor="middle">{i}</text>"#,
            baseline + 18.0
        );
    }
    // stems
    for (i, &v) in values.iter().enumerate() {
        let x = x_of(i);
        let _ = writeln!(
            svg,
            r#"<line x1="{x}" y1="{baseline}" x2="{x}" y2="{}" stroke="steelblue" stroke-width="1"/>"#,
            y_of(v)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stem_plot_is_wellformed_and_deterministic() {
        let values = [0.1, 0.4, 0.0, 0.25];
        let a = stem_plot("demo", &values);
        let b = stem_plot("demo", &values);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        // one stem per value plus two axes and six tick lines
        assert_eq!(a.matches("<line").count(), values.len() + 2 + 6);
    }

    #[test]
    fn stem_plot_handles_all_zero() {
        let s = stem_plot("zeros", &[0.0, 0.0]);
        assert!(s.contains("</svg>"));
    }
}
