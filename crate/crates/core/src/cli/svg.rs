//! Minimal single-file SVG line plots. Presentation only; nothing here is
//! load-bearing for verification.

use std::fmt::Write as _;
use std::path::Path;

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const MARGIN: f64 = 60.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Writes a line plot of the given series; `log_x` plots against log10 x.
pub fn line_plot(
    path: &Path,
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(&str, &[(f64, f64)])],
    log_x: bool,
) -> std::io::Result<()> {
    let xs = |x: f64| if log_x { x.log10() } else { x };
    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in *pts {
            x_min = x_min.min(xs(x));
            x_max = x_max.max(xs(x));
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if !x_min.is_finite() || x_max <= x_min {
        x_max = x_min + 1.0;
    }
    if !y_min.is_finite() || y_max <= y_min {
        y_max = y_min + 1.0;
    }
    let pad = 0.05 * (y_max - y_min);
    y_min -= pad;
    y_max += pad;

    let px = |x: f64| MARGIN + (xs(x) - x_min) / (x_max - x_min) * (WIDTH - 2.0 * MARGIN);
    let py = |y: f64| HEIGHT - MARGIN - (y - y_min) / (y_max - y_min) * (HEIGHT - 2.0 * MARGIN);

    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">"
    );
    let _ = writeln!(s, "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>");
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"16\">{title}</text>",
        WIDTH / 2.0
    );
    // axes
    let _ = writeln!(
        s,
        "<line x1=\"{m}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\
         <line x1=\"{m}\" y1=\"{t}\" x2=\"{m}\" y2=\"{b}\" stroke=\"black\"/>",
        m = MARGIN,
        r = WIDTH - MARGIN,
        t = MARGIN,
        b = HEIGHT - MARGIN
    );
    let _ = writeln!(
        s,
        "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"12\">{x_label}</text>",
        WIDTH / 2.0,
        HEIGHT - 16.0
    );
    let _ = writeln!(
        s,
        "<text x=\"16\" y=\"{}\" text-anchor=\"middle\" font-family=\"sans-serif\" \
         font-size=\"12\" transform=\"rotate(-90 16 {})\">{y_label}</text>",
        HEIGHT / 2.0,
        HEIGHT / 2.0
    );
    // tick labels at the extremes
    let _ = writeln!(
        s,
        "<text x=\"{m}\" y=\"{b}\" font-family=\"sans-serif\" font-size=\"10\">{x_min:.3}</text>\
         <text x=\"{r}\" y=\"{b}\" text-anchor=\"end\" font-family=\"sans-serif\" \
         font-size=\"10\">{x_max:.3}</text>",
        m = MARGIN,
        r = WIDTH - MARGIN,
        b = HEIGHT - MARGIN + 14.0
    );
    let _ = writeln!(
        s,
        "<text x=\"{x}\" y=\"{t}\" text-anchor=\"end\" font-family=\"sans-serif\" \
         font-size=\"10\">{y_max:.4}</text>\
         <text x=\"{x}\" y=\"{b}\" text-anchor=\"end\" font-family=\"sans-serif\" \
         font-size=\"10\">{y_min:.4}</text>",
        x = MARGIN - 4.0,
        t = MARGIN + 4.0,
        b = HEIGHT - MARGIN
    );

    for (k, (name, pts)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut d = String::new();
        for (i, &(x, y)) in pts.iter().enumerate() {
            let _ = write!(d, "{}{:.2},{:.2} ", if i == 0 { "M" } else { "L" }, px(x), py(y));
        }
        let _ = writeln!(
            s,
            "<path d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\"/>"
        );
        let _ = writeln!(
            s,
            "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"11\" \
             fill=\"{color}\">{name}</text>",
            WIDTH - MARGIN - 140.0,
            MARGIN + 16.0 * (k + 1) as f64
        );
    }
    let _ = writeln!(s, "</svg>");
    std::fs::write(path, s)
}
