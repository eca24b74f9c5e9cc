//! Minimal static SVG emission for gap-vs-iteration curves on a log scale.
//!
//! Deterministic output: no timestamps, fixed palette, fixed layout.

const WIDTH: f64 = 900.0;
const HEIGHT: f64 = 560.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 150.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 50.0;
const GAP_FLOOR: f64 = 1e-17;

const PALETTE: [&str; 9] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22",
];

/// Renders one polyline per `(name, gaps)` curve, `gaps[k]` plotted at
/// iteration `k + 1`, y on a log₁₀ scale (values clamped to a positive
/// floor).
pub fn gap_curves_svg(curves: &[(String, Vec<f64>)], iters: usize) -> String {
    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;

    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, gaps) in curves {
        for &g in gaps {
            let v = g.max(GAP_FLOOR).log10();
            y_min = y_min.min(v);
            y_max = y_max.max(v);
        }
    }
    if !y_min.is_finite() || !y_max.is_finite() {
        y_min = -1.0;
        y_max = 1.0;
    }
    if (y_max - y_min).abs() < 1e-9 {
        y_max = y_min + 1.0;
    }
    let x_max = iters.max(1) as f64;

    let x_of = |k: f64| MARGIN_LEFT + (k / x_max) * plot_w;
    let y_of = |log_gap: f64| MARGIN_TOP + (y_max - log_gap) / (y_max - y_min) * plot_h;

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" \
         viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    // Axes.
    let x0 = MARGIN_LEFT;
    let y0 = MARGIN_TOP + plot_h;
    svg.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{y0}\" x2=\"{}\" y2=\"{y0}\" stroke=\"black\"/>\n",
        MARGIN_LEFT + plot_w
    ));
    svg.push_str(&format!(
        "<line x1=\"{x0}\" y1=\"{MARGIN_TOP}\" x2=\"{x0}\" y2=\"{y0}\" stroke=\"black\"/>\n"
    ));
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">iteration k</text>\n",
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0
    ));
    svg.push_str(&format!(
        "<text x=\"18\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\" \
         transform=\"rotate(-90 18 {})\">gap (log10)</text>\n",
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0
    ));

    // Horizontal gridlines at integer log10 levels.
    let mut level = y_min.ceil();
    while level <= y_max {
        let y = y_of(level);
        svg.push_str(&format!(
            "<line x1=\"{x0}\" y1=\"{y:.2}\" x2=\"{}\" y2=\"{y:.2}\" stroke=\"#dddddd\"/>\n",
            MARGIN_LEFT + plot_w
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"11\" text-anchor=\"end\">1e{}</text>\n",
            x0 - 6.0,
            y + 4.0,
            level as i64
        ));
        level += 1.0;
    }

    // Curves and legend.
    for (i, (name, gaps)) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut points = String::new();
        for (k, &g) in gaps.iter().enumerate() {
            let x = x_of((k + 1) as f64);
            let y = y_of(g.max(GAP_FLOOR).log10());
            points.push_str(&format!("{x:.2},{y:.2} "));
        }
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{color}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            points.trim_end()
        ));
        let legend_y = MARGIN_TOP + 16.0 * i as f64 + 10.0;
        svg.push_str(&format!(
            "<line x1=\"{:.2}\" y1=\"{legend_y:.2}\" x2=\"{:.2}\" y2=\"{legend_y:.2}\" \
             stroke=\"{color}\" stroke-width=\"2\"/>\n",
            MARGIN_LEFT + plot_w + 10.0,
            MARGIN_LEFT + plot_w + 34.0
        ));
        svg.push_str(&format!(
            "<text x=\"{:.2}\" y=\"{:.2}\" font-size=\"12\">{name}</text>\n",
            MARGIN_LEFT + plot_w + 40.0,
            legend_y + 4.0
        ));
    }

    svg.push_str("</svg>\n");
    svg
}
