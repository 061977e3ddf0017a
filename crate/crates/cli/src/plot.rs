//! Deterministic SVG line plots for trajectories and curve snapshots.

use curvelab::diagnostics::DiagnosticsRecord;
use curvelab::Curve;

const WIDTH: f64 = 840.0;
const HEIGHT: f64 = 520.0;
const MARGIN_L: f64 = 90.0;
const MARGIN_R: f64 = 30.0;
const MARGIN_T: f64 = 50.0;
const MARGIN_B: f64 = 60.0;

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn fmt(v: f64) -> String {
    format!("{v:.4}")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e-3 && v.abs() < 1e4 {
        format!("{v:.4}")
    } else {
        format!("{v:.2e}")
    }
}

/// One line plot; series are `(label, points)`. With `log_y` the y values
/// must be positive and are drawn on a log10 scale.
pub fn line_plot_svg(title: &str, series: &[(String, Vec<(f64, f64)>)], log_y: bool) -> String {
    let transform = |y: f64| if log_y { y.log10() } else { y };
    let mut xmin = f64::INFINITY;
    let mut xmax = f64::NEG_INFINITY;
    let mut ymin = f64::INFINITY;
    let mut ymax = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in pts {
            if log_y && !(y > 0.0) {
                continue;
            }
            let ty = transform(y);
            if !x.is_finite() || !ty.is_finite() {
                continue;
            }
            xmin = xmin.min(x);
            xmax = xmax.max(x);
            ymin = ymin.min(ty);
            ymax = ymax.max(ty);
        }
    }
    if !xmin.is_finite() || !ymin.is_finite() {
        xmin = 0.0;
        xmax = 1.0;
        ymin = 0.0;
        ymax = 1.0;
    }
    if xmax == xmin {
        xmax = xmin + 1.0;
    }
    if ymax == ymin {
        ymax = ymin + 1.0;
        ymin -= 1.0;
    }
    let px = |x: f64| MARGIN_L + (x - xmin) / (xmax - xmin) * (WIDTH - MARGIN_L - MARGIN_R);
    let py = |y: f64| HEIGHT - MARGIN_B - (y - ymin) / (ymax - ymin) * (HEIGHT - MARGIN_T - MARGIN_B);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    svg.push_str(&format!(
        "<text x=\"{}\" y=\"28\" font-family=\"monospace\" font-size=\"16\">{}</text>\n",
        MARGIN_L, title
    ));
    // Axes and ticks.
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(MARGIN_L),
        fmt(HEIGHT - MARGIN_B),
        fmt(WIDTH - MARGIN_R),
        fmt(HEIGHT - MARGIN_B)
    ));
    svg.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"black\"/>\n",
        fmt(MARGIN_L),
        fmt(MARGIN_T),
        fmt(MARGIN_L),
        fmt(HEIGHT - MARGIN_B)
    ));
    for i in 0..=4 {
        let fx = xmin + (xmax - xmin) * i as f64 / 4.0;
        let fy = ymin + (ymax - ymin) * i as f64 / 4.0;
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">{}</text>\n",
            fmt(px(fx)),
            fmt(HEIGHT - MARGIN_B + 18.0),
            tick_label(fx)
        ));
        let label = if log_y { format!("1e{}", tick_label(fy)) } else { tick_label(fy) };
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">{}</text>\n",
            fmt(MARGIN_L - 6.0),
            fmt(py(fy) + 4.0),
            label
        ));
        svg.push_str(&format!(
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#dddddd\"/>\n",
            fmt(MARGIN_L),
            fmt(py(fy)),
            fmt(WIDTH - MARGIN_R),
            fmt(py(fy))
        ));
    }
    for (si, (label, pts)) in series.iter().enumerate() {
        let color = PALETTE[si % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .filter(|(_, y)| !log_y || *y > 0.0)
            .map(|&(x, y)| format!("{},{}", fmt(px(x)), fmt(py(transform(y)))))
            .collect();
        if path.is_empty() {
            continue;
        }
        svg.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
            color,
            path.join(" ")
        ));
        svg.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" fill=\"{}\">{}</text>\n",
            fmt(WIDTH - MARGIN_R - 180.0),
            fmt(MARGIN_T + 16.0 * si as f64),
            color,
            label
        ));
    }
    svg.push_str("</svg>\n");
    svg
}

/// Per-diagnostic plots of a trajectory, one SVG per field.
pub fn trajectory_plots(records: &[DiagnosticsRecord]) -> Vec<(String, String)> {
    let fields: [(&str, fn(&DiagnosticsRecord) -> f64); 9] = [
        ("L", |r| r.length),
        ("E", |r| r.bending),
        ("Kosc", |r| r.kosc),
        ("omega_hat", |r| r.omega_hat),
        ("kbar", |r| r.kbar),
        ("ks_l2sq", |r| r.ks_l2sq),
        ("kss_l2sq", |r| r.kss_l2sq),
        ("area", |r| r.area),
        ("kinf", |r| r.k_inf_scaled),
    ];
    let mut out = Vec::new();
    for (name, get) in fields {
        let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.t, get(r))).collect();
        let svg = line_plot_svg(&format!("{name} vs t"), &[(name.to_string(), pts)], false);
        out.push((format!("{name}.svg"), svg));
    }
    // Log-scale energy decay.
    let pts: Vec<(f64, f64)> = records.iter().map(|r| (r.t, r.bending)).collect();
    out.push((
        "E_log.svg".to_string(),
        line_plot_svg("log10 E vs t", &[("E".to_string(), pts)], true),
    ));
    out
}

/// Overlay of curve snapshots in the plane.
pub fn snapshot_overlay(snapshots: &[(f64, Curve)]) -> String {
    let series: Vec<(String, Vec<(f64, f64)>)> = snapshots
        .iter()
        .map(|(t, c)| {
            (
                format!("t = {t:.4e}"),
                c.nodes().iter().map(|p| (p.x, p.y)).collect(),
            )
        })
        .collect();
    line_plot_svg("curve snapshots", &series, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plotting_is_deterministic() {
        let pts: Vec<(f64, f64)> = (0..50).map(|i| (i as f64 * 0.1, (i as f64 * 0.3).sin())).collect();
        let a = line_plot_svg("demo", &[("s".into(), pts.clone())], false);
        let b = line_plot_svg("demo", &[("s".into(), pts)], false);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.contains("polyline"));
    }

    #[test]
    fn log_plot_skips_nonpositive_values() {
        let pts = vec![(0.0, 1.0), (1.0, 0.0), (2.0, 1e-3)];
        let svg = line_plot_svg("log", &[("s".into(), pts)], true);
        assert!(svg.contains("polyline"));
    }
}
