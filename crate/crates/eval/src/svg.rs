//! Self-contained SVG plots of cost-efficiency curves with the
//! random-selection diagonal.

use std::fmt::Write;

use eam_core::{Benefit, CurvePoint};

const WIDTH: f64 = 520.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 64.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 56.0;
const COLORS: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"];

fn px(x: f64) -> f64 {
    LEFT + x * (WIDTH - LEFT - RIGHT)
}

fn py(y: f64) -> f64 {
    HEIGHT - BOTTOM - y * (HEIGHT - TOP - BOTTOM)
}

pub fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

pub fn render_curves(title: &str, benefit: Benefit, series: &[(String, &[CurvePoint])]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="22" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    for i in 0..=5 {
        let t = f64::from(i) / 5.0;
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#e0e0e0"/>"##,
            px(t),
            py(0.0),
            px(t),
            py(1.0)
        );
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#e0e0e0"/>"##,
            px(0.0),
            py(t),
            px(1.0),
            py(t)
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}%</text>"#,
            px(t),
            py(0.0) + 18.0,
            i * 20
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}%</text>"#,
            px(0.0) - 6.0,
            py(t) + 4.0,
            i * 20
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        px(0.0),
        py(1.0),
        px(1.0) - px(0.0),
        py(0.0) - py(1.0)
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">effort</text>"#,
        px(0.5),
        HEIGHT - 16.0
    );
    let y_label = match benefit {
        Benefit::Modules => "defective modules",
        Benefit::Defects => "defects",
    };
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.2}" text-anchor="middle" transform="rotate(-90 16 {:.2})">{y_label}</text>"#,
        py(0.5),
        py(0.5)
    );
    let _ = writeln!(
        s,
        r##"<line class="diagonal" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#777777" stroke-dasharray="6 4"/>"##,
        px(0.0),
        py(0.0),
        px(1.0),
        py(1.0)
    );

    for (k, (label, points)) in series.iter().enumerate() {
        let color = COLORS[k % COLORS.len()];
        let mut coords = String::new();
        for p in points.iter() {
            let _ = write!(coords, "{:.2},{:.2} ", px(p.effort), py(p.benefit));
        }
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"><title>{}</title></polyline>"#,
            coords.trim_end(),
            escape(label)
        );
    }

    // legend, bottom right where curves above the diagonal leave room
    let rows = series.len() + 1;
    let x0 = px(1.0) - 190.0;
    let y0 = py(0.0) - 12.0 - 18.0 * rows as f64;
    let _ = writeln!(
        s,
        r##"<rect x="{:.2}" y="{:.2}" width="180" height="{:.2}" fill="white" stroke="#999999"/>"##,
        x0,
        y0,
        18.0 * rows as f64 + 8.0
    );
    let mut entries: Vec<(String, &str, bool)> = series
        .iter()
        .enumerate()
        .map(|(k, (l, _))| (escape(l), COLORS[k % COLORS.len()], false))
        .collect();
    entries.push(("random selection".into(), "#777777", true));
    for (k, (label, color, dashed)) in entries.iter().enumerate() {
        let y = y0 + 16.0 + 18.0 * k as f64;
        let dash = if *dashed { r#" stroke-dasharray="6 4""# } else { "" };
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{color}" stroke-width="2"{dash}/>"#,
            x0 + 8.0,
            y - 4.0,
            x0 + 32.0,
            y - 4.0
        );
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}">{label}</text>"#, x0 + 38.0, y);
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn has_diagonal_and_one_polyline_per_series() {
        let pts = [
            CurvePoint { effort: 0.0, benefit: 0.0 },
            CurvePoint { effort: 1.0, benefit: 1.0 },
        ];
        let svg = render_curves("a < b", Benefit::Modules, &[("LOC".into(), &pts[..]), ("McCC".into(), &pts[..])]);
        assert!(svg.contains(r#"class="diagonal""#));
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("a &lt; b"));
        assert!(!svg.contains("href"));
        assert!(svg.ends_with("</svg>\n"));
    }
}
