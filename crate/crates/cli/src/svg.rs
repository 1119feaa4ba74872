//! Static SVG render of level curves in the probability triangle.

use std::fmt::Write as _;

use crate::format::sig;

const SIZE: f64 = 480.0;
const MARGIN: f64 = 48.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn to_canvas(p: (f64, f64)) -> (f64, f64) {
    let side = SIZE - 2.0 * MARGIN;
    (MARGIN + p.0 * side, SIZE - MARGIN - p.1 * side)
}

/// One polyline per level, in `(p_worst, p_best)` coordinates.
pub fn render(curves: &[(f64, Vec<(f64, f64)>)], title: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (ox, oy) = to_canvas((0.0, 0.0));
    let (rx, _) = to_canvas((1.0, 0.0));
    let (_, ty) = to_canvas((0.0, 1.0));
    let _ = writeln!(
        s,
        r#"<polygon points="{ox},{oy} {rx},{oy} {ox},{ty}" fill="none" stroke="black" stroke-width="1.5"/>"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">p(worst)</text>"#,
        (ox + rx) / 2.0,
        oy + 32.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 {} {})">p(best)</text>"#,
        ox - 28.0,
        (oy + ty) / 2.0,
        ox - 28.0,
        (oy + ty) / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        SIZE / 2.0,
        escape(title)
    );
    for (k, (level, pts)) in curves.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let coords: Vec<String> = pts
            .iter()
            .map(|&p| {
                let (x, y) = to_canvas(p);
                format!("{},{}", sig(x), sig(y))
            })
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="1.5"><title>U = {}</title></polyline>"#,
            coords.join(" "),
            sig(*level)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_one_polyline_per_level() {
        let svg = render(&[(0.2, vec![(0.0, 0.2), (0.5, 0.3)]), (0.8, vec![(0.0, 0.8)])], "EU <3>");
        assert_eq!(svg.matches("<polyline").count(), 2);
        assert!(svg.contains("EU &lt;3&gt;"));
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
    }
}
