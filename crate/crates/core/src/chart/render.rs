use std::fmt::Write;

use super::layout::{ChartScene, Dot, SegmentKind};

const UNIT: f64 = 28.0;
const MARGIN: f64 = 40.0;
const SLOT: f64 = 7.0;
const RADIUS: f64 = 3.0;
const LEGEND_WIDTH: f64 = 230.0;

/// SVG color keyword for a legend color name ("light green" → "lightgreen").
pub fn svg_color(name: &str) -> String {
    name.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_lowercase()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Frame {
    height: f64,
}

impl Frame {
    fn x(&self, s: i32) -> f64 {
        MARGIN + s as f64 * UNIT
    }

    fn y(&self, f: i32) -> f64 {
        self.height - MARGIN - f as f64 * UNIT
    }

    fn dot(&self, d: &Dot) -> (f64, f64) {
        let off = (d.slot as f64 - (d.slots as f64 - 1.0) / 2.0) * SLOT;
        (self.x(d.s) + off, self.y(d.f))
    }
}

/// Renders a scene as a standalone SVG 1.1 document. The output depends only
/// on the scene.
pub fn render_svg(scene: &ChartScene) -> String {
    let w = scene.window;
    let chart_w = MARGIN * 2.0 + w.max_stem.max(0) as f64 * UNIT;
    let rows = scene.legend.len() as f64 + 2.0;
    let chart_h = (MARGIN * 2.0 + w.max_filtration.max(0) as f64 * UNIT).max(rows * 16.0 + MARGIN);
    let width = chart_w + LEGEND_WIDTH;
    let fr = Frame { height: chart_h };
    let mut o = String::new();
    let _ = writeln!(o, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        o,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{chart_h:.0}" viewBox="0 0 {width:.0} {chart_h:.0}">"#
    );
    let _ = writeln!(o, r#"<title>{}</title>"#, escape(&scene.title));
    let _ = writeln!(o, r#"<rect x="0" y="0" width="{width:.0}" height="{chart_h:.0}" fill="white"/>"#);

    let _ = writeln!(o, r##"<g id="grid" stroke="#e8e8e8" stroke-width="0.5">"##);
    for s in 0..=w.max_stem.max(0) {
        let _ = writeln!(o, r#"<line x1="{0:.1}" y1="{1:.1}" x2="{0:.1}" y2="{2:.1}"/>"#, fr.x(s), fr.y(0), fr.y(w.max_filtration.max(0)));
    }
    for f in 0..=w.max_filtration.max(0) {
        let _ = writeln!(o, r#"<line x1="{0:.1}" y1="{1:.1}" x2="{2:.1}" y2="{1:.1}"/>"#, fr.x(0), fr.y(f), fr.x(w.max_stem.max(0)));
    }
    let _ = writeln!(o, "</g>");
    let _ = writeln!(o, r#"<g id="axes" stroke="black" stroke-width="1" font-family="sans-serif" font-size="9">"#);
    let (x0, y0) = (fr.x(0) - 8.0, fr.y(0) + 8.0);
    let _ = writeln!(o, r#"<line x1="{x0:.1}" y1="{y0:.1}" x2="{:.1}" y2="{y0:.1}"/>"#, fr.x(w.max_stem.max(0)) + 8.0);
    let _ = writeln!(o, r#"<line x1="{x0:.1}" y1="{y0:.1}" x2="{x0:.1}" y2="{:.1}"/>"#, fr.y(w.max_filtration.max(0)) - 8.0);
    for s in (0..=w.max_stem.max(0)).step_by(2) {
        let _ = writeln!(o, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle" stroke="none">{s}</text>"#, fr.x(s), y0 + 12.0);
    }
    for f in (0..=w.max_filtration.max(0)).step_by(2) {
        let _ = writeln!(o, r#"<text x="{:.1}" y="{:.1}" text-anchor="end" stroke="none">{f}</text>"#, x0 - 4.0, fr.y(f) + 3.0);
    }
    let _ = writeln!(o, "</g>");

    let _ = writeln!(o, r#"<g id="segments" stroke-width="1.2" font-family="sans-serif" font-size="8">"#);
    for seg in &scene.segments {
        let (ax, ay) = fr.dot(&scene.dots[seg.from]);
        let (bx, by) = fr.dot(&scene.dots[seg.to]);
        let class = match &seg.kind {
            SegmentKind::Product(a) => format!("product {}", escape(a)),
            SegmentKind::Differential(r) => format!("d{r}"),
            SegmentKind::HiddenTau => "hidden-tau".into(),
        };
        let _ = writeln!(
            o,
            r#"<line class="{class}" x1="{ax:.1}" y1="{ay:.1}" x2="{bx:.1}" y2="{by:.1}" stroke="{}"/>"#,
            svg_color(&seg.color)
        );
        if let Some(k) = &seg.annotation {
            let _ = writeln!(
                o,
                r#"<text x="{:.1}" y="{:.1}" fill="{}">{}</text>"#,
                (ax + bx) / 2.0 + 2.0,
                (ay + by) / 2.0,
                svg_color(&seg.color),
                escape(k)
            );
        }
    }
    let _ = writeln!(o, "</g>");

    let _ = writeln!(o, r#"<g id="arrows" stroke-width="1.2">"#);
    for arr in &scene.arrows {
        let (ax, ay) = fr.dot(&scene.dots[arr.from]);
        let (bx, by) = (ax + UNIT * 0.6, ay - UNIT * 0.6);
        let c = svg_color(&arr.color);
        let _ = writeln!(o, r#"<line x1="{ax:.1}" y1="{ay:.1}" x2="{bx:.1}" y2="{by:.1}" stroke="{c}"/>"#);
        let _ = writeln!(
            o,
            r#"<polygon points="{bx:.1},{by:.1} {:.1},{:.1} {:.1},{:.1}" fill="{c}"/>"#,
            bx - 5.0,
            by + 1.0,
            bx - 1.0,
            by + 5.0
        );
    }
    let _ = writeln!(o, "</g>");

    let _ = writeln!(o, r#"<g id="dots" stroke="black" stroke-width="0.4">"#);
    for d in &scene.dots {
        let (x, y) = fr.dot(d);
        let _ = writeln!(
            o,
            r#"<circle cx="{x:.1}" cy="{y:.1}" r="{RADIUS}" fill="{}"><title>{} ({},{},{}) {}</title></circle>"#,
            svg_color(&d.color),
            escape(&d.label),
            d.s,
            d.f,
            d.w,
            d.torsion
        );
    }
    let _ = writeln!(o, "</g>");

    let lx = chart_w + 10.0;
    let _ = writeln!(o, r#"<g id="legend" font-family="sans-serif" font-size="10">"#);
    let _ = writeln!(o, r#"<text x="{lx:.1}" y="{:.1}" font-weight="bold">{}</text>"#, MARGIN - 12.0, escape(&scene.title));
    for (i, (label, color)) in scene.legend.iter().enumerate() {
        let y = MARGIN + i as f64 * 16.0;
        let _ = writeln!(
            o,
            r#"<rect x="{lx:.1}" y="{:.1}" width="10" height="10" fill="{}" stroke="black" stroke-width="0.4"/>"#,
            y - 9.0,
            svg_color(color)
        );
        let _ = writeln!(o, r#"<text x="{:.1}" y="{y:.1}">{}</text>"#, lx + 16.0, escape(label));
    }
    let _ = writeln!(o, "</g>");
    o.push_str("</svg>\n");
    o
}
