use std::fmt::Write;

use crate::tiling::SmithDiagram;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColorBy {
    /// Hue follows the edge index.
    Order,
    /// Hue follows the rank of the rectangle's area.
    Size,
}

/// SVG of the strip `[0, eta] × [0, 1]`, height 0 at the bottom. Wrapping
/// rectangles are drawn in two pieces and the seam appears on both sides.
pub fn render_svg(diagram: &SmithDiagram, color_by: ColorBy, width_px: u32) -> String {
    let eta = diagram.eta;
    let w = width_px.max(1) as f64;
    let s = w / eta;
    // The strip has height 1; very thin diagrams are stretched less.
    let ys = s.clamp(1.0, 4.0 * w);
    let h = ys;
    let rects: Vec<_> = diagram.rects.iter().filter(|r| !r.degenerate).collect();
    let n = rects.len().max(1);
    let mut rank: Vec<usize> = (0..rects.len()).collect();
    rank.sort_by(|&a, &b| {
        let area = |i: usize| rects[i].width() * rects[i].height();
        area(a).total_cmp(&area(b)).then(a.cmp(&b))
    });
    let mut hue_of = vec![0.0; rects.len()];
    for (pos, &i) in rank.iter().enumerate() {
        hue_of[i] = match color_by {
            ColorBy::Order => 360.0 * i as f64 / n as f64,
            ColorBy::Size => 240.0 * (1.0 - pos as f64 / n as f64),
        };
    }

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{w:.3}" height="{h:.3}" fill="white"/>"#
    );
    for (i, r) in rects.iter().enumerate() {
        let fill = hsl_hex(hue_of[i], 0.55, 0.6);
        let mut piece = |x0: f64, x1: f64| {
            let _ = writeln!(
                out,
                r#"<rect x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}" fill="{fill}" stroke="black" stroke-width="0.5"><title>edge {}</title></rect>"#,
                x0 * s,
                (1.0 - r.y1) * ys,
                (x1 - x0) * s,
                r.height() * ys,
                r.edge
            );
        };
        if r.x1 <= eta {
            piece(r.x0, r.x1);
        } else {
            piece(r.x0, eta);
            piece(0.0, r.x1 - eta);
        }
    }
    for x in [0.0, w] {
        let _ = writeln!(
            out,
            r#"<line x1="{x:.3}" y1="0" x2="{x:.3}" y2="{h:.3}" stroke="red" stroke-width="1" stroke-dasharray="4 3"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}

fn hsl_hex(hue: f64, sat: f64, light: f64) -> String {
    let c = (1.0 - (2.0 * light - 1.0).abs()) * sat;
    let hp = (hue.rem_euclid(360.0)) / 60.0;
    let x = c * (1.0 - (hp % 2.0 - 1.0).abs());
    let (r, g, b) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = light - c / 2.0;
    let to = |v: f64| ((v + m) * 255.0).round().clamp(0.0, 255.0) as u8;
    format!("#{:02x}{:02x}{:02x}", to(r), to(g), to(b))
}
