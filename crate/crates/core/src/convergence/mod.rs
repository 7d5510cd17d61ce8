//! Lattice families and the comparison between Smith and a priori embeddings.

mod fit;
mod frechet;
mod invariance;
mod lattice;

use std::f64::consts::TAU;
use std::fmt::Write;

use rayon::prelude::*;

pub use fit::{cylinder_distance, fit_affine, AffineFit};
pub use frechet::dcmp;
pub use invariance::{
    dual_invariance_diagnostic, exit_diagnostic, invariance_diagnostic, ExitRow, InvarianceReport,
};
pub use lattice::make_lattice;

use crate::error::Result;
use crate::map::CylinderEmbedding;
use crate::tiling::{smith_embedding, tile};

/// Lattices are built up to this height; fits use a smaller band.
pub const LATTICE_HEIGHT: f64 = 4.0;
pub const DEFAULT_BAND: f64 = 1.0;

/// One member of a lattice family with its fitted map.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyRow {
    pub n: usize,
    pub fit: AffineFit,
    /// Largest deviation of the voltage from an affine function of the row.
    pub row_linearity: f64,
}

/// Tiles the lattices with `n` columns for each `n` and fits the affine map
/// over `|height| <= band`. Rows come back sorted by `n`.
pub fn lattice_family(ns: &[usize], band: f64) -> Result<Vec<FamilyRow>> {
    let mut rows = ns
        .par_iter()
        .map(|&n| {
            let (map, emb) = make_lattice(n, LATTICE_HEIGHT)?;
            let t = tile(&map, Some(&emb))?;
            let se = smith_embedding(&map, &t.diagram);
            let fit = fit_affine(&se, t.diagram.eta, &emb, band)?;
            let row_linearity = row_linearity(&t.voltage.h, &emb);
            Ok(FamilyRow {
                n,
                fit,
                row_linearity,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by_key(|r| r.n);
    Ok(rows)
}

// Least-squares line of h against height over all embedded vertices; the
// largest residual.
fn row_linearity(h: &[f64], emb: &CylinderEmbedding) -> f64 {
    let pts: Vec<(f64, f64)> = emb
        .coords
        .iter()
        .zip(h)
        .filter_map(|(c, &h)| c.map(|c| (c.1, h)))
        .collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let a = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    pts.iter()
        .map(|p| (my + a * (p.0 - mx) - p.1).abs())
        .fold(0.0, f64::max)
}

/// CSV with header `n,eta,c_h,b_h,b_w,sup_err_height,sup_err_angle`.
pub fn family_csv(rows: &[FamilyRow]) -> String {
    let mut out = String::from("n,eta,c_h,b_h,b_w,sup_err_height,sup_err_angle\n");
    for r in rows {
        let f = &r.fit;
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:e},{:e}",
            r.n, f.eta, f.c_h, f.b_h, f.b_w, f.sup_err_height, f.sup_err_angle
        );
    }
    out
}

/// SVG of the cylinder `[0, 2π) × [-band - 0.5, band + 0.5]`: a priori
/// positions as hollow circles, `T S(x)` as dots, joined when they differ.
pub fn overlay_svg(
    fit: &AffineFit,
    smith: &[(f64, f64)],
    emb: &CylinderEmbedding,
    band: f64,
    width_px: u32,
) -> String {
    let w = width_px.max(1) as f64;
    let s = w / TAU;
    let top = band + 0.5;
    let h = 2.0 * top * s;
    let px = |p: (f64, f64)| (p.0 * s, (top - p.1) * s);
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{w:.3}" height="{h:.3}" fill="white"/>"#
    );
    for (y, dash) in [(band, "4 3"), (-band, "4 3")] {
        let yy = (top - y) * s;
        let _ = writeln!(
            out,
            r#"<line x1="0" y1="{yy:.3}" x2="{w:.3}" y2="{yy:.3}" stroke="gray" stroke-dasharray="{dash}"/>"#
        );
    }
    let r = (0.15 * s * TAU / smith.len().max(1) as f64).clamp(1.0, 4.0);
    for (v, c) in emb.coords.iter().enumerate() {
        let Some(x) = *c else { continue };
        if x.1.abs() > top {
            continue;
        }
        let t = fit.apply(smith[v]);
        let (ax, ay) = px(x);
        let (bx, by) = px(t);
        if cylinder_distance(t, x) > 1e-9 && (ax - bx).abs() < w / 2.0 {
            let _ = writeln!(
                out,
                r#"<line x1="{ax:.3}" y1="{ay:.3}" x2="{bx:.3}" y2="{by:.3}" stroke="crimson" stroke-width="0.7"/>"#
            );
        }
        let _ = writeln!(
            out,
            r#"<circle cx="{ax:.3}" cy="{ay:.3}" r="{:.3}" fill="none" stroke="black"/>"#,
            r * 1.6
        );
        let _ = writeln!(
            out,
            r#"<circle cx="{bx:.3}" cy="{by:.3}" r="{r:.3}" fill="crimson"/>"#
        );
    }
    out.push_str("</svg>\n");
    out
}
