use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::map::{wrap_angle, wrap_signed, CylinderEmbedding};

/// The affine map `T` from `R/etaZ × [0, 1]` to the cylinder of
/// circumference `2π`, fitted over a height band, and how far `T ∘ S` is
/// from the a priori positions there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineFit {
    pub eta: f64,
    pub c_h: f64,
    pub b_h: f64,
    pub b_w: f64,
    /// Vertices in the band.
    pub count: usize,
    pub sup_err_height: f64,
    pub sup_err_angle: f64,
    /// Largest cylinder distance between `T S(x)` and `x`.
    pub sup_err: f64,
}

impl AffineFit {
    /// `T` applied to a Smith position `(re, im)`.
    pub fn apply(&self, p: (f64, f64)) -> (f64, f64) {
        (
            wrap_angle(TAU / self.eta * p.0 + self.b_w),
            self.c_h * p.1 + self.b_h,
        )
    }
}

/// Distance on the cylinder of circumference `2π`.
pub fn cylinder_distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    wrap_signed(a.0 - b.0).hypot(a.1 - b.1)
}

/// Fits `T` by least squares on heights and a circular mean on angles over
/// the unmarked vertices with `|height| <= band`. `smith[v]` is the Smith
/// position of vertex `v` on a strip of circumference `eta`.
pub fn fit_affine(
    smith: &[(f64, f64)],
    eta: f64,
    emb: &CylinderEmbedding,
    band: f64,
) -> Result<AffineFit> {
    let pts: Vec<((f64, f64), (f64, f64))> = emb
        .coords
        .iter()
        .zip(smith)
        .filter_map(|(c, &s)| c.filter(|c| c.1.abs() <= band).map(|c| (s, c)))
        .collect();
    let count = pts.len();
    let k = TAU / eta;

    let m = count as f64;
    let sx = pts.iter().map(|p| p.0 .1).sum::<f64>() / m;
    let sy = pts.iter().map(|p| p.1 .1).sum::<f64>() / m;
    let sxx = pts.iter().map(|p| (p.0 .1 - sx).powi(2)).sum::<f64>();
    let sxy = pts
        .iter()
        .map(|p| (p.0 .1 - sx) * (p.1 .1 - sy))
        .sum::<f64>();
    let spread = pts.iter().map(|p| (p.0 .1 - sx).abs()).fold(0.0, f64::max);
    if count < 2 || spread <= 1e-12 {
        return Err(Error::InvalidParameter(format!(
            "fit is degenerate: {count} vertices in the band with fewer than 2 distinct Smith heights"
        )));
    }
    let c_h = sxy / sxx;
    let b_h = sy - c_h * sx;

    let (sin, cos) = pts.iter().fold((0.0, 0.0), |(s, c), p| {
        let d = p.1 .0 - k * p.0 .0;
        (s + d.sin(), c + d.cos())
    });
    let b_w = wrap_angle(sin.atan2(cos));

    let fit = AffineFit {
        eta,
        c_h,
        b_h,
        b_w,
        count,
        sup_err_height: 0.0,
        sup_err_angle: 0.0,
        sup_err: 0.0,
    };
    let (mut eh, mut ea, mut e) = (0.0f64, 0.0f64, 0.0f64);
    for &(s, x) in &pts {
        let t = fit.apply(s);
        eh = eh.max((t.1 - x.1).abs());
        ea = ea.max(wrap_signed(t.0 - x.0).abs());
        e = e.max(cylinder_distance(t, x));
    }
    Ok(AffineFit {
        sup_err_height: eh,
        sup_err_angle: ea,
        sup_err: e,
        ..fit
    })
}
