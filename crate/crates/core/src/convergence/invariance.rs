use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::map::{dual, CombMap, CylinderEmbedding, PlanarMap};
use crate::walk::{simulate, Stepper};

/// Exit statistics of the walks from one start.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitRow {
    pub start: usize,
    pub height: f64,
    pub walks: usize,
    /// Fraction of walks leaving through the top of the band.
    pub top: f64,
    /// Gambler's-ruin prediction from the mean exit heights on either side.
    pub predicted: f64,
    pub sigma: f64,
    pub mean_steps: f64,
}

impl ExitRow {
    pub fn z(&self) -> f64 {
        if self.sigma > 0.0 {
            (self.top - self.predicted) / self.sigma
        } else if (self.top - self.predicted).abs() <= 1e-12 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InvarianceReport {
    pub lo: f64,
    pub hi: f64,
    pub rows: Vec<ExitRow>,
    /// Pooled standardized deviation of the top-exit counts over all rows.
    pub z: f64,
    /// `|z| <= 3`.
    pub pass: bool,
}

/// Runs `walks` walks from each start until the height leaves the open band
/// `(lo, hi)` and compares the top-exit frequency with the Brownian law
/// `(y - E bottom) / (E top - E bottom)`, where the expectations are the
/// observed exit heights. Vertices without a height (poles) stop the walk
/// and count as exits beyond the band on their side.
///
/// Walk `i` from start number `s` uses stream `s * walks + i`.
pub fn exit_diagnostic(
    map: &PlanarMap,
    heights: &[Option<f64>],
    band: (f64, f64),
    starts: &[usize],
    walks: usize,
    seed: u64,
    budget: u64,
) -> Result<InvarianceReport> {
    let (lo, hi) = band;
    if !(lo <= hi) || walks == 0 {
        return Err(Error::InvalidParameter(format!(
            "need lo <= hi and walks > 0, got ({lo}, {hi}), {walks}"
        )));
    }
    let stop: Vec<bool> = heights
        .iter()
        .map(|h| h.is_none_or(|y| y <= lo || y >= hi))
        .collect();
    let stepper = Stepper::new(map);
    let mut rows = Vec::with_capacity(starts.len());
    for (si, &x) in starts.iter().enumerate() {
        let y = heights[x]
            .ok_or_else(|| Error::InvalidParameter(format!("start {x} has no height")))?;
        let exits: Vec<(usize, usize)> = (0..walks)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream((si * walks + i) as u64);
                let t = simulate(map, &stepper, None, x, &stop, &mut rng, budget)?;
                Ok((t.last(), t.len()))
            })
            .collect::<Result<_>>()?;
        let side = |v: usize| match heights[v] {
            Some(h) => h >= hi,
            None => exit_side_of_pole(map, heights, v, y),
        };
        let (mut top, mut sum_top, mut sum_bot) = (0usize, 0.0, 0.0);
        for &(v, _) in &exits {
            let h = heights[v].unwrap_or(if side(v) { hi } else { lo });
            if side(v) {
                top += 1;
                sum_top += h;
            } else {
                sum_bot += h;
            }
        }
        let bot = walks - top;
        let e_top = if top > 0 { sum_top / top as f64 } else { hi };
        let e_bot = if bot > 0 { sum_bot / bot as f64 } else { lo };
        let predicted = if e_top > e_bot {
            ((y - e_bot) / (e_top - e_bot)).clamp(0.0, 1.0)
        } else {
            1.0
        };
        let sigma = (predicted * (1.0 - predicted) / walks as f64).sqrt();
        rows.push(ExitRow {
            start: x,
            height: y,
            walks,
            top: top as f64 / walks as f64,
            predicted,
            sigma,
            mean_steps: exits.iter().map(|e| e.1 as f64).sum::<f64>() / walks as f64,
        });
    }
    let dev: f64 = rows
        .iter()
        .map(|r| (r.top - r.predicted) * r.walks as f64)
        .sum();
    let var: f64 = rows
        .iter()
        .map(|r| r.predicted * (1.0 - r.predicted) * r.walks as f64)
        .sum();
    let z = if var > 0.0 {
        dev / var.sqrt()
    } else if dev.abs() <= 1e-9 {
        0.0
    } else {
        f64::INFINITY
    };
    Ok(InvarianceReport {
        lo,
        hi,
        rows,
        z,
        pass: z.abs() <= 3.0,
    })
}

// A vertex without a height lies above the band if its known neighbours
// are on average above the start.
fn exit_side_of_pole(map: &PlanarMap, heights: &[Option<f64>], v: usize, y: f64) -> bool {
    let (mut s, mut k) = (0.0, 0usize);
    for &h in map.rotation(v) {
        if let Some(z) = heights[map.dest(h)] {
            s += z;
            k += 1;
        }
    }
    k > 0 && s / k as f64 > y
}

/// Exit diagnostic for the primal walk from the vertices nearest height 0.
pub fn invariance_diagnostic(
    map: &CombMap,
    emb: &CylinderEmbedding,
    band: f64,
    walks: usize,
    seed: u64,
    budget: u64,
) -> Result<InvarianceReport> {
    let heights: Vec<Option<f64>> = (0..map.num_vertices()).map(|v| emb.height(v)).collect();
    let starts = nearest_to_zero(&heights);
    exit_diagnostic(
        map.planar(),
        &heights,
        (-band, band),
        &starts,
        walks,
        seed,
        budget,
    )
}

/// Same diagnostic for the walk on the dual map, faces placed at their
/// representative points.
pub fn dual_invariance_diagnostic(
    map: &CombMap,
    emb: &CylinderEmbedding,
    band: f64,
    walks: usize,
    seed: u64,
    budget: u64,
) -> Result<InvarianceReport> {
    let d = dual(map, Some(emb))?;
    let pts = d
        .points
        .as_ref()
        .expect("dual of an embedded map has points");
    let heights: Vec<Option<f64>> = pts.iter().map(|p| Some(p.1)).collect();
    let starts = nearest_to_zero(&heights);
    exit_diagnostic(
        &d.planar,
        &heights,
        (-band, band),
        &starts,
        walks,
        seed,
        budget,
    )
}

// All vertices whose |height| is within 1e-9 of the smallest one.
fn nearest_to_zero(heights: &[Option<f64>]) -> Vec<usize> {
    let best = heights
        .iter()
        .flatten()
        .map(|h| h.abs())
        .fold(f64::INFINITY, f64::min);
    (0..heights.len())
        .filter(|&v| heights[v].is_some_and(|h| h.abs() <= best + 1e-9))
        .collect()
}
