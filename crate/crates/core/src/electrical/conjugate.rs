use std::collections::VecDeque;

use rand::Rng;

use crate::electrical::Voltage;
use crate::error::{Error, Result};
use crate::map::{wrap_signed, CombMap, DualMap};

/// Reduces `x` to `[0, m)`.
pub fn modulo(x: f64, m: f64) -> f64 {
    let r = x.rem_euclid(m);
    if r >= m {
        0.0
    } else {
        r
    }
}

/// Harmonic conjugate of the voltage, defined on faces modulo `eta`.
///
/// `w` holds real values integrated along a breadth-first tree of the dual;
/// `sheet` counts seam crossings along the same tree paths, so that the
/// value on the cylinder's universal cover is recoverable for any dual edge.
#[derive(Debug, Clone)]
pub struct Conjugate {
    pub w: Vec<f64>,
    pub sheet: Vec<i64>,
    pub base: usize,
    pub eta: f64,
    /// Largest closure error over non-tree dual edges.
    pub max_defect: f64,
}

/// Increment of the conjugate along dual edge `k`, from the left face of
/// primal edge `k` to its right face.
pub fn dual_increment(map: &CombMap, v: &Voltage, k: usize) -> f64 {
    map.conductance(k) * v.delta(map, k)
}

/// Face whose representative angle is closest to 0, or face 0 without points.
pub fn default_base(dual: &DualMap) -> usize {
    let Some(points) = &dual.points else { return 0 };
    (0..points.len())
        .min_by(|&a, &b| {
            let key = |f: usize| (wrap_signed(points[f].0).abs(), points[f].1.abs());
            let (ka, kb) = (key(a), key(b));
            ka.0.total_cmp(&kb.0)
                .then(ka.1.total_cmp(&kb.1))
                .then(a.cmp(&b))
        })
        .unwrap_or(0)
}

pub fn conjugate(
    map: &CombMap,
    v: &Voltage,
    dual: &DualMap,
    base: Option<usize>,
) -> Result<Conjugate> {
    let nf = dual.planar.num_vertices();
    let base = base.unwrap_or_else(|| default_base(dual));
    if base >= nf {
        return Err(Error::InvalidParameter(format!(
            "base face {base} out of range"
        )));
    }
    let inc: Vec<f64> = (0..map.num_edges())
        .map(|k| dual_increment(map, v, k))
        .collect();
    let mut w = vec![f64::NAN; nf];
    let mut sheet = vec![0i64; nf];
    let mut tree = vec![false; map.num_edges()];
    w[base] = 0.0;
    let mut queue = VecDeque::from([base]);
    while let Some(f) = queue.pop_front() {
        for &d in dual.planar.rotation(f) {
            let g = dual.planar.dest(d);
            if !w[g].is_nan() {
                continue;
            }
            let k = d / 2;
            let sign = if d & 1 == 0 { 1.0 } else { -1.0 };
            w[g] = w[f] + sign * inc[k];
            sheet[g] = sheet[f] + dual.crossing(d);
            tree[k] = true;
            queue.push_back(g);
        }
    }
    let eta = v.eta;
    let tol = 1e-10 * eta.max(1.0);
    let mut max_defect: f64 = 0.0;
    for k in 0..map.num_edges() {
        if tree[k] {
            continue;
        }
        let [l, r] = dual.planar.ends(k);
        let defect = w[l] + inc[k] - w[r];
        let winding = sheet[l] + dual.seam_crossing[k] as i64 - sheet[r];
        let err = (defect - eta * winding as f64).abs();
        max_defect = max_defect.max(err);
        if err > tol {
            return Err(Error::ClosureDefect {
                edge: map.edge_id(k),
                defect,
                winding,
            });
        }
    }
    Ok(Conjugate {
        w,
        sheet,
        base,
        eta,
        max_defect,
    })
}

impl Conjugate {
    /// Value at face `f` reduced to `[0, eta)`.
    pub fn value(&self, f: usize) -> f64 {
        modulo(self.w[f], self.eta)
    }

    /// Winding of the closed dual walk made of the tree path to the left face
    /// of `k`, the edge `k` itself, and the tree path back from its right face.
    pub fn cycle_winding(&self, dual: &DualMap, k: usize) -> i64 {
        let [l, r] = dual.planar.ends(k);
        self.sheet[l] + dual.seam_crossing[k] as i64 - self.sheet[r]
    }

    /// Change of the conjugate along dual edge `k`, read off the face values
    /// with the seam correction; equals `c_k (h(head) - h(tail))`.
    pub fn lifted_increment(&self, dual: &DualMap, k: usize) -> f64 {
        let [l, r] = dual.planar.ends(k);
        self.w[r] - self.w[l] + self.eta * self.cycle_winding(dual, k) as f64
    }

    /// Conjugate at fraction `t` along dual edge `k`, reduced modulo `eta`.
    pub fn interpolate(&self, dual: &DualMap, k: usize, t: f64) -> f64 {
        let l = dual.planar.tail(k);
        modulo(self.w[l] + t * self.lifted_increment(dual, k), self.eta)
    }
}

/// Conjugate at fraction `t` along dual edge `k`.
pub fn interpolate_w(conj: &Conjugate, dual: &DualMap, k: usize, t: f64) -> f64 {
    conj.interpolate(dual, k, t)
}

/// Closed dual walk: `steps` uniform steps from face `start`, then a
/// shortest path back. Dual half-edges.
pub fn random_dual_cycle<R: Rng + ?Sized>(
    dual: &DualMap,
    start: usize,
    steps: usize,
    rng: &mut R,
) -> Vec<usize> {
    let d = &dual.planar;
    let mut walk = Vec::with_capacity(steps);
    let mut f = start;
    for _ in 0..steps {
        let rot = d.rotation(f);
        let h = rot[rng.gen_range(0..rot.len())];
        walk.push(h);
        f = d.dest(h);
    }
    walk.extend(d.bfs_path(f, start));
    walk
}

/// Sum of the conjugate increments along a closed dual walk minus `eta`
/// times its winding. Zero up to rounding for every closed walk.
pub fn closure_defect(map: &CombMap, v: &Voltage, dual: &DualMap, walk: &[usize]) -> f64 {
    let sum: f64 = walk
        .iter()
        .map(|&d| {
            let inc = dual_increment(map, v, d / 2);
            if d & 1 == 0 {
                inc
            } else {
                -inc
            }
        })
        .sum();
    sum - v.eta * dual.winding(walk) as f64
}
