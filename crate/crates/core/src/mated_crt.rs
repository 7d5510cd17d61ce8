//! Mated-CRT maps with the sphere topology, built from a sampled
//! two-dimensional Brownian excursion in the first quadrant.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::map::{CombMap, MapParts};

/// Tolerance on the endpoint and positivity constraints of an excursion.
pub const EXCURSION_TOL: f64 = 1e-12;

/// `(L, R)` sampled at times `k/n`, `k = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Excursion {
    pub n: usize,
    pub dl: Vec<f64>,
    pub dr: Vec<f64>,
    pub l: Vec<f64>,
    pub r: Vec<f64>,
    /// Infimum of `L` and of `R` over the cell `[v, v+1]` of vertex `v`.
    /// Sampled excursions draw it from the Brownian bridge between the two
    /// endpoint values; loaded increments use the smaller endpoint.
    pub cell_min_l: Vec<f64>,
    pub cell_min_r: Vec<f64>,
    /// Attempts used by the sampler (1 for loaded increments).
    pub attempts: u64,
}

/// Per-step correlation of `L` and `R`.
pub fn correlation(gamma: f64) -> f64 {
    -(std::f64::consts::PI * gamma * gamma / 4.0).cos()
}

/// Checks the invariants and fills in the running values.
pub fn excursion_from_increments(dl: Vec<f64>, dr: Vec<f64>) -> Result<Excursion> {
    let n = dl.len();
    if n < 2 || dr.len() != n {
        return Err(Error::InvalidParameter(format!(
            "need two increment sequences of equal length >= 2, got {} and {}",
            dl.len(),
            dr.len()
        )));
    }
    let walk = |d: &[f64]| {
        let mut s = vec![0.0; n + 1];
        for i in 0..n {
            s[i + 1] = s[i] + d[i];
        }
        s
    };
    let (l, r) = (walk(&dl), walk(&dr));
    for (name, s) in [("L", &l), ("R", &r)] {
        if s[n].abs() > EXCURSION_TOL {
            return Err(Error::InvalidParameter(format!(
                "{name} ends at {} instead of 0",
                s[n]
            )));
        }
        if let Some(k) = s.iter().position(|&x| x < -EXCURSION_TOL) {
            return Err(Error::InvalidParameter(format!(
                "{name} is negative at step {k}"
            )));
        }
    }
    let cell = |s: &[f64]| (0..n).map(|v| s[v].min(s[v + 1])).collect();
    Ok(Excursion {
        n,
        cell_min_l: cell(&l),
        cell_min_r: cell(&r),
        dl,
        dr,
        l,
        r,
        attempts: 1,
    })
}

impl Excursion {
    /// Replaces the cell infima by minima of Brownian bridges between the
    /// sampled values, conditioned to stay nonnegative. The two coordinates
    /// are bridged independently given the endpoints.
    pub fn with_bridge_minima(mut self, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.fill_minima(&mut rng);
        self
    }

    fn fill_minima(&mut self, rng: &mut ChaCha8Rng) {
        let var = 1.0 / self.n as f64;
        for v in 0..self.n {
            self.cell_min_l[v] = bridge_min(self.l[v], self.l[v + 1], var, rng);
            self.cell_min_r[v] = bridge_min(self.r[v], self.r[v + 1], var, rng);
        }
    }
}

// Minimum of a Brownian bridge from x to y with total variance `var`,
// conditioned on staying >= 0. P(min < m) = exp(-2 (x - m)(y - m) / var).
fn bridge_min(x: f64, y: f64, var: f64, rng: &mut ChaCha8Rng) -> f64 {
    let (x, y) = (x.max(0.0), y.max(0.0));
    let f0 = (-2.0 * x * y / var).exp();
    let u: f64 = rng.gen();
    let target = f0 + u * (1.0 - f0);
    let k = -0.5 * var * target.ln();
    let m = 0.5 * ((x + y) - ((x - y) * (x - y) + 4.0 * k).sqrt());
    m.clamp(0.0, x.min(y))
}

// One bridge attempt; `None` if it leaves the quadrant.
fn attempt(n: usize, rho: f64, rng: &mut ChaCha8Rng) -> Option<(Vec<f64>, Vec<f64>)> {
    let scale = 1.0 / (n as f64).sqrt();
    let perp = (1.0 - rho * rho).max(0.0).sqrt();
    let mut sl = vec![0.0; n + 1];
    let mut sr = vec![0.0; n + 1];
    for k in 0..n {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        sl[k + 1] = sl[k] + z1 * scale;
        sr[k + 1] = sr[k] + (rho * z1 + perp * z2) * scale;
    }
    let (el, er) = (sl[n], sr[n]);
    let mut l = vec![0.0; n + 1];
    let mut r = vec![0.0; n + 1];
    for k in 1..n {
        let t = k as f64 / n as f64;
        l[k] = sl[k] - t * el;
        r[k] = sr[k] - t * er;
        if l[k] < 0.0 || r[k] < 0.0 {
            return None;
        }
    }
    let diff = |s: &[f64]| (0..n).map(|k| s[k + 1] - s[k]).collect();
    Some((diff(&l), diff(&r)))
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Bridges the correlated walk to the origin and rejects until both
/// coordinates stay nonnegative at the sample times, then draws the cell
/// infima from the bridges in between. Attempt `a` uses stream `a` of the seeded
/// generator, so the result does not depend on the thread count.
pub fn sample_excursion(gamma: f64, n: usize, seed: u64, max_attempts: u64) -> Result<Excursion> {
    if !(gamma > 0.0 && gamma < 2.0) {
        return Err(Error::InvalidParameter(format!(
            "gamma = {gamma} is not in (0, 2)"
        )));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!("n = {n} is below 2")));
    }
    let rho = correlation(gamma);
    const BATCH: u64 = 512;
    let mut start = 0;
    while start < max_attempts {
        let end = (start + BATCH).min(max_attempts);
        let hit = (start..end)
            .into_par_iter()
            .filter_map(|a| {
                let mut rng = stream_rng(seed, a);
                attempt(n, rho, &mut rng).map(|inc| (a, inc, rng))
            })
            .min_by_key(|p| p.0);
        if let Some((a, (dl, dr), mut rng)) = hit {
            let mut exc = excursion_from_increments(dl, dr)?;
            exc.fill_minima(&mut rng);
            exc.attempts = a + 1;
            return Ok(exc);
        }
        start = end;
    }
    Err(Error::ExcursionRejected(max_attempts))
}

/// Fraction of `attempts` bridges that stay in the quadrant.
pub fn acceptance_rate(gamma: f64, n: usize, seed: u64, attempts: u64) -> f64 {
    let rho = correlation(gamma);
    let ok = (0..attempts)
        .into_par_iter()
        .filter(|&a| attempt(n, rho, &mut stream_rng(seed, a)).is_some())
        .count();
    ok as f64 / attempts.max(1) as f64
}

/// Both conditions of the adjacency rule for vertices `v1 != v2` (0-based,
/// vertex `v` owning the cell `[v/n, (v+1)/n]`), evaluated from the increments
/// and the cell infima.
pub fn adjacency_oracle(exc: &Excursion, v1: usize, v2: usize) -> (bool, bool) {
    let (a, b) = (v1.min(v2), v1.max(v2));
    let check = |d: &[f64], cell: &[f64]| {
        let value = |k: usize| d[..k].iter().sum::<f64>();
        // Infimum over [a+1, b] in sample units; a single point when b = a+1.
        let points = (a + 1..=b).map(value);
        let inner = (a + 1..b).map(|v| cell[v]);
        let gap = points.chain(inner).fold(f64::INFINITY, f64::min);
        cell[a].max(cell[b]) <= gap
    };
    (
        check(&exc.dl, &exc.cell_min_l),
        check(&exc.dr, &exc.cell_min_r),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArcKind {
    /// Between consecutive vertices.
    Line,
    /// Below the line, from the `L` condition.
    Lower,
    /// Above the line, from the `R` condition.
    Upper,
}

#[derive(Debug, Clone)]
pub struct MatedCrtMap {
    /// Vertex `v` has id `v + 1`; unit conductances.
    pub map: CombMap,
    pub kind: Vec<ArcKind>,
}

impl MatedCrtMap {
    /// Histogram of face degrees, index = degree.
    pub fn face_degrees(&self) -> Vec<usize> {
        let mut hist = Vec::new();
        for f in 0..self.map.num_faces() {
            let d = self.map.face(f).len();
            if hist.len() <= d {
                hist.resize(d + 1, 0);
            }
            hist[d] += 1;
        }
        hist
    }

    /// Arcs of one kind as `(left, right)` vertex pairs.
    pub fn arcs(&self, kind: ArcKind) -> Vec<(usize, usize)> {
        (0..self.map.num_edges())
            .filter(|&e| self.kind[e] == kind)
            .map(|e| (self.map.tail(e), self.map.head(e)))
            .collect()
    }
}

/// No two arcs `(a, b)`, `(c, d)` interleave as `a < c < b < d`.
pub fn noncrossing(arcs: &[(usize, usize)]) -> bool {
    let mut sorted: Vec<(usize, usize)> = arcs.to_vec();
    sorted.sort_by(|p, q| p.0.cmp(&q.0).then(q.1.cmp(&p.1)));
    let mut stack: Vec<usize> = Vec::new();
    for (a, b) in sorted {
        while stack.last().is_some_and(|&top| top <= a) {
            stack.pop();
        }
        if stack.last().is_some_and(|&top| b > top) {
            return false;
        }
        stack.push(b);
    }
    true
}

/// Builds the map with the arc-diagram planar structure, marked first/last.
pub fn build_map(exc: &Excursion) -> Result<MatedCrtMap> {
    let n = exc.n;
    let adjacent = |cell: &[f64], s: &[f64]| {
        let mut out = Vec::new();
        for a in 0..n {
            let mut gap = s[a + 1];
            for b in a + 2..n {
                gap = gap.min(cell[b - 1]).min(s[b]);
                if cell[a].max(cell[b]) <= gap {
                    out.push((a, b));
                }
            }
        }
        out
    };
    let lower = adjacent(&exc.cell_min_l, &exc.l);
    let upper = adjacent(&exc.cell_min_r, &exc.r);

    let mut ends = Vec::new();
    let mut kind = Vec::new();
    for v in 0..n - 1 {
        ends.push([v, v + 1]);
        kind.push(ArcKind::Line);
    }
    for &(a, b) in &lower {
        ends.push([a, b]);
        kind.push(ArcKind::Lower);
    }
    for &(a, b) in &upper {
        ends.push([a, b]);
        kind.push(ArcKind::Upper);
    }

    // Counterclockwise from the rightward line edge: upper arcs to the right
    // (inner first), upper arcs to the left (outer first), the leftward line
    // edge, lower arcs to the left (inner first), lower arcs to the right
    // (outer first).
    let mut rotation = Vec::with_capacity(n);
    for v in 0..n {
        let mut right_up = Vec::new();
        let mut left_up = Vec::new();
        let mut left_down = Vec::new();
        let mut right_down = Vec::new();
        let (mut right_line, mut left_line) = (None, None);
        for (e, &[a, b]) in ends.iter().enumerate() {
            let (half, far) = if a == v {
                (2 * e, b)
            } else if b == v {
                (2 * e + 1, a)
            } else {
                continue;
            };
            match (kind[e], far > v) {
                (ArcKind::Line, true) => right_line = Some(half),
                (ArcKind::Line, false) => left_line = Some(half),
                (ArcKind::Upper, true) => right_up.push((far, half)),
                (ArcKind::Upper, false) => left_up.push((far, half)),
                (ArcKind::Lower, true) => right_down.push((far, half)),
                (ArcKind::Lower, false) => left_down.push((far, half)),
            }
        }
        right_up.sort();
        left_up.sort();
        left_down.sort_by(|p, q| q.cmp(p));
        right_down.sort_by(|p, q| q.cmp(p));
        let mut rot = Vec::new();
        rot.extend(right_line);
        rot.extend(right_up.iter().map(|p| p.1));
        rot.extend(left_up.iter().map(|p| p.1));
        rot.extend(left_line);
        rot.extend(left_down.iter().map(|p| p.1));
        rot.extend(right_down.iter().map(|p| p.1));
        rotation.push(rot);
    }

    let m = ends.len();
    let parts = MapParts {
        vertex_ids: (1..=n as u64).collect(),
        edge_ids: (0..m as u64).collect(),
        ends,
        conductance: vec![1.0; m],
        rotation,
    };
    let map = CombMap::build(parts, 0, n - 1)?;
    Ok(MatedCrtMap { map, kind })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkPolicy {
    /// Two distinct vertices chosen uniformly.
    UniformPair,
    /// The first and the last vertex.
    FirstLast,
}

pub fn mark_vertices(m: &MatedCrtMap, policy: MarkPolicy, seed: u64) -> Result<MatedCrtMap> {
    let n = m.map.num_vertices();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "need at least two vertices to mark".into(),
        ));
    }
    let (v0, v1) = match policy {
        MarkPolicy::FirstLast => (0, n - 1),
        MarkPolicy::UniformPair => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = rng.gen_range(0..n);
            let b = (a + 1 + rng.gen_range(0..n - 1)) % n;
            (a, b)
        }
    };
    Ok(MatedCrtMap {
        map: m.map.with_marks(v0, v1)?,
        kind: m.kind.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interleaving_arcs_cross() {
        assert!(noncrossing(&[(0, 5), (1, 2), (2, 4), (0, 1)]));
        assert!(!noncrossing(&[(0, 3), (1, 4)]));
    }
}
