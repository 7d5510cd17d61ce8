use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::map::PlanarMap;
use crate::walk::absorb::absorption;
use crate::walk::step::{simulate, Stepper, WalkTrace};

/// Exact exit-law distance against the Monte Carlo probability that the
/// walk from `x` fails to separate `y` from `w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingReport {
    /// Total variation distance between the exit laws from `x` and `y`.
    pub tv: f64,
    /// Estimated probability that the trace from `x` disconnects `y` from `W`.
    pub disconnect: f64,
    /// Standard error of the estimate.
    pub sigma: f64,
    pub samples: usize,
    /// `tv <= 1 - disconnect + 3 sigma`.
    pub holds: bool,
}

impl CouplingReport {
    pub fn bound(&self) -> f64 {
        1.0 - self.disconnect
    }
}

/// Total variation distance between the laws of the first vertex of `w`
/// hit from `x` and from `y`.
pub fn exit_tv(map: &PlanarMap, w: &[usize], x: usize, y: usize) -> Result<f64> {
    let mut absorbing = vec![false; map.num_vertices()];
    for &u in w {
        absorbing[u] = true;
    }
    if x == y {
        return Ok(0.0);
    }
    let p = absorption(map, &absorbing, x)?;
    let q = absorption(map, &absorbing, y)?;
    Ok(0.5 * p.iter().zip(&q).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Sample `i` uses stream `i` of the generator seeded with `seed`, so the
/// result does not depend on the thread count.
pub fn tv_coupling_check(
    map: &PlanarMap,
    w: &[usize],
    x: usize,
    y: usize,
    samples: usize,
    seed: u64,
    budget: u64,
) -> Result<CouplingReport> {
    if w.is_empty() {
        return Err(Error::InvalidParameter("W is empty".into()));
    }
    let mut is_w = vec![false; map.num_vertices()];
    for &u in w {
        is_w[u] = true;
    }
    if is_w[x] || is_w[y] {
        return Err(Error::InvalidParameter("x and y must lie outside W".into()));
    }
    let tv = exit_tv(map, w, x, y)?;
    let stepper = Stepper::new(map);
    let hits: Vec<bool> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let trace = simulate(map, &stepper, None, x, &is_w, &mut rng, budget)?;
            Ok(disconnects(map, &trace, &is_w, y))
        })
        .collect::<Result<_>>()?;
    let k = hits.iter().filter(|&&b| b).count();
    let p = k as f64 / samples.max(1) as f64;
    let sigma = (p * (1.0 - p) / samples.max(1) as f64).sqrt();
    Ok(CouplingReport {
        tv,
        disconnect: p,
        sigma,
        samples,
        holds: tv <= 1.0 - p + 3.0 * sigma,
    })
}

/// Whether every curve from `y` to `W` meets the drawn trace. A curve may
/// cross any edge the walk did not use and pass any vertex it did not visit.
pub fn disconnects(map: &PlanarMap, trace: &WalkTrace, is_w: &[bool], y: usize) -> bool {
    let nv = map.num_vertices();
    let mut on_trace = vec![false; nv];
    for &u in &trace.vertices {
        on_trace[u] = true;
    }
    if on_trace[y] {
        return true;
    }
    let mut used = vec![false; map.num_edges()];
    for &h in &trace.halves {
        used[h / 2] = true;
    }
    let mut uf = UnionFind::new(nv + map.num_faces());
    for e in 0..map.num_edges() {
        if !used[e] {
            uf.union(nv + map.left_face(e), nv + map.right_face(e));
        }
    }
    for u in 0..nv {
        if !on_trace[u] || is_w[u] {
            for &h in map.rotation(u) {
                uf.union(u, nv + map.face_of(h));
            }
        }
    }
    let root = uf.find(y);
    !(0..nv).any(|u| is_w[u] && uf.find(u) == root)
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}
