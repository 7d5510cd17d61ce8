//! Exit laws by linear solves.

use crate::electrical::solver::{solve_spd, Csr};
use crate::electrical::SOLVER_TOL;
use crate::error::{Error, Result};
use crate::map::PlanarMap;

/// Green's function of the walk killed on `absorbing`, scaled so that the
/// expected number of visits to `u` is `g[u] * pi(u)`.
fn green(map: &PlanarMap, absorbing: &[bool], start: usize) -> Result<Vec<f64>> {
    let n = map.num_vertices();
    let mut index = vec![usize::MAX; n];
    let mut m = 0;
    for x in 0..n {
        if !absorbing[x] {
            index[x] = m;
            m += 1;
        }
    }
    let mut t = Vec::new();
    for e in 0..map.num_edges() {
        let [a, b] = map.ends(e);
        if a == b {
            continue;
        }
        let c = map.conductance(e);
        for (x, y) in [(a, b), (b, a)] {
            if index[x] != usize::MAX {
                t.push((index[x], index[x], c));
                if index[y] != usize::MAX {
                    t.push((index[x], index[y], -c));
                }
            }
        }
    }
    let mut rhs = vec![0.0; m];
    rhs[index[start]] = 1.0;
    let sol = solve_spd(&Csr::from_triplets(m, t), &rhs, SOLVER_TOL)?;
    let mut g = vec![0.0; n];
    for x in 0..n {
        if index[x] != usize::MAX {
            g[x] = sol.x[index[x]];
        }
    }
    Ok(g)
}

/// Probability that the walk from `start` first enters the absorbing set
/// through half-edge `h`, for every half-edge. Empty when `start` is itself
/// absorbing.
pub fn exit_halves(map: &PlanarMap, absorbing: &[bool], start: usize) -> Result<Vec<f64>> {
    if !absorbing.iter().any(|&b| b) {
        return Err(Error::InvalidParameter("absorbing set is empty".into()));
    }
    let mut p = vec![0.0; map.num_halves()];
    if absorbing[start] {
        return Ok(p);
    }
    let g = green(map, absorbing, start)?;
    for (h, slot) in p.iter_mut().enumerate() {
        let (u, w) = (map.origin(h), map.dest(h));
        if !absorbing[u] && absorbing[w] {
            *slot = g[u] * map.conductance(h / 2);
        }
    }
    Ok(p)
}

/// Law of the first absorbing vertex hit from `start` (a point mass when
/// `start` is absorbing).
pub fn absorption(map: &PlanarMap, absorbing: &[bool], start: usize) -> Result<Vec<f64>> {
    let mut law = vec![0.0; map.num_vertices()];
    if absorbing[start] {
        law[start] = 1.0;
        return Ok(law);
    }
    for (h, p) in exit_halves(map, absorbing, start)?.into_iter().enumerate() {
        law[map.dest(h)] += p;
    }
    Ok(law)
}

/// Law of the next original vertex seen by the walk on a refined map started
/// at original vertex `x`, where an excursion into a subdivided edge that
/// comes back through the piece it entered is not a move. Original vertices
/// are those with index below `original`; the result is aggregated by
/// destination like [`step_law`](crate::walk::step_law).
pub fn projected_step_law(
    refined: &PlanarMap,
    original: usize,
    x: usize,
) -> Result<Vec<(usize, f64)>> {
    let absorbing: Vec<bool> = (0..refined.num_vertices()).map(|u| u < original).collect();
    let pi = refined.pi(x);
    let mut law = vec![0.0; original];
    let mut back = 0.0;
    for &h in refined.rotation(x) {
        if refined.is_loop(h / 2) && h & 1 == 1 {
            continue;
        }
        let p = refined.conductance(h / 2) / pi;
        let y = refined.dest(h);
        if y < original {
            law[y] += p;
            continue;
        }
        for (g, q) in exit_halves(refined, &absorbing, y)?.into_iter().enumerate() {
            if q == 0.0 {
                continue;
            }
            if g == h ^ 1 {
                back += p * q;
            } else {
                law[refined.dest(g)] += p * q;
            }
        }
    }
    let scale = 1.0 - back;
    Ok(law
        .into_iter()
        .enumerate()
        .filter(|p| p.1 > 0.0)
        .map(|(y, p)| (y, p / scale))
        .collect())
}
