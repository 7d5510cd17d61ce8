use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::map::PlanarMap;
use crate::walk::step::Stepper;

/// Weighted spanning tree with the `wired` vertices identified, by
/// loop-erased walks. Each tree is drawn with probability proportional to
/// the product of its conductances. Returns sorted edge indices.
pub fn wilson_tree(map: &PlanarMap, wired: &[usize], seed: u64, budget: u64) -> Result<Vec<usize>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    wilson_with(map, &Stepper::new(map), wired, &mut rng, budget)
}

pub(crate) fn wilson_with(
    map: &PlanarMap,
    stepper: &Stepper,
    wired: &[usize],
    rng: &mut ChaCha8Rng,
    budget: u64,
) -> Result<Vec<usize>> {
    if wired.is_empty() {
        return Err(Error::InvalidParameter("wired set is empty".into()));
    }
    let n = map.num_vertices();
    let mut in_tree = vec![false; n];
    for &w in wired {
        in_tree[w] = true;
    }
    // Half-edge by which the current loop-erased path leaves each vertex.
    let mut next = vec![usize::MAX; n];
    let mut steps = 0u64;
    let mut edges = Vec::with_capacity(n);
    for root in 0..n {
        let mut u = root;
        while !in_tree[u] {
            if steps == budget {
                return Err(Error::StepBudget(budget));
            }
            steps += 1;
            let h = stepper.step(u, rng);
            next[u] = h;
            u = map.dest(h);
        }
        let mut u = root;
        while !in_tree[u] {
            in_tree[u] = true;
            edges.push(next[u] / 2);
            u = map.dest(next[u]);
        }
    }
    edges.sort_unstable();
    Ok(edges)
}
