//! Wilson's algorithm against exact tree weights, and the exit-law coupling
//! bound on a lattice.

use smith_embedding::convergence::make_lattice;
use smith_embedding::fixtures::triangle_map;
use smith_embedding::walk::{tv_coupling_check, wilson_tree, DEFAULT_BUDGET};

fn main() -> smith_embedding::Result<()> {
    // Triangle wired at vertex 2: its three spanning forests rooted there
    // are the three pairs of edges, weighted by their conductance products.
    let g = triangle_map([2.0, 1.0, 0.5]);
    let samples = 30_000;
    let mut counts = std::collections::BTreeMap::new();
    for s in 0..samples {
        *counts
            .entry(wilson_tree(g.planar(), &[2], s, DEFAULT_BUDGET)?)
            .or_insert(0u64) += 1;
    }
    let c = [2.0, 1.0, 0.5];
    let total = c[0] * c[1] + c[1] * c[2] + c[0] * c[2];
    for (tree, k) in &counts {
        let w: f64 = tree.iter().map(|&e| c[e]).product();
        println!(
            "tree {tree:?}: frequency {:.4}, exact {:.4}",
            *k as f64 / samples as f64,
            w / total
        );
    }

    let (m, _) = make_lattice(16, 1.5)?;
    let w: Vec<usize> = (0..16).chain([m.v1()]).collect();
    for (x, y) in [(16, 17), (32, 80)] {
        let r = tv_coupling_check(m.planar(), &w, x, y, 10_000, 1, DEFAULT_BUDGET)?;
        println!(
            "exit laws from {x} and {y}: tv {:.4} <= P(no disconnection) {:.4} (+- {:.4})",
            r.tv,
            r.bound(),
            3.0 * r.sigma
        );
    }
    Ok(())
}
