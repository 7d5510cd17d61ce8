//! The Smith-embedded walk has zero expected horizontal winding given its
//! levels; the a priori embedding of the same walk need not.
//!
//! Walks of three steps start from the level measure of one level; the
//! sample means per level sequence are set against the exact value.

use std::collections::HashMap;
use std::f64::consts::TAU;

use rand::distributions::WeightedIndex;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use smith_embedding::electrical::solve_voltage;
use smith_embedding::fixtures::{random_map, RandomMapOptions};
use smith_embedding::tiling::tile;
use smith_embedding::walk::{
    admissible_sequences, embed_trace, expected_conditional_winding, level_augment_all,
    level_measure, Stepper, WalkTrace,
};

struct Tally {
    heights: Vec<f64>,
    n: f64,
    smith: [f64; 2],
    apriori: [f64; 2],
}

fn mean_se(s: [f64; 2], n: f64) -> (f64, f64) {
    let m = s[0] / n;
    (m, ((s[1] / n - m * m).max(0.0) / n).sqrt())
}

fn main() -> smith_embedding::Result<()> {
    let opts = RandomMapOptions {
        allow_loops: false,
        generic: true,
        ..Default::default()
    };
    let (map, emb) = random_map(1, &opts);
    let v = solve_voltage(&map)?;
    let aug = level_augment_all(&map, Some(&emb), &v)?;
    let aemb = aug.embedding.as_ref().expect("embedded");
    let t = tile(&aug.map, Some(aemb))?;

    let mut worst: f64 = 0.0;
    let mut count = 0;
    for steps in 1..=4 {
        for s in admissible_sequences(&aug.map, &aug.voltage, steps) {
            worst = worst
                .max(expected_conditional_winding(&aug.map, &aug.voltage, &t.diagram, &s)?.abs());
            count += 1;
        }
    }
    println!("{count} admissible sequences: largest exact |E[winding | levels]| = {worst:.1e}");

    let seqs = admissible_sequences(&aug.map, &aug.voltage, 3);
    let a = seqs[0][0];
    let mu = level_measure(&aug.map, &aug.voltage, a)?;
    let pick = WeightedIndex::new(mu.masses.iter().map(|p| p.1)).expect("positive masses");
    let p = aug.map.planar();
    let stepper = Stepper::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut tallies: HashMap<Vec<u64>, Tally> = HashMap::new();
    'walk: for _ in 0..200_000 {
        let mut x = mu.masses[pick.sample(&mut rng)].0;
        let mut tr = WalkTrace {
            vertices: vec![x],
            halves: Vec::new(),
            lift: None,
        };
        let mut turn = 0.0;
        for _ in 0..3 {
            let h = stepper.step(x, &mut rng);
            x = p.dest(h);
            if aug.map.is_marked(x) {
                continue 'walk;
            }
            turn += aemb.dtheta_half(h);
            tr.vertices.push(x);
            tr.halves.push(h);
        }
        let pts = embed_trace(&aug.map, &t.diagram, &tr, &mut rng);
        let smith = (pts[3].0 - pts[0].0) / t.diagram.eta;
        let apriori = turn / TAU;
        let heights: Vec<f64> = tr.vertices.iter().map(|&y| aug.voltage.h[y]).collect();
        let e = tallies
            .entry(heights.iter().map(|h| h.to_bits()).collect())
            .or_insert(Tally {
                heights,
                n: 0.0,
                smith: [0.0; 2],
                apriori: [0.0; 2],
            });
        e.n += 1.0;
        e.smith[0] += smith;
        e.smith[1] += smith * smith;
        e.apriori[0] += apriori;
        e.apriori[1] += apriori * apriori;
    }
    let mut rows: Vec<&Tally> = tallies.values().collect();
    rows.sort_by(|x, y| y.n.total_cmp(&x.n));
    println!("walks from the level measure at {a:.4}, most frequent level sequences:");
    for r in rows.iter().take(4) {
        let exact = expected_conditional_winding(&aug.map, &aug.voltage, &t.diagram, &r.heights)?;
        let (sm, ss) = mean_se(r.smith, r.n);
        let (am, asd) = mean_se(r.apriori, r.n);
        println!(
            "  {:?}: {} walks, Smith {sm:+.4} +- {ss:.4} (exact {exact:+.1e}), a priori {am:+.4} +- {asd:.4}",
            r.heights.iter().map(|h| format!("{h:.3}")).collect::<Vec<_>>(),
            r.n
        );
    }
    Ok(())
}
