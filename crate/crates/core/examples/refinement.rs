//! Subdividing edges leaves the voltage alone, and the walk on the refined
//! map, watched on the original vertices, is the original walk.

use smith_embedding::electrical::solve_voltage;
use smith_embedding::fixtures::{random_map, RandomMapOptions};
use smith_embedding::map::insert_vertices;
use smith_embedding::walk::{projected_step_law, step_law};

fn main() -> smith_embedding::Result<()> {
    let (map, emb) = random_map(8, &RandomMapOptions::default());
    let v = solve_voltage(&map)?;
    let points: Vec<(usize, f64)> = (0..map.num_edges())
        .filter(|&e| !map.is_loop(e))
        .take(10)
        .map(|e| (e, 0.25 + 0.05 * (e % 10) as f64))
        .collect();
    let r = insert_vertices(&map, Some(&emb), &points)?;
    let w = solve_voltage(&r.map)?;
    let dh = (0..map.num_vertices())
        .map(|x| (v.h[x] - w.h[x]).abs())
        .fold(0.0, f64::max);
    println!(
        "inserted {} vertices; eta {} -> {}; largest voltage change {dh:.1e}",
        points.len(),
        v.eta,
        w.eta
    );

    let mut worst: f64 = 0.0;
    for x in 0..map.num_vertices() {
        let got = projected_step_law(r.map.planar(), map.num_vertices(), x)?;
        for (a, b) in step_law(map.planar(), x).iter().zip(&got) {
            worst = worst.max((a.1 - b.1).abs());
        }
    }
    println!("projected step law vs original step law: {worst:.1e}");
    Ok(())
}
