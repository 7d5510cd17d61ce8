//! Conditioned on the sequence of levels it visits, the walk hits each level
//! according to the level measure (mass proportional to segment length).

use smith_embedding::electrical::solve_voltage;
use smith_embedding::fixtures::{random_map, RandomMapOptions};
use smith_embedding::walk::{admissible_sequences, conditional_hitting, level_augment_all};

fn main() -> smith_embedding::Result<()> {
    let opts = RandomMapOptions {
        allow_loops: false,
        generic: true,
        ..Default::default()
    };
    let (map, emb) = random_map(3, &opts);
    let v = solve_voltage(&map)?;
    let aug = level_augment_all(&map, Some(&emb), &v)?;
    println!(
        "{} vertices, {} after inserting every level on every edge it crosses",
        map.num_vertices(),
        aug.map.num_vertices()
    );
    let seqs = admissible_sequences(&aug.map, &aug.voltage, 3);
    let mut worst: f64 = 0.0;
    for s in &seqs {
        worst = worst.max(conditional_hitting(&aug.map, &aug.voltage, s)?.max_deviation());
    }
    println!(
        "{} admissible sequences of 3 steps; largest deviation from the level measure {worst:.1e}",
        seqs.len()
    );

    let law = conditional_hitting(&aug.map, &aug.voltage, &seqs[seqs.len() / 2])?;
    println!(
        "one sequence, levels {:?}:",
        law.heights
            .iter()
            .map(|h| format!("{h:.4}"))
            .collect::<Vec<_>>()
    );
    for (i, (cond, mu)) in law.conditional.iter().zip(&law.measures).enumerate() {
        let row: Vec<String> = cond
            .iter()
            .map(|&(x, p)| format!("{x}: {p:.4} / {:.4}", mu.mass(x)))
            .collect();
        println!("  step {i}: {}", row.join(", "));
    }
    Ok(())
}
