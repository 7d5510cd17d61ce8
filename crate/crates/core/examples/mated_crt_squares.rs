//! A mated-CRT map has unit conductances, so every rectangle of its Smith
//! diagram is a square.
//!
//! `cargo run --example mated_crt_squares -- [n] [seed] [out.svg]`

use smith_embedding::mated_crt::{build_map, mark_vertices, sample_excursion, MarkPolicy};
use smith_embedding::tiling::{render_svg, tile, validate, ColorBy};

fn main() -> smith_embedding::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse().expect("n")).unwrap_or(64);
    let seed: u64 = args.next().map(|s| s.parse().expect("seed")).unwrap_or(7);
    let out = args
        .next()
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("mated_crt.svg"));

    let exc = sample_excursion(std::f64::consts::SQRT_2, n, seed, 10_000_000)?;
    println!("excursion accepted after {} attempts", exc.attempts);
    let m = mark_vertices(&build_map(&exc)?, MarkPolicy::UniformPair, seed)?;
    println!(
        "{} vertices, {} edges, {} faces; face degrees {:?}",
        m.map.num_vertices(),
        m.map.num_edges(),
        m.map.num_faces(),
        m.face_degrees()
    );
    let t = tile(&m.map, None)?;
    let worst = t
        .diagram
        .rects
        .iter()
        .filter(|r| !r.degenerate)
        .map(|r| (r.width() / r.height() - 1.0).abs())
        .fold(0.0, f64::max);
    println!(
        "max |aspect - 1| = {worst:.1e}, tiling error {:.1e}",
        validate(&m.map, &t.voltage, &t.diagram).max_error()
    );
    std::fs::write(&out, render_svg(&t.diagram, ColorBy::Size, 800))?;
    println!("wrote {}", out.display());
    Ok(())
}
