//! Tiles a cylinder lattice and writes the diagram as SVG.
//!
//! `cargo run --example lattice_svg -- [n] [out.svg]`

use smith_embedding::convergence::make_lattice;
use smith_embedding::tiling::{render_svg, tile, validate, ColorBy};

fn main() -> smith_embedding::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map(|s| s.parse().expect("n")).unwrap_or(12);
    let out = args
        .next()
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("lattice.svg"));

    let (map, emb) = make_lattice(n, 2.0)?;
    let t = tile(&map, Some(&emb))?;
    let rep = validate(&map, &t.voltage, &t.diagram);
    println!(
        "{} vertices, {} edges, eta = {:.6}, tiling error {:.1e}",
        map.num_vertices(),
        map.num_edges(),
        t.voltage.eta,
        rep.max_error()
    );
    std::fs::write(&out, render_svg(&t.diagram, ColorBy::Order, 800))?;
    println!("wrote {}", out.display());
    Ok(())
}
