//! Smith embeddings of cylinder lattices against their a priori positions:
//! the fitted affine map and the exit-law diagnostic.
//!
//! `cargo run --example convergence -- [overlay.svg]`

use smith_embedding::convergence::*;
use smith_embedding::tiling::{smith_embedding, tile};
use smith_embedding::walk::DEFAULT_BUDGET;

fn main() -> smith_embedding::Result<()> {
    let rows = lattice_family(&[8, 16, 32], DEFAULT_BAND)?;
    print!("{}", family_csv(&rows));

    let (map, emb) = make_lattice(16, LATTICE_HEIGHT)?;
    let rep = invariance_diagnostic(&map, &emb, DEFAULT_BAND, 2000, 1, DEFAULT_BUDGET)?;
    println!(
        "exit law over |height| <= {DEFAULT_BAND}: pooled z = {:.3} over {} starts",
        rep.z,
        rep.rows.len()
    );

    let out = std::env::args()
        .nth(1)
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("overlay.svg"));
    let t = tile(&map, Some(&emb))?;
    let se = smith_embedding(&map, &t.diagram);
    let fit = fit_affine(&se, t.diagram.eta, &emb, DEFAULT_BAND)?;
    std::fs::write(&out, overlay_svg(&fit, &se, &emb, DEFAULT_BAND, 800))?;
    println!("wrote {}", out.display());
    Ok(())
}
