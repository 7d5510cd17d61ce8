//! Smith diagrams of the smallest maps: a path and three parallel edges.

use smith_embedding::fixtures::{parallel_map, path_map};
use smith_embedding::tiling::{tile, validate};

fn main() -> smith_embedding::Result<()> {
    let (path, pe) = path_map();
    let (par, qe) = parallel_map(&[1.0, 2.0, 0.5]);
    for (name, map, emb) in [
        ("path v0 - x - v1", &path, &pe),
        ("three parallel edges", &par, &qe),
    ] {
        let t = tile(map, Some(emb))?;
        println!("{name}: eta = {}", t.voltage.eta);
        for r in &t.diagram.rects {
            println!(
                "  edge {}: [{:.3}, {:.3}] x [{:.3}, {:.3}], conductance {}",
                map.edge_id(r.edge),
                r.x0,
                r.x1,
                r.y0,
                r.y1,
                map.conductance(r.edge)
            );
        }
        let rep = validate(map, &t.voltage, &t.diagram);
        println!("  largest tiling error {:.1e}", rep.max_error());
    }
    Ok(())
}
