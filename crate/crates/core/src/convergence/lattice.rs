use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::map::{CombMap, CylinderEmbedding, MapParts};

/// Square lattice on the cylinder with `n` columns at spacing `2π/n`, rows at
/// the multiples of the spacing within `[-height, height]`, and an apex below
/// (`v0`) and above (`v1`) joined to the bottom and top rows.
///
/// Vertex `(row r, column j)` has index `r * n + j`; `v0` and `v1` come last.
pub fn make_lattice(n: usize, height: f64) -> Result<(CombMap, CylinderEmbedding)> {
    if n == 0 || !(height >= 0.0) {
        return Err(Error::InvalidParameter(
            "lattice needs n >= 1 and height >= 0".into(),
        ));
    }
    let s = TAU / n as f64;
    let k = (height / s + 1e-9).floor() as i64;
    let rows = (2 * k + 1) as usize;
    let nv = rows * n + 2;
    let (v0, v1) = (rows * n, rows * n + 1);
    let at = |r: usize, j: usize| r * n + (j % n);

    let mut ends = Vec::new();
    let mut dtheta = Vec::new();
    let mut horiz = vec![0; rows * n];
    let mut vert = vec![0; (rows + 1) * n];
    for r in 0..rows {
        for j in 0..n {
            horiz[at(r, j)] = ends.len();
            ends.push([at(r, j), at(r, j + 1)]);
            dtheta.push(s);
        }
    }
    // Vertical edge `i * n + j` enters row `i` from below; `i = rows` leaves the top row.
    for i in 0..=rows {
        for j in 0..n {
            vert[i * n + j] = ends.len();
            let lower = if i == 0 { v0 } else { at(i - 1, j) };
            let upper = if i == rows { v1 } else { at(i, j) };
            ends.push([lower, upper]);
            dtheta.push(0.0);
        }
    }

    let mut rotation = vec![Vec::new(); nv];
    for r in 0..rows {
        for j in 0..n {
            rotation[at(r, j)] = vec![
                2 * horiz[at(r, j)],
                2 * vert[(r + 1) * n + j],
                2 * horiz[at(r, j + n - 1)] + 1,
                2 * vert[r * n + j] + 1,
            ];
        }
    }
    rotation[v0] = (0..n).rev().map(|j| 2 * vert[j]).collect();
    rotation[v1] = (0..n).map(|j| 2 * vert[rows * n + j] + 1).collect();

    let ne = ends.len();
    let map = CombMap::build(
        MapParts {
            vertex_ids: (0..nv as u64).collect(),
            edge_ids: (0..ne as u64).collect(),
            ends,
            conductance: vec![1.0; ne],
            rotation,
        },
        v0,
        v1,
    )?;
    let mut coords = vec![None; nv];
    for r in 0..rows {
        for j in 0..n {
            coords[at(r, j)] = Some((j as f64 * s, (r as i64 - k) as f64 * s));
        }
    }
    Ok((map, CylinderEmbedding { coords, dtheta }))
}
