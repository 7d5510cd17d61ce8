//! Splitting edges by inserting degree-two vertices.

use crate::error::{Error, Result};
use crate::map::embedding::wrap_angle;
use crate::map::{CombMap, CylinderEmbedding};

/// Result of [`insert_vertices`]. Original vertices keep their indices; new
/// vertices and edges are appended.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub map: CombMap,
    pub embedding: Option<CylinderEmbedding>,
    /// Original edge that each edge of the refined map is part of.
    pub parent_edge: Vec<usize>,
    /// `(original edge, fraction from its tail, new vertex)`.
    pub inserted: Vec<(usize, f64, usize)>,
    pub original_vertices: usize,
}

/// Inserts a vertex at fraction `d` from the tail of each listed edge. A piece
/// of relative length `l` of an edge with conductance `c` gets conductance
/// `c / l`, so voltages at the original vertices do not change.
pub fn insert_vertices(
    map: &CombMap,
    emb: Option<&CylinderEmbedding>,
    points: &[(usize, f64)],
) -> Result<Refinement> {
    let ne = map.num_edges();
    let mut per_edge: Vec<Vec<f64>> = vec![Vec::new(); ne];
    for &(e, d) in points {
        if e >= ne {
            return Err(Error::InvalidRefinement(format!(
                "edge index {e} out of range"
            )));
        }
        if !(d > 0.0 && d < 1.0) {
            return Err(Error::InvalidRefinement(format!(
                "fraction {d} is not in (0, 1)"
            )));
        }
        per_edge[e].push(d);
    }
    for (e, list) in per_edge.iter_mut().enumerate() {
        list.sort_by(f64::total_cmp);
        if list.windows(2).any(|w| w[1] - w[0] <= 0.0) {
            return Err(Error::InvalidRefinement(format!(
                "repeated fraction on edge {}",
                map.edge_id(e)
            )));
        }
    }

    let mut parts = map.to_parts();
    let mut coords = emb.map(|e| e.coords.clone());
    let mut dtheta = emb.map(|e| e.dtheta.clone());
    let mut parent_edge: Vec<usize> = (0..ne).collect();
    let mut inserted = Vec::new();
    let mut next_vid = parts.vertex_ids.iter().max().map_or(0, |m| m + 1);
    let mut next_eid = parts.edge_ids.iter().max().map_or(0, |m| m + 1);

    for (e, fracs) in per_edge.iter().enumerate() {
        if fracs.is_empty() {
            continue;
        }
        let u = map.head(e);
        let c = map.conductance(e);
        let lengths: Vec<f64> = std::iter::once(fracs[0])
            .chain(fracs.windows(2).map(|w| w[1] - w[0]))
            .chain(std::iter::once(1.0 - fracs[fracs.len() - 1]))
            .collect();
        parts.conductance[e] = c / lengths[0];
        if let Some(dt) = dtheta.as_mut() {
            dt[e] *= lengths[0];
        }
        // Half-edge arriving at the vertex currently at the end of the chain.
        let mut incoming = 2 * e + 1;
        for (i, &d) in fracs.iter().enumerate() {
            let nv = parts.vertex_ids.len();
            parts.vertex_ids.push(next_vid);
            next_vid += 1;
            let f = parts.ends.len();
            parts.edge_ids.push(next_eid);
            next_eid += 1;
            parts.ends[incoming / 2][1] = nv;
            parts.ends.push([nv, u]);
            parts.conductance.push(c / lengths[i + 1]);
            parts.rotation.push(vec![incoming, 2 * f]);
            parent_edge.push(e);
            inserted.push((e, d, nv));
            if let (Some(cs), Some(dt), Some(emb)) = (coords.as_mut(), dtheta.as_mut(), emb) {
                cs.push(Some(interpolate(map, emb, e, d)));
                dt.push(emb.dtheta[e] * lengths[i + 1]);
            }
            incoming = 2 * f + 1;
        }
        // The head now sees the last piece instead of the original edge.
        let slot = parts.rotation[u]
            .iter()
            .position(|&h| h == 2 * e + 1)
            .expect("head half-edge present");
        parts.rotation[u][slot] = incoming;
    }

    let new_map = CombMap::build(parts, map.v0(), map.v1())?;
    let embedding = match (coords, dtheta) {
        (Some(coords), Some(dtheta)) => Some(CylinderEmbedding { coords, dtheta }),
        _ => None,
    };
    Ok(Refinement {
        map: new_map,
        embedding,
        parent_edge,
        inserted,
        original_vertices: map.num_vertices(),
    })
}

fn interpolate(map: &CombMap, emb: &CylinderEmbedding, e: usize, d: f64) -> (f64, f64) {
    let [t, u] = map.ends(e);
    let height = |v: usize| emb.height(v).unwrap_or_else(|| emb.pole_height(map, v));
    let theta = match (emb.theta(t), emb.theta(u)) {
        (Some(a), _) => a + d * emb.dtheta[e],
        (None, Some(b)) => b,
        (None, None) => 0.0,
    };
    (wrap_angle(theta), height(t) + d * (height(u) - height(t)))
}
