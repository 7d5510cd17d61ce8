//! The dual map, with a seam used to measure windings of dual cycles.
//!
//! Dual edge `k` crosses primal edge `k` from its left face to its right face,
//! conductance `1 / c_k`. Dual half-edge `d` corresponds to the primal
//! half-edge `d ^ 1` on the boundary of the face it leaves.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::TAU;

use crate::error::Result;
use crate::map::embedding::{wrap_angle, wrap_signed, CylinderEmbedding};
use crate::map::{CombMap, MapParts, PlanarMap};

#[derive(Debug, Clone)]
pub struct DualMap {
    pub planar: PlanarMap,
    /// Signed crossing number of each dual edge with the seam: `+1` when the
    /// primal edge lies on the seam in its stored orientation.
    pub seam_crossing: Vec<i8>,
    /// The seam, a primal path of half-edges from `v0` to `v1`.
    pub seam: Vec<usize>,
    /// Representative `(angle, height)` of each face, when an embedding is known.
    pub points: Option<Vec<(f64, f64)>>,
    /// Lifted angular displacement along each dual edge.
    pub dtheta: Option<Vec<f64>>,
}

pub fn dual(map: &CombMap, emb: Option<&CylinderEmbedding>) -> Result<DualMap> {
    let ne = map.num_edges();
    let nf = map.num_faces();
    let ends = (0..ne)
        .map(|k| [map.left_face(k), map.right_face(k)])
        .collect();
    let rotation = map
        .faces()
        .iter()
        .map(|b| b.iter().rev().map(|&g| g ^ 1).collect())
        .collect();
    let planar = PlanarMap::from_parts(MapParts {
        vertex_ids: (0..nf as u64).collect(),
        edge_ids: map.edge_ids().to_vec(),
        ends,
        conductance: map.conductances().iter().map(|c| 1.0 / c).collect(),
        rotation,
    })?;

    let seam = match emb {
        Some(emb) => seam_near_zero(map, emb),
        None => map.bfs_path(map.v0(), map.v1()),
    };
    let mut seam_crossing = vec![0i8; ne];
    for &h in &seam {
        seam_crossing[h / 2] = if h & 1 == 0 { 1 } else { -1 };
    }

    let (points, dtheta) = match emb {
        Some(emb) => {
            let pts = face_points(map, emb);
            let dt = (0..ne)
                .map(|k| {
                    let [l, r] = planar.ends(k);
                    pts[r].0 - pts[l].0 + TAU * seam_crossing[k] as f64
                })
                .collect();
            (Some(pts), Some(dt))
        }
        None => (None, None),
    };
    Ok(DualMap {
        planar,
        seam_crossing,
        seam,
        points,
        dtheta,
    })
}

impl DualMap {
    /// Winding number of a closed walk of dual half-edges around the cylinder.
    pub fn winding(&self, walk: &[usize]) -> i64 {
        walk.iter()
            .map(|&d| {
                let m = self.seam_crossing[d / 2] as i64;
                if d & 1 == 0 {
                    m
                } else {
                    -m
                }
            })
            .sum()
    }

    /// Signed seam crossing of a single dual half-edge.
    pub fn crossing(&self, d: usize) -> i64 {
        let m = self.seam_crossing[d / 2] as i64;
        if d & 1 == 0 {
            m
        } else {
            -m
        }
    }
}

#[derive(PartialEq)]
struct Item(f64, usize);
impl Eq for Item {}
impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Item {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
    }
}

// Cheapest path from v0 to v1 where entering a vertex costs its angular
// distance to 0, so the seam hugs the line `theta = 0` when it can.
fn seam_near_zero(map: &CombMap, emb: &CylinderEmbedding) -> Vec<usize> {
    let nv = map.num_vertices();
    let cost = |v: usize| emb.theta(v).map_or(0.0, |t| wrap_signed(t).abs()) + 1e-9;
    let mut dist = vec![f64::INFINITY; nv];
    let mut via = vec![usize::MAX; nv];
    let mut heap = BinaryHeap::new();
    dist[map.v0()] = 0.0;
    heap.push(Item(0.0, map.v0()));
    while let Some(Item(d, v)) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        if v == map.v1() {
            break;
        }
        for &h in map.rotation(v) {
            let u = map.dest(h);
            let nd = d + cost(u);
            if nd < dist[u] {
                dist[u] = nd;
                via[u] = h;
                heap.push(Item(nd, u));
            }
        }
    }
    let mut path = Vec::new();
    let mut v = map.v1();
    while v != map.v0() {
        let h = via[v];
        path.push(h);
        v = map.origin(h);
    }
    path.reverse();
    path
}

// Centroid of the boundary vertices, lifted along the boundary. Faces
// touching a pole are pushed just past the extreme height on that side.
fn face_points(map: &CombMap, emb: &CylinderEmbedding) -> Vec<(f64, f64)> {
    let pole = emb.max_abs_height() + 1.0;
    map.faces()
        .iter()
        .map(|boundary| {
            let mut lifts = Vec::new();
            let mut heights = Vec::new();
            let mut cur: Option<f64> = None;
            let mut after_pole = false;
            let (mut low, mut high) = (false, false);
            for &h in boundary {
                let o = map.origin(h);
                if o == map.v0() {
                    low = true;
                }
                if o == map.v1() {
                    high = true;
                }
                match emb.coords[o] {
                    Some((t, x)) => {
                        let lift = match cur {
                            Some(c) if after_pole => c + wrap_signed(t - c),
                            Some(c) => c,
                            None => t,
                        };
                        lifts.push(lift);
                        heights.push(x);
                        cur = Some(lift + emb.dtheta_half(h));
                        after_pole = false;
                    }
                    None => after_pole = true,
                }
            }
            let theta = if lifts.is_empty() {
                0.0
            } else {
                wrap_angle(lifts.iter().sum::<f64>() / lifts.len() as f64)
            };
            let height = match (low, high) {
                (true, false) => -pole,
                (false, true) => pole,
                (true, true) => 0.0,
                (false, false) => heights.iter().sum::<f64>() / heights.len() as f64,
            };
            (theta, height)
        })
        .collect()
}
