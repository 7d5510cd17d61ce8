//! A priori positions on the cylinder `R/2πZ × R`.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::map::CombMap;

const TOL: f64 = 1e-9;

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_angle(t: f64) -> f64 {
    let r = t.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed representative of `t` modulo `2π` in `(-π, π]`.
pub fn wrap_signed(t: f64) -> f64 {
    let r = wrap_angle(t);
    if r > std::f64::consts::PI {
        r - TAU
    } else {
        r
    }
}

/// Angle and height for every unmarked vertex, plus the lifted angular
/// displacement `dtheta` of every edge in its stored orientation.
/// Edges touching a marked vertex carry `dtheta = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderEmbedding {
    pub coords: Vec<Option<(f64, f64)>>,
    pub dtheta: Vec<f64>,
}

impl CylinderEmbedding {
    pub fn theta(&self, v: usize) -> Option<f64> {
        self.coords[v].map(|c| c.0)
    }
    pub fn height(&self, v: usize) -> Option<f64> {
        self.coords[v].map(|c| c.1)
    }

    /// Displacement along half-edge `h`.
    pub fn dtheta_half(&self, h: usize) -> f64 {
        if h & 1 == 0 {
            self.dtheta[h / 2]
        } else {
            -self.dtheta[h / 2]
        }
    }

    /// Largest `|height|` over unmarked vertices.
    pub fn max_abs_height(&self) -> f64 {
        self.coords
            .iter()
            .flatten()
            .map(|c| c.1.abs())
            .fold(0.0, f64::max)
    }

    /// Stand-in height for a marked vertex when something has to be drawn
    /// or interpolated next to it.
    pub fn pole_height(&self, map: &CombMap, v: usize) -> f64 {
        let m = self.max_abs_height() + 1.0;
        if v == map.v0() {
            -m
        } else {
            m
        }
    }

    pub fn validate(&self, map: &CombMap) -> Result<()> {
        if self.coords.len() != map.num_vertices() || self.dtheta.len() != map.num_edges() {
            return Err(Error::Embedding("size does not match the map".into()));
        }
        for v in 0..map.num_vertices() {
            match (map.is_marked(v), self.coords[v]) {
                (true, Some(_)) => {
                    return Err(Error::Embedding(format!(
                        "marked vertex {} has coordinates",
                        map.vertex_id(v)
                    )))
                }
                (false, None) => {
                    return Err(Error::Embedding(format!(
                        "vertex {} has no coordinates",
                        map.vertex_id(v)
                    )))
                }
                (false, Some((t, x))) => {
                    if !(t.is_finite() && x.is_finite() && (0.0..TAU).contains(&t)) {
                        return Err(Error::Embedding(format!(
                            "vertex {} has bad coordinates",
                            map.vertex_id(v)
                        )));
                    }
                }
                (true, None) => {}
            }
        }
        for e in 0..map.num_edges() {
            let d = self.dtheta[e];
            if !d.is_finite() {
                return Err(Error::Embedding(format!(
                    "edge {}: dtheta is not finite",
                    map.edge_id(e)
                )));
            }
            if map.is_pole_edge(e) {
                if d != 0.0 {
                    return Err(Error::Embedding(format!(
                        "edge {} touches a marked vertex but dtheta != 0",
                        map.edge_id(e)
                    )));
                }
                continue;
            }
            let [a, b] = map.ends(e);
            let diff = self.theta(b).unwrap() - self.theta(a).unwrap() - d;
            if wrap_signed(diff).abs() > TOL {
                return Err(Error::Embedding(format!(
                    "edge {}: dtheta is not a lift of the angle difference",
                    map.edge_id(e)
                )));
            }
        }
        for (f, boundary) in map.faces().iter().enumerate() {
            if boundary.iter().any(|&h| map.is_marked(map.origin(h))) {
                continue;
            }
            let s: f64 = boundary.iter().map(|&h| self.dtheta_half(h)).sum();
            if s.abs() > TOL * (1.0 + boundary.len() as f64) {
                return Err(Error::Embedding(format!("face {f} has angular defect {s}")));
            }
        }
        Ok(())
    }

    /// Lifted angles along a path of half-edges avoiding marked vertices.
    pub fn lift_path(&self, map: &CombMap, path: &[usize], start: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(path.len() + 1);
        let mut t = start;
        out.push(t);
        for &h in path {
            debug_assert!(!map.is_pole_edge(h / 2));
            t += self.dtheta_half(h);
            out.push(t);
        }
        out
    }
}
