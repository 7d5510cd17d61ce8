//! Rotation systems on half-edges.
//!
//! Edge `k` owns half-edges `2k` (leaving its tail) and `2k + 1` (leaving its
//! head), so `twin(h) = h ^ 1`. `next(h)` is the counter-clockwise successor
//! of `h` around its origin. Faces are the orbits of `h -> next(twin(h))`;
//! the face of `h` lies on its right.

use std::collections::{HashMap, VecDeque};
use std::ops::Deref;

use crate::error::{Error, Result};

/// Raw description of a map, before any validation.
#[derive(Debug, Clone, PartialEq)]
pub struct MapParts {
    pub vertex_ids: Vec<u64>,
    pub edge_ids: Vec<u64>,
    /// `[tail, head]` as dense vertex indices.
    pub ends: Vec<[usize; 2]>,
    pub conductance: Vec<f64>,
    /// Half-edges around each vertex in counter-clockwise order.
    pub rotation: Vec<Vec<usize>>,
}

/// A connected map on the sphere with positive edge conductances.
#[derive(Debug, Clone)]
pub struct PlanarMap {
    vertex_ids: Vec<u64>,
    edge_ids: Vec<u64>,
    ends: Vec<[usize; 2]>,
    conductance: Vec<f64>,
    rotation: Vec<Vec<usize>>,
    next: Vec<usize>,
    prev: Vec<usize>,
    face_of: Vec<usize>,
    faces: Vec<Vec<usize>>,
    // Sum of incident conductances; a self-loop counts once.
    pi: Vec<f64>,
    vertex_index: HashMap<u64, usize>,
    edge_index: HashMap<u64, usize>,
}

impl PlanarMap {
    pub fn from_parts(parts: MapParts) -> Result<Self> {
        let MapParts {
            vertex_ids,
            edge_ids,
            ends,
            conductance,
            rotation,
        } = parts;
        let nv = vertex_ids.len();
        let ne = ends.len();
        if edge_ids.len() != ne || conductance.len() != ne || rotation.len() != nv {
            return Err(Error::InvalidRotation("inconsistent part lengths".into()));
        }
        let mut vertex_index = HashMap::with_capacity(nv);
        for (i, &id) in vertex_ids.iter().enumerate() {
            if vertex_index.insert(id, i).is_some() {
                return Err(Error::InvalidRotation(format!("duplicate vertex id {id}")));
            }
        }
        let mut edge_index = HashMap::with_capacity(ne);
        for (i, &id) in edge_ids.iter().enumerate() {
            if edge_index.insert(id, i).is_some() {
                return Err(Error::InvalidRotation(format!("duplicate edge id {id}")));
            }
        }
        for (k, &c) in conductance.iter().enumerate() {
            if !(c.is_finite() && c > 0.0) {
                return Err(Error::NonPositiveConductance {
                    edge: edge_ids[k],
                    value: c,
                });
            }
        }
        for (k, e) in ends.iter().enumerate() {
            if e[0] >= nv || e[1] >= nv {
                return Err(Error::InvalidRotation(format!(
                    "edge {} has an endpoint out of range",
                    edge_ids[k]
                )));
            }
        }

        let nh = 2 * ne;
        let mut seen = vec![false; nh];
        let mut next = vec![usize::MAX; nh];
        let mut prev = vec![usize::MAX; nh];
        for (v, rot) in rotation.iter().enumerate() {
            for (i, &h) in rot.iter().enumerate() {
                if h >= nh {
                    return Err(Error::InvalidRotation(format!(
                        "vertex {}: half-edge {h} out of range",
                        vertex_ids[v]
                    )));
                }
                if seen[h] {
                    return Err(Error::InvalidRotation(format!(
                        "half-edge {h} listed twice"
                    )));
                }
                seen[h] = true;
                if ends[h / 2][h & 1] != v {
                    return Err(Error::InvalidRotation(format!(
                        "half-edge {h} listed at vertex {} but leaves vertex {}",
                        vertex_ids[v],
                        vertex_ids[ends[h / 2][h & 1]]
                    )));
                }
                let n = rot[(i + 1) % rot.len()];
                next[h] = n;
                prev[n] = h;
            }
        }
        if let Some(h) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidRotation(format!(
                "half-edge {h} missing from the rotation"
            )));
        }

        let mut face_of = vec![usize::MAX; nh];
        let mut faces = Vec::new();
        for start in 0..nh {
            if face_of[start] != usize::MAX {
                continue;
            }
            let f = faces.len();
            let mut boundary = Vec::new();
            let mut h = start;
            loop {
                face_of[h] = f;
                boundary.push(h);
                h = next[h ^ 1];
                if h == start {
                    break;
                }
            }
            faces.push(boundary);
        }

        let mut pi = vec![0.0; nv];
        for (k, e) in ends.iter().enumerate() {
            pi[e[0]] += conductance[k];
            if e[1] != e[0] {
                pi[e[1]] += conductance[k];
            }
        }

        let map = PlanarMap {
            vertex_ids,
            edge_ids,
            ends,
            conductance,
            rotation,
            next,
            prev,
            face_of,
            faces,
            pi,
            vertex_index,
            edge_index,
        };
        let comps = map.component_count();
        if comps != 1 {
            return Err(Error::Disconnected(comps));
        }
        let chi = map.euler_characteristic();
        if chi != 2 {
            return Err(Error::NotPlanar(chi));
        }
        Ok(map)
    }

    pub fn to_parts(&self) -> MapParts {
        MapParts {
            vertex_ids: self.vertex_ids.clone(),
            edge_ids: self.edge_ids.clone(),
            ends: self.ends.clone(),
            conductance: self.conductance.clone(),
            rotation: self.rotation.clone(),
        }
    }

    fn component_count(&self) -> usize {
        let nv = self.num_vertices();
        let mut comp = vec![usize::MAX; nv];
        let mut count = 0;
        for s in 0..nv {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = count;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for &h in &self.rotation[v] {
                    let u = self.dest(h);
                    if comp[u] == usize::MAX {
                        comp[u] = count;
                        queue.push_back(u);
                    }
                }
            }
            count += 1;
        }
        count
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.num_vertices() as i64 - self.num_edges() as i64 + self.num_faces() as i64
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_ids.len()
    }
    pub fn num_edges(&self) -> usize {
        self.ends.len()
    }
    pub fn num_halves(&self) -> usize {
        2 * self.ends.len()
    }
    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_id(&self, v: usize) -> u64 {
        self.vertex_ids[v]
    }
    pub fn edge_id(&self, e: usize) -> u64 {
        self.edge_ids[e]
    }
    pub fn vertex_ids(&self) -> &[u64] {
        &self.vertex_ids
    }
    pub fn edge_ids(&self) -> &[u64] {
        &self.edge_ids
    }
    pub fn vertex_index(&self, id: u64) -> Option<usize> {
        self.vertex_index.get(&id).copied()
    }
    pub fn edge_index(&self, id: u64) -> Option<usize> {
        self.edge_index.get(&id).copied()
    }

    pub fn tail(&self, e: usize) -> usize {
        self.ends[e][0]
    }
    pub fn head(&self, e: usize) -> usize {
        self.ends[e][1]
    }
    pub fn ends(&self, e: usize) -> [usize; 2] {
        self.ends[e]
    }
    pub fn is_loop(&self, e: usize) -> bool {
        self.ends[e][0] == self.ends[e][1]
    }
    pub fn conductance(&self, e: usize) -> f64 {
        self.conductance[e]
    }
    pub fn conductances(&self) -> &[f64] {
        &self.conductance
    }
    /// Total conductance at `v`, counting a self-loop once.
    pub fn pi(&self, v: usize) -> f64 {
        self.pi[v]
    }

    pub fn origin(&self, h: usize) -> usize {
        self.ends[h / 2][h & 1]
    }
    pub fn dest(&self, h: usize) -> usize {
        self.ends[h / 2][(h & 1) ^ 1]
    }
    pub fn twin(h: usize) -> usize {
        h ^ 1
    }
    pub fn next(&self, h: usize) -> usize {
        self.next[h]
    }
    pub fn prev(&self, h: usize) -> usize {
        self.prev[h]
    }
    /// Successor of `h` along the boundary of its face.
    pub fn face_next(&self, h: usize) -> usize {
        self.next[h ^ 1]
    }
    pub fn face_of(&self, h: usize) -> usize {
        self.face_of[h]
    }
    pub fn face(&self, f: usize) -> &[usize] {
        &self.faces[f]
    }
    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }
    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }
    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }
    /// Face to the left of edge `e` in its stored orientation.
    pub fn left_face(&self, e: usize) -> usize {
        self.face_of[2 * e + 1]
    }
    /// Face to the right of edge `e` in its stored orientation.
    pub fn right_face(&self, e: usize) -> usize {
        self.face_of[2 * e]
    }

    /// Incident edges of `v` with their far endpoint; a loop appears once.
    pub fn incident(&self, v: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rotation[v].iter().filter_map(move |&h| {
            let e = h / 2;
            if self.is_loop(e) && h & 1 == 1 {
                None
            } else {
                Some((e, self.dest(h)))
            }
        })
    }

    /// Breadth-first path of half-edges from `a` to `b`.
    pub fn bfs_path(&self, a: usize, b: usize) -> Vec<usize> {
        let mut via = vec![usize::MAX; self.num_vertices()];
        let mut seen = vec![false; self.num_vertices()];
        seen[a] = true;
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                break;
            }
            for &h in &self.rotation[v] {
                let u = self.dest(h);
                if !seen[u] {
                    seen[u] = true;
                    via[u] = h;
                    queue.push_back(u);
                }
            }
        }
        let mut path = Vec::new();
        let mut v = b;
        while v != a {
            let h = via[v];
            path.push(h);
            v = self.origin(h);
        }
        path.reverse();
        path
    }
}

/// A planar map with two distinct marked vertices `v0` and `v1`.
#[derive(Debug, Clone)]
pub struct CombMap {
    planar: PlanarMap,
    v0: usize,
    v1: usize,
}

impl CombMap {
    pub fn new(planar: PlanarMap, v0: usize, v1: usize) -> Result<Self> {
        if v0 == v1 {
            return Err(Error::MarkedNotDistinct);
        }
        let n = planar.num_vertices();
        if v0 >= n || v1 >= n {
            return Err(Error::InvalidParameter("marked vertex out of range".into()));
        }
        Ok(CombMap { planar, v0, v1 })
    }

    /// Validates `parts` and marks the given dense indices.
    pub fn build(parts: MapParts, v0: usize, v1: usize) -> Result<Self> {
        if v0 == v1 {
            return Err(Error::MarkedNotDistinct);
        }
        CombMap::new(PlanarMap::from_parts(parts)?, v0, v1)
    }

    pub fn v0(&self) -> usize {
        self.v0
    }
    pub fn v1(&self) -> usize {
        self.v1
    }
    pub fn is_marked(&self, v: usize) -> bool {
        v == self.v0 || v == self.v1
    }
    pub fn planar(&self) -> &PlanarMap {
        &self.planar
    }
    pub fn with_marks(&self, v0: usize, v1: usize) -> Result<Self> {
        CombMap::new(self.planar.clone(), v0, v1)
    }
    /// Edges with a marked endpoint.
    pub fn is_pole_edge(&self, e: usize) -> bool {
        let [a, b] = self.planar.ends(e);
        self.is_marked(a) || self.is_marked(b)
    }
}

impl Deref for CombMap {
    type Target = PlanarMap;
    fn deref(&self) -> &PlanarMap {
        &self.planar
    }
}
