//! Small maps used by the examples, the tests and `smith verify`.

use std::f64::consts::TAU;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convergence::make_lattice;
use crate::electrical::solve_voltage;
use crate::map::{insert_vertices, CombMap, CylinderEmbedding, MapParts};

/// `v0 - x - v1` with unit conductances.
pub fn path_map() -> (CombMap, CylinderEmbedding) {
    let map = CombMap::build(
        MapParts {
            vertex_ids: vec![0, 1, 2],
            edge_ids: vec![0, 1],
            ends: vec![[0, 1], [1, 2]],
            conductance: vec![1.0, 1.0],
            rotation: vec![vec![0], vec![1, 2], vec![3]],
        },
        0,
        2,
    )
    .expect("path map");
    let emb = CylinderEmbedding {
        coords: vec![None, Some((0.0, 0.0)), None],
        dtheta: vec![0.0, 0.0],
    };
    (map, emb)
}

/// `k` parallel edges from `v0` to `v1` with the given conductances.
pub fn parallel_map(conductance: &[f64]) -> (CombMap, CylinderEmbedding) {
    let k = conductance.len();
    let map = CombMap::build(
        MapParts {
            vertex_ids: vec![0, 1],
            edge_ids: (0..k as u64).collect(),
            ends: vec![[0, 1]; k],
            conductance: conductance.to_vec(),
            rotation: vec![
                (0..k).rev().map(|i| 2 * i).collect(),
                (0..k).map(|i| 2 * i + 1).collect(),
            ],
        },
        0,
        1,
    )
    .expect("parallel map");
    let emb = CylinderEmbedding {
        coords: vec![None, None],
        dtheta: vec![0.0; k],
    };
    (map, emb)
}

/// Triangle on vertices 0, 1, 2 with edges `0-1`, `1-2`, `2-0`, marked at 0 and 1.
pub fn triangle_map(conductance: [f64; 3]) -> CombMap {
    CombMap::build(
        MapParts {
            vertex_ids: vec![0, 1, 2],
            edge_ids: vec![0, 1, 2],
            ends: vec![[0, 1], [1, 2], [2, 0]],
            conductance: conductance.to_vec(),
            rotation: vec![vec![0, 5], vec![1, 2], vec![3, 4]],
        },
        0,
        1,
    )
    .expect("triangle map")
}

/// Knobs for [`random_map`].
#[derive(Debug, Clone)]
pub struct RandomMapOptions {
    pub allow_loops: bool,
    pub allow_multi: bool,
    /// Resample until every edge carries a non-negligible current.
    pub generic: bool,
    /// Upper bound on subdivision vertices added at the end.
    pub subdivisions: usize,
}

impl Default for RandomMapOptions {
    fn default() -> Self {
        RandomMapOptions {
            allow_loops: true,
            allow_multi: true,
            generic: false,
            subdivisions: 3,
        }
    }
}

/// A random connected map on the cylinder with a valid a priori embedding.
///
/// Starts from a small cylinder lattice, adds random diagonals in square
/// faces, optionally parallel edges and self-loops inside faces away from
/// the poles, deletes random non-bridge edges, draws conductances
/// log-uniformly in `[0.1, 10]` and finally subdivides a few edges.
pub fn random_map(seed: u64, opts: &RandomMapOptions) -> (CombMap, CylinderEmbedding) {
    for attempt in 0u64.. {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt);
        let (map, emb) = random_map_once(&mut rng, opts);
        if !opts.generic {
            return (map, emb);
        }
        let v = solve_voltage(&map).expect("random map solves");
        if (0..map.num_edges()).all(|e| v.delta(&map, e).abs() > 1e-7) {
            return (map, emb);
        }
    }
    unreachable!()
}

fn random_map_once(rng: &mut ChaCha8Rng, opts: &RandomMapOptions) -> (CombMap, CylinderEmbedding) {
    let n = rng.gen_range(3..=6);
    let k = rng.gen_range(0..=2);
    let (lattice, lemb) = make_lattice(n, k as f64 * TAU / n as f64).expect("lattice");
    let mut ed = Editor::new(&lattice, &lemb);

    // Diagonals across square faces.
    for f in 0..lattice.num_faces() {
        let b = lattice.face(f);
        if b.len() != 4
            || b.iter().any(|&h| lattice.is_marked(lattice.origin(h)))
            || !rng.gen_bool(0.4)
        {
            continue;
        }
        let i = rng.gen_range(0..2);
        let d = lemb.dtheta_half(b[i]) + lemb.dtheta_half(b[i + 1]);
        ed.add_chord(b[i], b[i + 2], d);
    }

    if opts.allow_multi || opts.allow_loops {
        let (m, emb) = ed.snapshot();
        let inner: Vec<usize> = (0..m.num_faces())
            .filter(|&f| m.face(f).iter().all(|&h| !m.is_marked(m.origin(h))))
            .collect();
        if !inner.is_empty() {
            if opts.allow_multi {
                for _ in 0..rng.gen_range(1..=2) {
                    let b = m.face(*inner.choose(rng).unwrap());
                    let i = rng.gen_range(0..b.len());
                    let j = (i + 1) % b.len();
                    if !m.is_loop(b[i] / 2) {
                        // `b` is read before earlier chords split the face; undo
                        // a chord that would now cross one.
                        let before = ed.clone();
                        ed.add_chord(b[i], b[j], emb.dtheta_half(b[i]));
                        if !ed.is_planar() {
                            ed = before;
                        }
                    }
                }
            }
            if opts.allow_loops && rng.gen_bool(0.7) {
                let b = m.face(*inner.choose(rng).unwrap());
                let h = b[rng.gen_range(0..b.len())];
                ed.add_chord(h, h, 0.0);
            }
        }
    }

    let deletions = rng.gen_range(0..=ed.parts.ends.len() / 4);
    for _ in 0..deletions {
        let e = rng.gen_range(0..ed.parts.ends.len());
        if ed.alive[e] && ed.deletable(e, opts.generic) {
            ed.alive[e] = false;
        }
    }

    let (map, emb) = ed.snapshot();
    let mut parts = map.to_parts();
    for c in parts.conductance.iter_mut() {
        *c = 10f64.powf(rng.gen_range(-1.0..=1.0));
    }
    let map = CombMap::build(parts, map.v0(), map.v1()).expect("reweighted");
    let mut points = Vec::new();
    for _ in 0..rng.gen_range(0..=opts.subdivisions) {
        let e = rng.gen_range(0..map.num_edges());
        if points.iter().all(|&(f, _)| f != e) {
            points.push((e, rng.gen_range(0.2..0.8)));
        }
    }
    let r = insert_vertices(&map, Some(&emb), &points).expect("subdivision");
    (r.map, r.embedding.unwrap())
}

/// Mutable copy of a map for structural edits; edges are never renumbered
/// until [`Editor::snapshot`] compacts them.
#[derive(Clone)]
struct Editor {
    parts: MapParts,
    coords: Vec<Option<(f64, f64)>>,
    dtheta: Vec<f64>,
    alive: Vec<bool>,
    v0: usize,
    v1: usize,
}

impl Editor {
    fn new(map: &CombMap, emb: &CylinderEmbedding) -> Editor {
        Editor {
            parts: map.to_parts(),
            coords: emb.coords.clone(),
            dtheta: emb.dtheta.clone(),
            alive: vec![true; map.num_edges()],
            v0: map.v0(),
            v1: map.v1(),
        }
    }

    fn origin(&self, h: usize) -> usize {
        self.parts.ends[h / 2][h & 1]
    }

    /// New edge from the origin of `a` to the origin of `b`, drawn inside the
    /// face that `a` and `b` bound; each new half-edge goes just before them.
    fn add_chord(&mut self, a: usize, b: usize, dtheta: f64) {
        let k = self.parts.ends.len();
        let (u, v) = (self.origin(a), self.origin(b));
        self.parts.ends.push([u, v]);
        self.parts
            .edge_ids
            .push(self.parts.edge_ids.iter().max().unwrap() + 1);
        self.parts.conductance.push(1.0);
        self.dtheta.push(dtheta);
        self.alive.push(true);
        let pos = self.parts.rotation[u].iter().position(|&h| h == a).unwrap();
        if a == b {
            self.parts.rotation[u].splice(pos..pos, [2 * k, 2 * k + 1]);
        } else {
            self.parts.rotation[u].insert(pos, 2 * k);
            let pos = self.parts.rotation[v].iter().position(|&h| h == b).unwrap();
            self.parts.rotation[v].insert(pos, 2 * k + 1);
        }
    }

    fn deletable(&self, e: usize, keep_degree: bool) -> bool {
        let nv = self.parts.vertex_ids.len();
        let mut degree = vec![0usize; nv];
        let mut adj = vec![Vec::new(); nv];
        for (f, &[a, b]) in self.parts.ends.iter().enumerate() {
            if self.alive[f] && f != e {
                degree[a] += 1;
                degree[b] += 1;
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        if keep_degree {
            let [a, b] = self.parts.ends[e];
            let low = |v: usize| v != self.v0 && v != self.v1 && degree[v] < 2;
            if low(a) || low(b) {
                return false;
            }
        }
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen.iter().all(|&s| s)
    }

    fn is_planar(&self) -> bool {
        CombMap::build(self.compact().0, self.v0, self.v1).is_ok()
    }

    fn snapshot(&self) -> (CombMap, CylinderEmbedding) {
        let (parts, dtheta) = self.compact();
        let map = CombMap::build(parts, self.v0, self.v1).expect("edited map stays planar");
        (
            map,
            CylinderEmbedding {
                coords: self.coords.clone(),
                dtheta,
            },
        )
    }

    fn compact(&self) -> (MapParts, Vec<f64>) {
        let mut renum = vec![usize::MAX; self.alive.len()];
        let mut parts = MapParts {
            vertex_ids: self.parts.vertex_ids.clone(),
            edge_ids: Vec::new(),
            ends: Vec::new(),
            conductance: Vec::new(),
            rotation: Vec::new(),
        };
        let mut dtheta = Vec::new();
        for e in 0..self.alive.len() {
            if self.alive[e] {
                renum[e] = parts.ends.len();
                parts.edge_ids.push(self.parts.edge_ids[e]);
                parts.ends.push(self.parts.ends[e]);
                parts.conductance.push(self.parts.conductance[e]);
                dtheta.push(self.dtheta[e]);
            }
        }
        parts.rotation = self
            .parts
            .rotation
            .iter()
            .map(|rot| {
                rot.iter()
                    .filter(|&&h| self.alive[h / 2])
                    .map(|&h| 2 * renum[h / 2] + (h & 1))
                    .collect()
            })
            .collect();
        (parts, dtheta)
    }
}
