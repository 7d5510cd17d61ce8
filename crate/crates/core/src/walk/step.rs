use rand::Rng;

use crate::error::{Error, Result};
use crate::map::{CombMap, CylinderEmbedding, PlanarMap};
use crate::tiling::SmithDiagram;

/// One-step transition law from `x`, aggregated over parallel edges and
/// sorted by destination.
pub fn step_law(map: &PlanarMap, x: usize) -> Vec<(usize, f64)> {
    let mut law: Vec<(usize, f64)> = map
        .incident(x)
        .map(|(e, y)| (y, map.conductance(e) / map.pi(x)))
        .collect();
    law.sort_by_key(|p| p.0);
    let mut out: Vec<(usize, f64)> = Vec::with_capacity(law.len());
    for (y, p) in law {
        match out.last_mut() {
            Some(last) if last.0 == y => last.1 += p,
            _ => out.push((y, p)),
        }
    }
    out
}

/// Cumulative weights over the incident edges of each vertex, for sampling.
#[derive(Debug, Clone)]
pub struct Stepper {
    // Per vertex: (half-edge leaving it, cumulative weight).
    table: Vec<Vec<(usize, f64)>>,
}

impl Stepper {
    pub fn new(map: &PlanarMap) -> Stepper {
        let table = (0..map.num_vertices())
            .map(|x| {
                let mut acc = 0.0;
                map.rotation(x)
                    .iter()
                    .filter(|&&h| !(map.is_loop(h / 2) && h & 1 == 1))
                    .map(|&h| {
                        acc += map.conductance(h / 2);
                        (h, acc)
                    })
                    .collect()
            })
            .collect();
        Stepper { table }
    }

    /// Samples the half-edge used by one step from `x`.
    pub fn step<R: Rng + ?Sized>(&self, x: usize, rng: &mut R) -> usize {
        let t = &self.table[x];
        let u = rng.gen::<f64>() * t.last().expect("vertex has an edge").1;
        let i = t.partition_point(|p| p.1 <= u).min(t.len() - 1);
        t[i].0
    }
}

/// A walk: visited vertices, the half-edges used, and the a priori lift of
/// the angle when an embedding was supplied.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkTrace {
    pub vertices: Vec<usize>,
    pub halves: Vec<usize>,
    pub lift: Option<Vec<f64>>,
}

impl WalkTrace {
    pub fn len(&self) -> usize {
        self.halves.len()
    }
    pub fn is_empty(&self) -> bool {
        self.halves.is_empty()
    }
    pub fn last(&self) -> usize {
        *self.vertices.last().unwrap()
    }
}

/// Runs the walk from `start` until it enters `stop` (checked after every
/// step, and at time 0) or `budget` steps have been taken.
pub fn simulate<R: Rng + ?Sized>(
    map: &PlanarMap,
    stepper: &Stepper,
    emb: Option<&CylinderEmbedding>,
    start: usize,
    stop: &[bool],
    rng: &mut R,
    budget: u64,
) -> Result<WalkTrace> {
    let mut vertices = vec![start];
    let mut halves = Vec::new();
    let mut lift = emb.map(|e| vec![e.theta(start).unwrap_or(0.0)]);
    let mut x = start;
    let mut steps = 0u64;
    while !stop[x] {
        if steps == budget {
            return Err(Error::StepBudget(budget));
        }
        let h = stepper.step(x, rng);
        x = map.dest(h);
        vertices.push(x);
        halves.push(h);
        if let (Some(l), Some(e)) = (lift.as_mut(), emb) {
            let last = *l.last().unwrap();
            l.push(last + e.dtheta_half(h));
        }
        steps += 1;
    }
    Ok(WalkTrace {
        vertices,
        halves,
        lift,
    })
}

/// Net number of turns of the a priori lift, `(last - first) / circumference`.
pub fn winding(trace: &WalkTrace, circumference: f64) -> Option<f64> {
    let l = trace.lift.as_ref()?;
    Some((l[l.len() - 1] - l[0]) / circumference)
}

/// Lifted Smith positions of the walk, each drawn uniformly on the segment of
/// the current vertex. Returns `(re, im)` on the universal cover of `R/etaZ`.
pub fn embed_trace<R: Rng + ?Sized>(
    map: &CombMap,
    diagram: &SmithDiagram,
    trace: &WalkTrace,
    rng: &mut R,
) -> Vec<(f64, f64)> {
    let mut start = diagram.hsegs[trace.vertices[0]].x0;
    let mut out = Vec::with_capacity(trace.vertices.len());
    let mut push = |x: usize, start: f64| {
        let s = &diagram.hsegs[x];
        out.push((start + rng.gen::<f64>() * s.len, s.y));
    };
    push(trace.vertices[0], start);
    for (i, &h) in trace.halves.iter().enumerate() {
        start += diagram.start_shift(h);
        push(trace.vertices[i + 1], start);
        debug_assert_eq!(map.dest(h), trace.vertices[i + 1]);
    }
    out
}
