use std::collections::HashMap;

use crate::electrical::{Levels, Voltage, LEVEL_TOL};
use crate::error::{Error, Result};
use crate::map::{insert_vertices, CombMap, CylinderEmbedding, Refinement};

/// A map refined so that the requested levels are carried by vertices only.
#[derive(Debug, Clone)]
pub struct Augmented {
    pub map: CombMap,
    pub embedding: Option<CylinderEmbedding>,
    /// Voltage of the refined map, assigned by the series law.
    pub voltage: Voltage,
    pub parent_edge: Vec<usize>,
    /// `(original edge, fraction from its tail, new vertex)`.
    pub inserted: Vec<(usize, f64, usize)>,
    /// Set when nothing had to be inserted because a vertex already sits at the level.
    pub notice: Option<String>,
}

/// Inserts a vertex at voltage `a` on every edge whose voltage interval
/// strictly contains `a`.
pub fn level_augment(
    map: &CombMap,
    emb: Option<&CylinderEmbedding>,
    v: &Voltage,
    a: f64,
) -> Result<Augmented> {
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "level {a} is not in (0, 1)"
        )));
    }
    let existing = (0..map.num_vertices()).any(|x| (v.h[x] - a).abs() <= 1e-12);
    let mut aug = augment(map, emb, v, &[a])?;
    if existing {
        aug.notice = Some(format!("level {a} already carried by a vertex"));
    }
    Ok(aug)
}

/// Inserts vertices so that every level realized by some vertex meets edges
/// only at vertices. Afterwards each step of the walk changes the level by
/// at most one position in the sorted list of levels.
pub fn level_augment_all(
    map: &CombMap,
    emb: Option<&CylinderEmbedding>,
    v: &Voltage,
) -> Result<Augmented> {
    let levels = Levels::new(map, v);
    let interior: Vec<f64> = levels
        .values
        .iter()
        .copied()
        .filter(|&a| a > 0.0 && a < 1.0)
        .collect();
    augment(map, emb, v, &interior)
}

fn augment(
    map: &CombMap,
    emb: Option<&CylinderEmbedding>,
    v: &Voltage,
    sorted_levels: &[f64],
) -> Result<Augmented> {
    let mut points = Vec::new();
    let mut values = HashMap::new();
    for e in 0..map.num_edges() {
        let o = v.orient(map, e);
        if o.degenerate {
            continue;
        }
        let (ht, hh) = (v.h[map.tail(e)], v.h[map.head(e)]);
        let (lo, hi) = (v.h[o.lower], v.h[o.upper]);
        let from = sorted_levels.partition_point(|&a| a <= lo + LEVEL_TOL);
        let to = sorted_levels.partition_point(|&a| a < hi - LEVEL_TOL);
        for &a in &sorted_levels[from..to.max(from)] {
            points.push((e, (a - ht) / (hh - ht)));
            values.insert((e, ((a - ht) / (hh - ht)).to_bits()), a);
        }
    }
    let Refinement {
        map: refined,
        embedding,
        parent_edge,
        inserted,
        ..
    } = insert_vertices(map, emb, &points)?;
    let mut h = v.h.clone();
    h.resize(refined.num_vertices(), 0.0);
    for &(e, d, x) in &inserted {
        h[x] = values[&(e, d.to_bits())];
    }
    let voltage = Voltage::from_values(&refined, h)?;
    Ok(Augmented {
        map: refined,
        embedding,
        voltage,
        parent_edge,
        inserted,
        notice: None,
    })
}

/// The measure on the vertices of a level with mass proportional to the
/// length of their horizontal segments.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelMeasure {
    pub level: f64,
    /// `(vertex, mass)` sorted by vertex.
    pub masses: Vec<(usize, f64)>,
}

impl LevelMeasure {
    pub fn total(&self) -> f64 {
        self.masses.iter().map(|p| p.1).sum()
    }

    pub fn mass(&self, x: usize) -> f64 {
        self.masses
            .binary_search_by_key(&x, |p| p.0)
            .map_or(0.0, |i| self.masses[i].1)
    }
}

/// Requires that no edge passes strictly through `a`.
pub fn level_measure(map: &CombMap, v: &Voltage, a: f64) -> Result<LevelMeasure> {
    if !(a > 0.0 && a < 1.0) || !Levels::crossing_edges(map, v, a).is_empty() {
        return Err(Error::LevelNotVertexed(a));
    }
    let mut masses = Vec::new();
    for x in 0..map.num_vertices() {
        if (v.h[x] - a).abs() > LEVEL_TOL {
            continue;
        }
        let (mut inflow, mut outflow) = (0.0, 0.0);
        for (e, _) in map.incident(x) {
            let o = v.orient(map, e);
            if o.lower == o.upper || o.degenerate {
                continue;
            }
            if o.upper == x {
                inflow += o.current;
            } else {
                outflow += o.current;
            }
        }
        if (inflow - outflow).abs() > 1e-9 * v.eta.max(1e-300) {
            return Err(Error::FlowMismatch {
                out: outflow,
                into: inflow,
            });
        }
        masses.push((x, inflow / v.eta));
    }
    let m = LevelMeasure { level: a, masses };
    if (m.total() - 1.0).abs() > 1e-9 {
        // Vertices within tolerance of each other but not of `a`.
        return Err(Error::LevelNotVertexed(a));
    }
    Ok(m)
}
