//! Exact laws of the walk conditioned on its sequence of levels.

use crate::electrical::{Levels, Voltage};
use crate::error::{Error, Result};
use crate::map::CombMap;
use crate::tiling::SmithDiagram;
use crate::walk::levels::{level_measure, LevelMeasure};

/// Output of [`conditional_hitting`].
#[derive(Debug, Clone)]
pub struct HittingLaw {
    pub heights: Vec<f64>,
    /// `P(X_i = x | levels)` for each index, as `(vertex, probability)`.
    pub conditional: Vec<Vec<(usize, f64)>>,
    /// The level measure at each index, for comparison.
    pub measures: Vec<LevelMeasure>,
}

impl HittingLaw {
    /// Largest difference between the two at any index and vertex.
    pub fn max_deviation(&self) -> f64 {
        self.conditional
            .iter()
            .zip(&self.measures)
            .flat_map(|(c, m)| c.iter().map(move |&(x, p)| (p - m.mass(x)).abs()))
            .fold(0.0, f64::max)
    }
}

// Forward and backward messages of the walk started from the level measure
// at heights[0] and constrained to heights[n] at time n.
struct Chain<'a> {
    map: &'a CombMap,
    members: Vec<&'a [usize]>,
    measures: Vec<LevelMeasure>,
    // Position of each vertex inside its level's member list.
    pos: Vec<usize>,
    level_of: &'a [usize],
    idx: Vec<usize>,
    alpha: Vec<Vec<f64>>,
    beta: Vec<Vec<f64>>,
}

// Half-edges leaving x, a loop counted once.
fn out_halves(map: &CombMap, x: usize) -> impl Iterator<Item = usize> + '_ {
    map.rotation(x)
        .iter()
        .copied()
        .filter(move |&h| !(map.is_loop(h / 2) && h & 1 == 1))
}

impl<'a> Chain<'a> {
    fn new(
        map: &'a CombMap,
        v: &Voltage,
        levels: &'a Levels,
        heights: &[f64],
    ) -> Result<Chain<'a>> {
        if heights.is_empty() {
            return Err(Error::InvalidParameter("empty height sequence".into()));
        }
        let mut idx = Vec::with_capacity(heights.len());
        let mut measures = Vec::with_capacity(heights.len());
        for &a in heights {
            measures.push(level_measure(map, v, a)?);
            idx.push(levels.find(a).ok_or(Error::LevelNotVertexed(a))?);
        }
        let mut pos = vec![0; map.num_vertices()];
        for m in &levels.members {
            for (i, &x) in m.iter().enumerate() {
                pos[x] = i;
            }
        }
        let members: Vec<&[usize]> = idx.iter().map(|&i| levels.members[i].as_slice()).collect();
        let mut chain = Chain {
            map,
            members,
            measures,
            pos,
            level_of: &levels.of_vertex,
            idx,
            alpha: Vec::new(),
            beta: Vec::new(),
        };
        chain.forward()?;
        chain.backward();
        Ok(chain)
    }

    fn forward(&mut self) -> Result<()> {
        let m0 = &self.measures[0];
        let first: Vec<f64> = self.members[0].iter().map(|&x| m0.mass(x)).collect();
        self.alpha.push(first);
        for n in 0..self.idx.len() - 1 {
            let mut next = vec![0.0; self.members[n + 1].len()];
            for (i, &x) in self.members[n].iter().enumerate() {
                let a = self.alpha[n][i];
                if a == 0.0 {
                    continue;
                }
                let pi = self.map.pi(x);
                for h in out_halves(self.map, x) {
                    let y = self.map.dest(h);
                    if self.level_of[y] == self.idx[n + 1] {
                        next[self.pos[y]] += a * self.map.conductance(h / 2) / pi;
                    }
                }
            }
            if next.iter().sum::<f64>() <= 0.0 {
                return Err(Error::Inadmissible(n + 1));
            }
            self.alpha.push(next);
        }
        Ok(())
    }

    fn backward(&mut self) {
        let n_last = self.idx.len() - 1;
        let mut beta = vec![Vec::new(); self.idx.len()];
        beta[n_last] = vec![1.0; self.members[n_last].len()];
        for n in (0..n_last).rev() {
            beta[n] = self.members[n]
                .iter()
                .map(|&x| {
                    let pi = self.map.pi(x);
                    out_halves(self.map, x)
                        .filter(|&h| self.level_of[self.map.dest(h)] == self.idx[n + 1])
                        .map(|h| {
                            self.map.conductance(h / 2) / pi
                                * beta[n + 1][self.pos[self.map.dest(h)]]
                        })
                        .sum()
                })
                .collect();
        }
        self.beta = beta;
    }

    fn normalizer(&self) -> f64 {
        self.alpha.last().unwrap().iter().sum()
    }
}

/// `P(X_i = x | h(X_n) = heights[n] for all n)` for the walk started from
/// the level measure at `heights[0]`. The map must carry every level in the
/// sequence on vertices.
pub fn conditional_hitting(map: &CombMap, v: &Voltage, heights: &[f64]) -> Result<HittingLaw> {
    let levels = Levels::new(map, v);
    let chain = Chain::new(map, v, &levels, heights)?;
    let z = chain.normalizer();
    let conditional = (0..heights.len())
        .map(|n| {
            chain.members[n]
                .iter()
                .enumerate()
                .map(|(i, &x)| (x, chain.alpha[n][i] * chain.beta[n][i] / z))
                .collect()
        })
        .collect();
    Ok(HittingLaw {
        heights: heights.to_vec(),
        conditional,
        measures: chain.measures,
    })
}

/// `E[wind_eta | levels]` for the Smith-embedded walk: each position is
/// uniform on its segment, so the expectation only sees segment midpoints.
pub fn expected_conditional_winding(
    map: &CombMap,
    v: &Voltage,
    diagram: &SmithDiagram,
    heights: &[f64],
) -> Result<f64> {
    let levels = Levels::new(map, v);
    let chain = Chain::new(map, v, &levels, heights)?;
    let z = chain.normalizer();
    let mut total = 0.0;
    for n in 0..heights.len() - 1 {
        for (i, &x) in chain.members[n].iter().enumerate() {
            let a = chain.alpha[n][i];
            if a == 0.0 {
                continue;
            }
            let pi = map.pi(x);
            for h in out_halves(map, x) {
                let y = map.dest(h);
                if chain.level_of[y] != chain.idx[n + 1] {
                    continue;
                }
                let p = a * map.conductance(h / 2) / pi * chain.beta[n + 1][chain.pos[y]] / z;
                total += p * diagram.lifted_step(map, h);
            }
        }
    }
    Ok(total / diagram.eta)
}

/// All admissible sequences `[a_0, ..., a_steps]` of interior levels, for
/// every interior starting level.
pub fn admissible_sequences(map: &CombMap, v: &Voltage, steps: usize) -> Vec<Vec<f64>> {
    let levels = Levels::new(map, v);
    let interior: Vec<usize> = (0..levels.values.len())
        .filter(|&i| levels.values[i] > 0.0 && levels.values[i] < 1.0)
        .collect();
    let mut out = Vec::new();
    for &start in &interior {
        let Ok(m) = level_measure(map, v, levels.values[start]) else {
            continue;
        };
        let dist: Vec<(usize, f64)> = m.masses.into_iter().filter(|p| p.1 > 0.0).collect();
        let mut seq = vec![start];
        extend(map, &levels, &dist, &mut seq, steps, &mut out);
    }
    out
}

fn extend(
    map: &CombMap,
    levels: &Levels,
    dist: &[(usize, f64)],
    seq: &mut Vec<usize>,
    steps: usize,
    out: &mut Vec<Vec<f64>>,
) {
    if seq.len() == steps + 1 {
        out.push(seq.iter().map(|&i| levels.values[i]).collect());
        return;
    }
    // Split the next-step mass by level.
    let mut by_level: Vec<(usize, Vec<(usize, f64)>)> = Vec::new();
    for &(x, p) in dist {
        let pi = map.pi(x);
        for h in out_halves(map, x) {
            let y = map.dest(h);
            let l = levels.of_vertex[y];
            let val = levels.values[l];
            if !(val > 0.0 && val < 1.0) {
                continue;
            }
            let q = p * map.conductance(h / 2) / pi;
            match by_level.iter_mut().find(|b| b.0 == l) {
                Some(b) => b.1.push((y, q)),
                None => by_level.push((l, vec![(y, q)])),
            }
        }
    }
    by_level.sort_by_key(|b| b.0);
    for (l, mut next) in by_level {
        next.sort_by_key(|p| p.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(next.len());
        for (y, q) in next {
            match merged.last_mut() {
                Some(last) if last.0 == y => last.1 += q,
                _ => merged.push((y, q)),
            }
        }
        seq.push(l);
        extend(map, levels, &merged, seq, steps, out);
        seq.pop();
    }
}
