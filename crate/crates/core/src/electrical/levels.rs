use crate::electrical::Voltage;
use crate::map::CombMap;

/// Voltages closer than this belong to the same level.
pub const LEVEL_TOL: f64 = 1e-10;

/// The distinct voltages realized by vertices, in increasing order.
#[derive(Debug, Clone)]
pub struct Levels {
    pub values: Vec<f64>,
    pub of_vertex: Vec<usize>,
    pub members: Vec<Vec<usize>>,
}

impl Levels {
    pub fn new(map: &CombMap, v: &Voltage) -> Levels {
        let mut order: Vec<usize> = (0..map.num_vertices()).collect();
        order.sort_by(|&a, &b| v.h[a].total_cmp(&v.h[b]).then(a.cmp(&b)));
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut last = f64::NEG_INFINITY;
        for &x in &order {
            if v.h[x] - last > LEVEL_TOL || members.is_empty() {
                members.push(Vec::new());
            }
            members.last_mut().unwrap().push(x);
            last = v.h[x];
        }
        let mut of_vertex = vec![0; map.num_vertices()];
        let values = members
            .iter()
            .enumerate()
            .map(|(i, m)| {
                for &x in m {
                    of_vertex[x] = i;
                }
                if m.contains(&map.v0()) {
                    0.0
                } else if m.contains(&map.v1()) {
                    1.0
                } else {
                    m.iter().map(|&x| v.h[x]).sum::<f64>() / m.len() as f64
                }
            })
            .collect();
        Levels {
            values,
            of_vertex,
            members,
        }
    }

    /// Index of the level at `a`, if some vertex realizes it.
    pub fn find(&self, a: f64) -> Option<usize> {
        let i = self.values.partition_point(|&x| x < a - LEVEL_TOL);
        (i < self.values.len() && (self.values[i] - a).abs() <= LEVEL_TOL).then_some(i)
    }

    /// For every level, the total current of edges passing strictly through it.
    pub fn crossing_current(&self, map: &CombMap, v: &Voltage) -> Vec<f64> {
        let n = self.values.len();
        let mut diff = vec![0.0; n + 1];
        for e in 0..map.num_edges() {
            let o = v.orient(map, e);
            if o.degenerate {
                continue;
            }
            let (lo, hi) = (v.h[o.lower], v.h[o.upper]);
            let a = self.values.partition_point(|&x| x <= lo + LEVEL_TOL);
            let b = self.values.partition_point(|&x| x < hi - LEVEL_TOL);
            if a < b {
                diff[a] += o.current;
                diff[b] -= o.current;
            }
        }
        let mut acc = 0.0;
        diff[..n]
            .iter()
            .map(|d| {
                acc += d;
                acc
            })
            .collect()
    }

    /// Edges passing strictly through voltage `a`.
    pub fn crossing_edges(map: &CombMap, v: &Voltage, a: f64) -> Vec<usize> {
        (0..map.num_edges())
            .filter(|&e| {
                let o = v.orient(map, e);
                !o.degenerate && v.h[o.lower] < a - LEVEL_TOL && v.h[o.upper] > a + LEVEL_TOL
            })
            .collect()
    }
}
