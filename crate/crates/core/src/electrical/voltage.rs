use crate::electrical::solver::{solve_spd, Csr, Method};
use crate::error::{Error, Result};
use crate::map::CombMap;

/// Relative CG tolerance used for the voltage solve.
pub const SOLVER_TOL: f64 = 1e-13;

/// Edges whose endpoint voltages differ by at most this are treated as
/// carrying no current.
pub const DEGENERATE: f64 = 1e-12;

/// The voltage `h` with `h(v0) = 0`, `h(v1) = 1`, harmonic elsewhere.
#[derive(Debug, Clone)]
pub struct Voltage {
    pub h: Vec<f64>,
    /// Total current from `v0` to `v1`.
    pub eta: f64,
    /// Largest node-law violation, relative to the vertex weight.
    pub residual: f64,
    pub method: Option<Method>,
    pub iterations: usize,
}

/// An edge in its harmonic orientation, from low to high voltage.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Oriented {
    pub lower: usize,
    pub upper: usize,
    /// Half-edge leaving `lower` along the edge.
    pub up_half: usize,
    /// `c_e (h(upper) - h(lower))`, zero for degenerate edges.
    pub current: f64,
    pub degenerate: bool,
}

pub fn solve_voltage(map: &CombMap) -> Result<Voltage> {
    let nv = map.num_vertices();
    let (v0, v1) = (map.v0(), map.v1());
    let mut index = vec![usize::MAX; nv];
    let mut n = 0;
    for (v, slot) in index.iter_mut().enumerate() {
        if v != v0 && v != v1 {
            *slot = n;
            n += 1;
        }
    }
    let mut triplets = Vec::with_capacity(4 * map.num_edges());
    let mut rhs = vec![0.0; n];
    for e in 0..map.num_edges() {
        let [a, b] = map.ends(e);
        if a == b {
            continue;
        }
        let c = map.conductance(e);
        for (x, y) in [(a, b), (b, a)] {
            let i = index[x];
            if i == usize::MAX {
                continue;
            }
            triplets.push((i, i, c));
            match index[y] {
                usize::MAX => {
                    if y == v1 {
                        rhs[i] += c;
                    }
                }
                j => triplets.push((i, j, -c)),
            }
        }
    }
    let sol = solve_spd(&Csr::from_triplets(n, triplets), &rhs, SOLVER_TOL)?;
    let mut h = vec![0.0; nv];
    h[v1] = 1.0;
    for v in 0..nv {
        if index[v] != usize::MAX {
            h[v] = sol.x[index[v]];
        }
    }
    for (v, &x) in h.iter().enumerate() {
        if !(-1e-10..=1.0 + 1e-10).contains(&x) {
            return Err(Error::MaximumPrinciple {
                vertex: map.vertex_id(v),
                value: x,
            });
        }
    }
    let mut volt = Voltage::from_values(map, h)?;
    volt.method = Some(sol.method);
    volt.iterations = sol.iterations;
    Ok(volt)
}

impl Voltage {
    /// Wraps given values, computing the current and the node-law residual.
    pub fn from_values(map: &CombMap, h: Vec<f64>) -> Result<Voltage> {
        let out: f64 = map
            .incident(map.v0())
            .map(|(e, u)| map.conductance(e) * (h[u] - h[map.v0()]))
            .sum();
        let into: f64 = map
            .incident(map.v1())
            .map(|(e, u)| map.conductance(e) * (h[map.v1()] - h[u]))
            .sum();
        if (out - into).abs() > 1e-10 * out.abs().max(1.0) {
            return Err(Error::FlowMismatch { out, into });
        }
        let mut residual: f64 = 0.0;
        for x in 0..map.num_vertices() {
            if map.is_marked(x) {
                continue;
            }
            let s: f64 = map
                .incident(x)
                .map(|(e, u)| map.conductance(e) * (h[x] - h[u]))
                .sum();
            residual = residual.max(s.abs() / map.pi(x));
        }
        Ok(Voltage {
            h,
            eta: out,
            residual,
            method: None,
            iterations: 0,
        })
    }

    /// `h(head) - h(tail)` for the stored orientation.
    pub fn delta(&self, map: &CombMap, e: usize) -> f64 {
        self.h[map.head(e)] - self.h[map.tail(e)]
    }

    /// Current along half-edge `half`, `c_e (h(dest) - h(origin))`.
    pub fn flow(&self, map: &CombMap, half: usize) -> f64 {
        map.conductance(half / 2) * (self.h[map.dest(half)] - self.h[map.origin(half)])
    }

    /// Harmonic orientation of `e`; ties go from the smaller vertex id to the larger.
    pub fn orient(&self, map: &CombMap, e: usize) -> Oriented {
        let [a, b] = map.ends(e);
        let d = self.h[b] - self.h[a];
        let degenerate = d.abs() <= DEGENERATE;
        let forward = if degenerate {
            map.vertex_id(a) <= map.vertex_id(b)
        } else {
            d > 0.0
        };
        let current = if degenerate {
            0.0
        } else {
            map.conductance(e) * d.abs()
        };
        if forward {
            Oriented {
                lower: a,
                upper: b,
                up_half: 2 * e,
                current,
                degenerate,
            }
        } else {
            Oriented {
                lower: b,
                upper: a,
                up_half: 2 * e + 1,
                current,
                degenerate,
            }
        }
    }

    /// Total current entering `x` from below, or `eta` at `v0`.
    pub fn length(&self, map: &CombMap, x: usize) -> f64 {
        if x == map.v0() {
            return self.eta;
        }
        map.incident(x)
            .map(|(e, _)| self.orient(map, e))
            .filter(|o| o.upper == x && o.lower != x)
            .map(|o| o.current)
            .sum()
    }
}

/// Current along a half-edge.
pub fn flow(map: &CombMap, v: &Voltage, half: usize) -> f64 {
    v.flow(map, half)
}

/// Current out of `v0`, checked against the current into `v1`.
pub fn flow_strength(map: &CombMap, v: &Voltage) -> Result<f64> {
    Voltage::from_values(map, v.h.clone()).map(|w| w.eta)
}

/// Voltage at fraction `t` from the tail of `e`.
pub fn interpolate_h(map: &CombMap, v: &Voltage, e: usize, t: f64) -> f64 {
    let [a, b] = map.ends(e);
    v.h[a] + t * (v.h[b] - v.h[a])
}
