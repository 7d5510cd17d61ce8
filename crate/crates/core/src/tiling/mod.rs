//! Smith diagrams: one rectangle per edge, tiling the cylinder `R/etaZ × [0, 1]`.

mod diagram;
mod svg;
mod validate;

pub use diagram::{build_diagram, HSeg, Rect, SmithDiagram, VSeg};
pub use svg::{render_svg, ColorBy};
pub use validate::{union_area, validate, TilingReport};

use crate::electrical::{conjugate, modulo, solve_voltage, Conjugate, Voltage};
use crate::error::Result;
use crate::map::{dual, wrap_angle, CombMap, CylinderEmbedding, DualMap};

/// Everything computed from a map on the way to its diagram.
#[derive(Debug, Clone)]
pub struct Tiling {
    pub voltage: Voltage,
    pub dual: DualMap,
    pub conjugate: Conjugate,
    pub diagram: SmithDiagram,
}

/// Solves for the voltage and its conjugate and builds the diagram.
pub fn tile(map: &CombMap, emb: Option<&CylinderEmbedding>) -> Result<Tiling> {
    let voltage = solve_voltage(map)?;
    let dual = dual(map, emb)?;
    let conjugate = conjugate(map, &voltage, &dual, None)?;
    let diagram = build_diagram(map, &voltage, &dual, &conjugate)?;
    Ok(Tiling {
        voltage,
        dual,
        conjugate,
        diagram,
    })
}

/// Midpoint of each vertex's horizontal segment, as `(re, im)` on
/// `R/etaZ × [0, 1]`. The marked vertices sit at angle 0.
pub fn smith_embedding(map: &CombMap, diagram: &SmithDiagram) -> Vec<(f64, f64)> {
    diagram
        .hsegs
        .iter()
        .map(|s| {
            if map.is_marked(s.vertex) {
                (0.0, s.y)
            } else {
                (modulo(s.x0 + s.len / 2.0, diagram.eta), s.y)
            }
        })
        .collect()
}

/// A priori embedding read off the diagram: the strip scaled to
/// circumference `2π`, vertices at their segment midpoints and each edge
/// displaced by its lifted midpoint step.
pub fn induced_embedding(map: &CombMap, diagram: &SmithDiagram) -> CylinderEmbedding {
    let k = std::f64::consts::TAU / diagram.eta;
    let se = smith_embedding(map, diagram);
    let coords = (0..map.num_vertices())
        .map(|v| (!map.is_marked(v)).then(|| (wrap_angle(k * se[v].0), k * (se[v].1 - 0.5))))
        .collect();
    let dtheta = (0..map.num_edges())
        .map(|e| {
            if map.is_pole_edge(e) {
                0.0
            } else {
                k * diagram.lifted_step(map, 2 * e)
            }
        })
        .collect();
    CylinderEmbedding { coords, dtheta }
}

impl SmithDiagram {
    /// Horizontal displacement between the midpoints of the segments of the
    /// endpoints of half-edge `h`, lifted through the rectangle of its edge.
    pub fn lifted_step(&self, map: &CombMap, h: usize) -> f64 {
        let (x, y) = (map.origin(h), map.dest(h));
        self.offset[h] - self.offset[h ^ 1] + (self.hsegs[y].len - self.hsegs[x].len) / 2.0
    }

    /// Shift of the segment start when moving along half-edge `h`.
    pub fn start_shift(&self, h: usize) -> f64 {
        self.offset[h] - self.offset[h ^ 1]
    }
}
