use crate::electrical::{Levels, Voltage};
use crate::map::CombMap;
use crate::tiling::SmithDiagram;

/// Deviations of a diagram from an exact tiling of `R/etaZ × [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TilingReport {
    pub eta: f64,
    /// `|sum of areas - eta|`.
    pub area_error: f64,
    /// Sum of areas minus the area of their union.
    pub overlap: f64,
    /// `eta` minus the area of the union.
    pub coverage_defect: f64,
    /// Largest `|width - c_e * height|`.
    pub aspect_error: f64,
    /// Largest `|eta - (segment lengths + crossing currents)|` over levels.
    pub level_error: f64,
}

impl TilingReport {
    pub fn max_error(&self) -> f64 {
        [
            self.area_error,
            self.overlap.abs(),
            self.coverage_defect.abs(),
            self.aspect_error,
            self.level_error,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    /// Every error within `tol`, relative to `max(1, eta)`.
    pub fn passes(&self, tol: f64) -> bool {
        self.max_error() <= tol * self.eta.max(1.0)
    }
}

pub fn validate(map: &CombMap, v: &Voltage, diagram: &SmithDiagram) -> TilingReport {
    let eta = diagram.eta;
    let mut area = 0.0;
    let mut aspect_error: f64 = 0.0;
    let mut pieces = Vec::new();
    for r in diagram.rects.iter().filter(|r| !r.degenerate) {
        let (w, h) = (r.width(), r.height());
        area += w * h;
        aspect_error = aspect_error.max((w - map.conductance(r.edge) * h).abs());
        if r.x1 <= eta {
            pieces.push([r.x0, r.x1, r.y0, r.y1]);
        } else {
            pieces.push([r.x0, eta, r.y0, r.y1]);
            pieces.push([0.0, (r.x1 - eta).min(r.x0), r.y0, r.y1]);
        }
    }
    let union = union_area(&pieces);

    let levels = Levels::new(map, v);
    let crossing = levels.crossing_current(map, v);
    let mut level_error: f64 = 0.0;
    for (i, members) in levels.members.iter().enumerate() {
        let s: f64 = members.iter().map(|&x| diagram.hsegs[x].len).sum::<f64>() + crossing[i];
        level_error = level_error.max((s - eta).abs());
    }

    TilingReport {
        eta,
        area_error: (area - eta).abs(),
        overlap: area - union,
        coverage_defect: eta - union,
        aspect_error,
        level_error,
    }
}

/// Area of a union of axis-parallel rectangles `[x0, x1, y0, y1]`.
pub fn union_area(rects: &[[f64; 4]]) -> f64 {
    let mut ys: Vec<f64> = rects.iter().flat_map(|r| [r[2], r[3]]).collect();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    if ys.len() < 2 {
        return 0.0;
    }
    let mut events: Vec<(f64, i32, usize, usize)> = Vec::with_capacity(2 * rects.len());
    for r in rects {
        if r[1] <= r[0] || r[3] <= r[2] {
            continue;
        }
        let a = ys.partition_point(|&y| y < r[2]);
        let b = ys.partition_point(|&y| y < r[3]);
        events.push((r[0], 1, a, b));
        events.push((r[1], -1, a, b));
    }
    events.sort_by(|p, q| p.0.total_cmp(&q.0).then(p.1.cmp(&q.1)));
    let mut tree = CoverTree::new(&ys);
    let mut area = 0.0;
    let mut last_x = events.first().map_or(0.0, |e| e.0);
    for (x, delta, a, b) in events {
        area += tree.covered() * (x - last_x);
        last_x = x;
        tree.update(1, 0, ys.len() - 1, a, b, delta);
    }
    area
}

// Segment tree over elementary intervals `[ys[i], ys[i+1]]` tracking the
// covered length.
struct CoverTree<'a> {
    ys: &'a [f64],
    count: Vec<i32>,
    len: Vec<f64>,
}

impl<'a> CoverTree<'a> {
    fn new(ys: &'a [f64]) -> Self {
        let n = 4 * ys.len();
        CoverTree {
            ys,
            count: vec![0; n],
            len: vec![0.0; n],
        }
    }

    fn covered(&self) -> f64 {
        self.len[1]
    }

    fn update(&mut self, node: usize, lo: usize, hi: usize, a: usize, b: usize, delta: i32) {
        if b <= lo || hi <= a {
            return;
        }
        if a <= lo && hi <= b {
            self.count[node] += delta;
        } else {
            let mid = (lo + hi) / 2;
            self.update(2 * node, lo, mid, a, b, delta);
            self.update(2 * node + 1, mid, hi, a, b, delta);
        }
        self.len[node] = if self.count[node] > 0 {
            self.ys[hi] - self.ys[lo]
        } else if hi - lo == 1 {
            0.0
        } else {
            self.len[2 * node] + self.len[2 * node + 1]
        };
    }
}
