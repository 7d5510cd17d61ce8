use crate::electrical::{modulo, Conjugate, Voltage};
use crate::error::{Error, Result};
use crate::map::{CombMap, DualMap};

/// Circular tolerance for matching segment endpoints.
const MATCH_TOL: f64 = 1e-9;

/// Rectangle of one edge: `[x0, x1] × [y0, y1]` with `x0` in `[0, eta)` and
/// `x1 = x0 + width`, so `x1` may exceed `eta` when the rectangle wraps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rect {
    pub edge: usize,
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    pub degenerate: bool,
}

impl Rect {
    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }
    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }
}

/// Horizontal segment of a vertex: the arc `[x0, x0 + len]` at height `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HSeg {
    pub vertex: usize,
    pub x0: f64,
    pub len: f64,
    pub y: f64,
}

/// Vertical segment of a face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VSeg {
    pub face: usize,
    pub x: f64,
    pub y0: f64,
    pub y1: f64,
}

#[derive(Debug, Clone)]
pub struct SmithDiagram {
    pub eta: f64,
    pub rects: Vec<Rect>,
    pub hsegs: Vec<HSeg>,
    pub vsegs: Vec<VSeg>,
    /// Position of each edge's interval inside the segment of the origin of
    /// each half-edge, measured from the segment's start.
    pub offset: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq)]
enum Side {
    In,
    Out,
}

pub fn build_diagram(
    map: &CombMap,
    v: &Voltage,
    dual: &DualMap,
    conj: &Conjugate,
) -> Result<SmithDiagram> {
    let eta = v.eta;
    let ne = map.num_edges();
    let orient: Vec<_> = (0..ne).map(|e| v.orient(map, e)).collect();

    let rects: Vec<Rect> = (0..ne)
        .map(|e| {
            let o = orient[e];
            let forward = o.up_half == 2 * e;
            let left = if forward {
                map.left_face(e)
            } else {
                map.right_face(e)
            };
            let x0 = conj.value(left);
            if o.degenerate {
                let y = v.h[o.lower];
                return Rect {
                    edge: e,
                    x0,
                    x1: x0,
                    y0: y,
                    y1: y,
                    degenerate: true,
                };
            }
            let inc = conj.lifted_increment(dual, e);
            let width = if forward { inc } else { -inc };
            Rect {
                edge: e,
                x0,
                x1: x0 + width,
                y0: v.h[o.lower],
                y1: v.h[o.upper],
                degenerate: false,
            }
        })
        .collect();

    let mut hsegs = Vec::with_capacity(map.num_vertices());
    let mut offset = vec![f64::NAN; 2 * ne];
    for x in 0..map.num_vertices() {
        let rot = map.rotation(x);
        let sides: Vec<(usize, Side)> = rot
            .iter()
            .filter(|&&h| !orient[h / 2].degenerate)
            .map(|&h| {
                (
                    h,
                    if orient[h / 2].up_half == h {
                        Side::Out
                    } else {
                        Side::In
                    },
                )
            })
            .collect();
        let seg = if x == map.v0() || x == map.v1() {
            HSeg {
                vertex: x,
                x0: 0.0,
                len: eta,
                y: v.h[x],
            }
        } else if sides.is_empty() {
            let x0 = rot.first().map_or(0.0, |&h| rects[h / 2].x0);
            HSeg {
                vertex: x,
                x0,
                len: 0.0,
                y: v.h[x],
            }
        } else {
            let ins = arc_run(map, &rects, &sides, Side::In, x, eta)?;
            let outs = arc_run(map, &rects, &sides, Side::Out, x, eta)?;
            let seg = match (&ins, &outs) {
                (Some(a), Some(b)) => {
                    if circ_dist(a.start, b.start, eta) > MATCH_TOL
                        || (a.len - b.len).abs() > MATCH_TOL
                    {
                        return Err(Error::NonContiguous(map.vertex_id(x)));
                    }
                    HSeg {
                        vertex: x,
                        x0: a.start,
                        len: a.len,
                        y: v.h[x],
                    }
                }
                (Some(a), None) | (None, Some(a)) => HSeg {
                    vertex: x,
                    x0: a.start,
                    len: a.len,
                    y: v.h[x],
                },
                (None, None) => unreachable!(),
            };
            for run in ins.iter().chain(outs.iter()) {
                for &(h, o) in &run.offsets {
                    offset[h] = o;
                }
            }
            seg
        };
        for &h in rot {
            if !offset[h].is_nan() {
                continue;
            }
            let r = &rects[h / 2];
            let mut o = modulo(r.x0 - seg.x0, eta);
            if o > seg.len + MATCH_TOL && o > eta - MATCH_TOL {
                o -= eta;
            }
            offset[h] = o.clamp(0.0, seg.len.max(0.0));
        }
        hsegs.push(seg);
    }

    let nf = map.num_faces();
    let mut lo = vec![f64::INFINITY; nf];
    let mut hi = vec![f64::NEG_INFINITY; nf];
    for r in rects.iter().filter(|r| !r.degenerate) {
        let o = orient[r.edge];
        let right = if o.up_half == 2 * r.edge {
            map.right_face(r.edge)
        } else {
            map.left_face(r.edge)
        };
        lo[right] = lo[right].min(r.y0);
        hi[right] = hi[right].max(r.y1);
    }
    let vsegs = (0..nf)
        .map(|f| {
            let x = conj.value(f);
            if lo[f] <= hi[f] {
                VSeg {
                    face: f,
                    x,
                    y0: lo[f],
                    y1: hi[f],
                }
            } else {
                let y = map.face(f).first().map_or(0.0, |&h| v.h[map.origin(h)]);
                VSeg {
                    face: f,
                    x,
                    y0: y,
                    y1: y,
                }
            }
        })
        .collect();

    Ok(SmithDiagram {
        eta,
        rects,
        hsegs,
        vsegs,
        offset,
    })
}

fn circ_dist(a: f64, b: f64, m: f64) -> f64 {
    let d = modulo(a - b, m);
    d.min(m - d)
}

struct Run {
    start: f64,
    len: f64,
    offsets: Vec<(usize, f64)>,
}

// Finds the single cyclic run of `side` half-edges around `x`, checking that
// consecutive intervals abut. Incoming intervals increase counter-clockwise,
// outgoing ones clockwise.
fn arc_run(
    map: &CombMap,
    rects: &[Rect],
    sides: &[(usize, Side)],
    side: Side,
    x: usize,
    eta: f64,
) -> Result<Option<Run>> {
    let n = sides.len();
    let count = sides.iter().filter(|s| s.1 == side).count();
    if count == 0 {
        return Ok(None);
    }
    let first = |i: usize| sides[i].1 == side && sides[(i + n - 1) % n].1 != side;
    let start = if count == n {
        0
    } else {
        if (0..n).filter(|&i| first(i)).count() != 1 {
            return Err(Error::NonContiguous(map.vertex_id(x)));
        }
        (0..n).find(|&i| first(i)).unwrap()
    };
    let mut run: Vec<usize> = (0..count).map(|i| sides[(start + i) % n].0).collect();
    if side == Side::Out {
        run.reverse();
    }
    for w in run.windows(2) {
        let (a, b) = (&rects[w[0] / 2], &rects[w[1] / 2]);
        if circ_dist(a.x1, b.x0, eta) > MATCH_TOL {
            return Err(Error::NonContiguous(map.vertex_id(x)));
        }
    }
    let mut len = 0.0;
    let mut offsets = Vec::with_capacity(count);
    for &h in &run {
        offsets.push((h, len));
        len += rects[h / 2].width();
    }
    Ok(Some(Run {
        start: rects[run[0] / 2].x0,
        len,
        offsets,
    }))
}
