//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use smith_embedding::map::{CombMap, PlanarMap};

/// Dirichlet problem solved by dense LU, assembled edge by edge.
pub fn oracle_voltage(map: &CombMap) -> Vec<f64> {
    let n = map.num_vertices();
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut b = DVector::<f64>::zeros(n);
    for e in 0..map.num_edges() {
        let (t, h, c) = (map.tail(e), map.head(e), map.conductance(e));
        a[(t, t)] += c;
        a[(h, h)] += c;
        a[(t, h)] -= c;
        a[(h, t)] -= c;
    }
    for m in [map.v0(), map.v1()] {
        for j in 0..n {
            a[(m, j)] = 0.0;
        }
        a[(m, m)] = 1.0;
    }
    b[map.v1()] = 1.0;
    a.lu()
        .solve(&b)
        .expect("nonsingular")
        .iter()
        .copied()
        .collect()
}

/// Harmonic measure of `target` seen from every vertex, for a walk killed
/// on `absorbing`.
pub fn oracle_absorption(map: &PlanarMap, absorbing: &[bool], target: usize) -> Vec<f64> {
    let n = map.num_vertices();
    let mut a = DMatrix::<f64>::zeros(n, n);
    let mut b = DVector::<f64>::zeros(n);
    for x in 0..n {
        if absorbing[x] {
            a[(x, x)] = 1.0;
            b[x] = if x == target { 1.0 } else { 0.0 };
            continue;
        }
        a[(x, x)] += map.pi(x);
        for e in 0..map.num_edges() {
            let (t, h) = (map.tail(e), map.head(e));
            if t == h {
                if t == x {
                    a[(x, x)] -= map.conductance(e);
                }
            } else if t == x {
                a[(x, h)] -= map.conductance(e);
            } else if h == x {
                a[(x, t)] -= map.conductance(e);
            }
        }
    }
    a.lu()
        .solve(&b)
        .expect("nonsingular")
        .iter()
        .copied()
        .collect()
}

/// Sum over pairs of rectangles of their intersection area on `R/etaZ`.
pub fn pairwise_overlap(rects: &[[f64; 4]], eta: f64) -> f64 {
    let mut pieces = Vec::new();
    for r in rects {
        if r[1] <= eta {
            pieces.push(*r);
        } else {
            pieces.push([r[0], eta, r[2], r[3]]);
            pieces.push([0.0, r[1] - eta, r[2], r[3]]);
        }
    }
    let mut total = 0.0;
    for i in 0..pieces.len() {
        for j in i + 1..pieces.len() {
            let (p, q) = (pieces[i], pieces[j]);
            let w = (p[1].min(q[1]) - p[0].max(q[0])).max(0.0);
            let h = (p[3].min(q[3]) - p[2].max(q[2])).max(0.0);
            total += w * h;
        }
    }
    total
}

/// Every spanning tree of `map` with the `wired` vertices identified, as a
/// sorted edge list with its weight.
pub fn enumerate_trees(map: &PlanarMap, wired: &[usize]) -> Vec<(Vec<usize>, f64)> {
    let n = map.num_vertices();
    let class: Vec<usize> = (0..n)
        .map(|v| if wired.contains(&v) { wired[0] } else { v })
        .collect();
    let nodes = {
        let mut c = class.clone();
        c.sort();
        c.dedup();
        c.len()
    };
    let ne = map.num_edges();
    let mut out = Vec::new();
    for mask in 0u64..(1 << ne) {
        if mask.count_ones() as usize != nodes - 1 {
            continue;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let mut ok = true;
        let mut weight = 1.0;
        let mut edges = Vec::new();
        for e in 0..ne {
            if mask >> e & 1 == 0 {
                continue;
            }
            let (a, b) = (
                find(&mut parent, class[map.tail(e)]),
                find(&mut parent, class[map.head(e)]),
            );
            if a == b {
                ok = false;
                break;
            }
            parent[a] = b;
            weight *= map.conductance(e);
            edges.push(e);
        }
        if ok {
            out.push((edges, weight));
        }
    }
    out
}
