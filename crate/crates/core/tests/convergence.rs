use std::f64::consts::TAU;

use proptest::prelude::*;
use smith_embedding::convergence::*;
use smith_embedding::map::CylinderEmbedding;
use smith_embedding::tiling::{smith_embedding, tile};
use smith_embedding::walk::DEFAULT_BUDGET;

// Recursive definition of the discrete Fréchet distance, memoized.
fn frechet_oracle(p: &[(f64, f64)], q: &[(f64, f64)]) -> f64 {
    fn go(
        i: usize,
        j: usize,
        p: &[(f64, f64)],
        q: &[(f64, f64)],
        memo: &mut Vec<Vec<Option<f64>>>,
    ) -> f64 {
        if let Some(v) = memo[i][j] {
            return v;
        }
        let d = ((p[i].0 - q[j].0).powi(2) + (p[i].1 - q[j].1).powi(2)).sqrt();
        let v = if i == 0 && j == 0 {
            d
        } else if i == 0 {
            go(0, j - 1, p, q, memo).max(d)
        } else if j == 0 {
            go(i - 1, 0, p, q, memo).max(d)
        } else {
            let best = go(i - 1, j, p, q, memo)
                .min(go(i, j - 1, p, q, memo))
                .min(go(i - 1, j - 1, p, q, memo));
            best.max(d)
        };
        memo[i][j] = Some(v);
        v
    }
    let mut memo = vec![vec![None; q.len()]; p.len()];
    go(p.len() - 1, q.len() - 1, p, q, &mut memo)
}

fn curve() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-5.0..5.0f64, -5.0..5.0f64), 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn frechet_matches_the_recursion_and_is_a_metric(p in curve(), q in curve(), r in curve()) {
        let pq = dcmp(&p, &q).unwrap();
        prop_assert!((pq - frechet_oracle(&p, &q)).abs() <= 1e-12);
        prop_assert!((pq - dcmp(&q, &p).unwrap()).abs() <= 1e-12);
        let pr = dcmp(&p, &r).unwrap();
        let rq = dcmp(&r, &q).unwrap();
        prop_assert!(pq <= pr + rq + 1e-12);
        prop_assert_eq!(dcmp(&p, &p).unwrap(), 0.0);
    }

    #[test]
    fn repeating_points_does_not_move_a_curve(p in curve(), reps in prop::collection::vec(1usize..4, 12)) {
        let slow: Vec<_> = p.iter().zip(&reps).flat_map(|(&x, &k)| std::iter::repeat(x).take(k)).collect();
        prop_assert_eq!(dcmp(&p, &slow).unwrap(), 0.0);
    }
}

#[test]
fn frechet_of_simple_curves() {
    assert_eq!(dcmp(&[], &[(0.0, 0.0)]), None);
    let a: Vec<_> = (0..=10).map(|i| (i as f64 / 10.0, 0.0)).collect();
    let b: Vec<_> = a.iter().map(|p| (p.0, 0.3)).collect();
    assert!((dcmp(&a, &b).unwrap() - 0.3).abs() < 1e-15);
    // Going backwards costs the whole length.
    let rev: Vec<_> = a.iter().rev().copied().collect();
    assert!((dcmp(&a, &rev).unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn smith_output_fits_itself_exactly() {
    let (map, emb) = make_lattice(8, 2.0).unwrap();
    let t = tile(&map, Some(&emb)).unwrap();
    let se = smith_embedding(&map, &t.diagram);
    let k = TAU / t.diagram.eta;
    let own = CylinderEmbedding {
        coords: (0..map.num_vertices())
            .map(|v| (!map.is_marked(v)).then(|| (k * se[v].0, se[v].1)))
            .collect(),
        dtheta: emb.dtheta.clone(),
    };
    let fit = fit_affine(&se, t.diagram.eta, &own, 10.0).unwrap();
    assert!((fit.c_h - 1.0).abs() < 1e-12 && fit.b_h.abs() < 1e-12);
    assert!(fit.sup_err < 1e-12, "{fit:?}");
}

#[test]
fn one_row_band_is_degenerate() {
    let (map, emb) = make_lattice(8, 4.0).unwrap();
    let t = tile(&map, Some(&emb)).unwrap();
    let se = smith_embedding(&map, &t.diagram);
    assert!(fit_affine(&se, t.diagram.eta, &emb, 0.1).is_err());
    assert!(fit_affine(&se, t.diagram.eta, &emb, 1.0).is_ok());
}

#[test]
fn lattice_family_is_exact_in_height_and_does_not_degrade_in_angle() {
    let rows = lattice_family(&[32, 8, 16], DEFAULT_BAND).unwrap();
    assert_eq!(
        rows.iter().map(|r| r.n).collect::<Vec<_>>(),
        vec![8, 16, 32]
    );
    for r in &rows {
        eprintln!(
            "n = {:2}: eta = {:.6}, c_h = {:.6}, height err {:.2e}, angle err {:.2e}, row linearity {:.2e}",
            r.n, r.fit.eta, r.fit.c_h, r.fit.sup_err_height, r.fit.sup_err_angle, r.row_linearity
        );
        assert!(r.fit.c_h > 0.0);
        assert!(r.fit.sup_err_height <= 1e-9);
        assert!(r.row_linearity <= 1e-10);
    }
    for w in rows.windows(2) {
        assert!(w[1].fit.sup_err_angle <= 1.1 * w[0].fit.sup_err_angle + 1e-12);
    }
    let csv = family_csv(&rows);
    assert!(csv.starts_with("n,eta,c_h,b_h,b_w,sup_err_height,sup_err_angle\n8,"));
    assert_eq!(csv.lines().count(), 4);
}

#[test]
fn lattice_walks_exit_a_symmetric_band_evenly() {
    let (map, emb) = make_lattice(16, 4.0).unwrap();
    let rep = invariance_diagnostic(&map, &emb, 1.0, 2000, 5, DEFAULT_BUDGET).unwrap();
    assert_eq!(rep.rows.len(), 16);
    for r in &rep.rows {
        assert!((r.predicted - 0.5).abs() < 1e-12);
    }
    eprintln!("primal z = {:.3}", rep.z);
    assert!(rep.pass);

    let dual = dual_invariance_diagnostic(&map, &emb, 1.0, 1000, 6, DEFAULT_BUDGET).unwrap();
    eprintln!("dual z = {:.3} over {} starts", dual.z, dual.rows.len());
    assert!(dual.pass);

    // Starting on the boundary of a band with no room exits at once.
    let off = invariance_diagnostic(&map, &emb, 0.0, 10, 0, DEFAULT_BUDGET).unwrap();
    assert!(off.rows.iter().all(|r| r.mean_steps == 0.0));
}

#[test]
fn overlay_marks_every_vertex_in_view() {
    let (map, emb) = make_lattice(8, 4.0).unwrap();
    let t = tile(&map, Some(&emb)).unwrap();
    let se = smith_embedding(&map, &t.diagram);
    let fit = fit_affine(&se, t.diagram.eta, &emb, 1.0).unwrap();
    let svg = overlay_svg(&fit, &se, &emb, 1.0, 600);
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    let in_view = emb
        .coords
        .iter()
        .flatten()
        .filter(|c| c.1.abs() <= 1.5)
        .count();
    assert_eq!(svg.matches("<circle").count(), 2 * in_view);
}
