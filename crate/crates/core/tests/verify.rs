use smith_embedding::convergence::make_lattice;
use smith_embedding::fixtures::{
    parallel_map, path_map, random_map, triangle_map, RandomMapOptions,
};
use smith_embedding::verify::*;

#[test]
fn every_law_holds_on_fixtures_and_random_maps() {
    let opts = VerifyOptions::default();
    let (p, pe) = path_map();
    let (q, qe) = parallel_map(&[1.0, 2.0, 3.0]);
    let (l, le) = make_lattice(6, 1.5).unwrap();
    let mut reports = vec![
        verify_map(&p, Some(&pe), &opts).unwrap(),
        verify_map(&q, Some(&qe), &opts).unwrap(),
        verify_map(&triangle_map([1.0, 2.0, 3.0]), None, &opts).unwrap(),
        verify_map(&l, Some(&le), &opts).unwrap(),
    ];
    for seed in 0..6 {
        let (m, e) = random_map(seed, &RandomMapOptions::default());
        reports.push(verify_map(&m, Some(&e), &opts).unwrap());
    }
    for (i, r) in reports.iter().enumerate() {
        assert!(r.pass, "report {i}: {r:#?}");
        assert_eq!(r.laws.len(), 12);
        for law in r.laws.iter().filter(|l| l.status == Status::Pass) {
            assert!(law.max_deviation.unwrap() <= law.tolerance);
        }
    }
    // The lattice is generic and loop-free, so nothing is skipped.
    assert!(
        reports[3].laws.iter().all(|l| l.status == Status::Pass),
        "{:#?}",
        reports[3]
    );
}

#[test]
fn generic_maps_check_the_hitting_laws() {
    let opts = RandomMapOptions {
        allow_loops: false,
        generic: true,
        ..Default::default()
    };
    for seed in 0..3 {
        let (m, e) = random_map(seed, &opts);
        let r = verify_map(&m, Some(&e), &VerifyOptions::default()).unwrap();
        for name in ["hitting_law", "zero_winding"] {
            assert_eq!(
                r.law(name).unwrap().status,
                Status::Pass,
                "seed {seed}: {:?}",
                r.law(name)
            );
        }
    }
}

#[test]
fn loops_skip_the_hitting_laws_with_a_reason() {
    let (m, e) = random_map(5, &RandomMapOptions::default());
    assert!((0..m.num_edges()).any(|k| m.is_loop(k)));
    let r = verify_map(&m, Some(&e), &VerifyOptions::default()).unwrap();
    let law = r.law("hitting_law").unwrap();
    assert_eq!(law.status, Status::Skipped);
    assert!(
        law.detail.contains("loops") && law.max_deviation.unwrap() > law.tolerance,
        "{law:?}"
    );
    assert!(r.pass);
}

#[test]
fn impossible_tolerances_fail() {
    let (m, e) = random_map(1, &RandomMapOptions::default());
    let opts = VerifyOptions {
        tol: Tolerances {
            geometric: 1e-30,
            algebraic: 1e-30,
            exact: 1e-30,
        },
        ..VerifyOptions::default()
    };
    let r = verify_map(&m, Some(&e), &opts).unwrap();
    assert!(!r.pass);
    assert!(r.laws.iter().any(|l| l.status == Status::Fail));
}

#[test]
fn reports_are_reproducible() {
    let (m, e) = random_map(3, &RandomMapOptions::default());
    let opts = VerifyOptions {
        seed: 9,
        ..VerifyOptions::default()
    };
    assert_eq!(
        verify_map(&m, Some(&e), &opts).unwrap(),
        verify_map(&m, Some(&e), &opts).unwrap()
    );
}
