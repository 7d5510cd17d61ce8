//! Runs every exact law on a few maps and prints the report.

use smith_embedding::fixtures::{parallel_map, random_map, RandomMapOptions};
use smith_embedding::verify::{verify_map, VerifyOptions};

fn main() -> smith_embedding::Result<()> {
    let (p, pe) = parallel_map(&[1.0, 1.0, 1.0]);
    let (r, re) = random_map(
        2,
        &RandomMapOptions {
            allow_loops: false,
            generic: true,
            ..Default::default()
        },
    );
    for (name, map, emb) in [
        ("three parallel edges", &p, &pe),
        ("generic random map", &r, &re),
    ] {
        let rep = verify_map(map, Some(emb), &VerifyOptions::default())?;
        println!("{name}: {}", if rep.pass { "pass" } else { "FAIL" });
        for l in &rep.laws {
            let dev = l
                .max_deviation
                .map_or("-".to_string(), |d| format!("{d:.1e}"));
            println!(
                "  {:18} {:8} {dev:>8} (tol {:e})",
                l.name,
                format!("{:?}", l.status).to_lowercase(),
                l.tolerance
            );
        }
    }
    Ok(())
}
