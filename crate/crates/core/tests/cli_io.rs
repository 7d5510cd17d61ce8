use std::io::Write;
use std::path::Path;
use std::process::{Command, Stdio};

use smith_embedding::cli::run;
use smith_embedding::fixtures::{
    parallel_map, path_map, random_map, triangle_map, RandomMapOptions,
};
use smith_embedding::io::*;
use smith_embedding::map::{CombMap, CylinderEmbedding};
use smith_embedding::mated_crt::{build_map, sample_excursion};
use smith_embedding::tiling::tile;
use smith_embedding::Error;

fn fixture_maps() -> Vec<(String, CombMap, Option<CylinderEmbedding>)> {
    let mut out = Vec::new();
    let (m, e) = path_map();
    out.push(("path".into(), m, Some(e)));
    let (m, e) = parallel_map(&[1.0, 2.5, 0.3]);
    out.push(("parallel".into(), m, Some(e)));
    out.push(("triangle".into(), triangle_map([1.0, 2.0, 3.0]), None));
    for seed in 0..8 {
        let (m, e) = random_map(seed, &RandomMapOptions::default());
        out.push((format!("random {seed}"), m.clone(), None));
        out.push((format!("random {seed} embedded"), m, Some(e)));
    }
    let exc = sample_excursion(1.2, 24, 3, 1_000_000).unwrap();
    out.push(("mated-crt".into(), build_map(&exc).unwrap().map, None));
    out
}

fn smith(args: &[&str]) -> i32 {
    run(std::iter::once("smith").chain(args.iter().copied()))
}

fn schema_messages(e: Error) -> Vec<String> {
    match e {
        Error::Schema(s) => s.0,
        other => panic!("expected schema errors, got {other}"),
    }
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn maps_round_trip() {
    for (name, map, emb) in fixture_maps() {
        let text = write_map(&map, emb.as_ref());
        assert!(text.ends_with("}\n"));
        let (back, back_emb) = read_map(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(
            map_doc(&back, back_emb.as_ref()),
            map_doc(&map, emb.as_ref()),
            "{name}"
        );
        assert_eq!(back_emb, emb, "{name}");
        assert_eq!((back.v0(), back.v1()), (map.v0(), map.v1()));
        for h in 0..2 * map.num_edges() {
            assert_eq!(back.next(h), map.next(h), "{name} half-edge {h}");
        }
        assert_eq!(write_map(&back, back_emb.as_ref()), text, "{name}");
    }
}

#[test]
fn diagrams_and_increments_round_trip() {
    let (map, emb) = random_map(4, &RandomMapOptions::default());
    let t = tile(&map, Some(&emb)).unwrap();
    let back = read_diagram(&write_diagram(&map, &t.diagram)).unwrap();
    assert_eq!(back.eta, t.diagram.eta);
    assert_eq!(back.rects.len(), t.diagram.rects.len());
    for (a, b) in back.rects.iter().zip(&t.diagram.rects) {
        assert_eq!(a.edge as u64, map.edge_id(b.edge));
        assert_eq!([a.x0, a.x1, a.y0, a.y1], [b.x0, b.x1, b.y0, b.y1]);
    }
    let exc = sample_excursion(1.2, 16, 9, 1_000_000).unwrap();
    let loaded = read_increments(&write_increments(&exc)).unwrap();
    assert_eq!((loaded.l, loaded.r), (exc.l.clone(), exc.r.clone()));
}

#[test]
fn unknown_field_is_rejected_with_its_location() {
    let (map, _) = path_map();
    let text = write_map(&map, None).replacen(
        "\"conductance\": 1.0",
        "\"conductance\": 1.0, \"colour\": 3",
        1,
    );
    let msg = schema_messages(read_map(&text).unwrap_err()).join("\n");
    assert!(
        msg.contains("edges[0]") && msg.contains("unknown field `colour`"),
        "{msg}"
    );
    let at: usize = msg
        .rsplit("(byte ")
        .next()
        .unwrap()
        .trim_end_matches(')')
        .parse()
        .unwrap();
    let pos = text.find("\"colour\"").unwrap();
    assert!(at >= pos && at <= pos + "\"colour\"".len(), "{at} vs {pos}");
}

#[test]
fn malformed_json_reports_path_and_byte_offset() {
    let text = "{\"schema\": \"smith/1\", \"vertices\": [{\"id\": 0}, {\"id\": x}]}";
    let msg = schema_messages(read_map(text).unwrap_err()).join("\n");
    assert!(msg.starts_with("vertices[1].id"), "{msg}");
    assert!(
        msg.ends_with(&format!("(byte {})", text.find('x').unwrap())),
        "{msg}"
    );
    let msg = schema_messages(read_map("{} trailing").unwrap_err()).join("\n");
    assert!(msg.contains("missing field"), "{msg}");
}

#[test]
fn missing_marked_pair_is_rejected() {
    let (map, _) = path_map();
    let mut v: serde_json::Value = serde_json::from_str(&write_map(&map, None)).unwrap();
    v.as_object_mut().unwrap().remove("marked");
    let msg = schema_messages(read_map(&v.to_string()).unwrap_err()).join("\n");
    assert!(msg.contains("missing field `marked`"), "{msg}");
}

#[test]
fn semantic_errors_are_listed_together() {
    let (map, emb) = path_map();
    let mut doc = map_doc(&map, Some(&emb));
    doc.schema = "smith/0".into();
    doc.vertices[2].id = 1;
    doc.edges[0].conductance = 0.0;
    doc.edges[1].head = 9;
    doc.marked.v1 = doc.marked.v0;
    doc.vertices[1].theta = Some(7.0);
    doc.rotation.get_mut(&1).unwrap().push(0);
    let msgs = schema_messages(map_from_doc(&doc).unwrap_err());
    for want in [
        "schema: expected",
        "vertices[2].id: duplicate",
        "edges[0].conductance",
        "edges[1].head: unknown vertex 9",
        "marked: v0 and v1",
        "half-edge 0 leaves vertex 0",
        "half-edge 0 listed twice",
        "theta: 7 is not in",
    ] {
        assert!(
            msgs.iter().any(|m| m.contains(want)),
            "missing {want:?} in {msgs:#?}"
        );
    }

    let mut doc = map_doc(&map, Some(&emb));
    doc.rotation.get_mut(&1).unwrap().pop();
    let msgs = schema_messages(map_from_doc(&doc).unwrap_err());
    assert!(
        msgs.iter()
            .any(|m| m.contains("half-edge 2 of edges[1] is missing")),
        "{msgs:#?}"
    );

    let (map, emb) = random_map(2, &RandomMapOptions::default());
    let mut doc = map_doc(&map, Some(&emb));
    let k = (0..doc.vertices.len())
        .find(|&i| doc.vertices[i].theta.is_some())
        .unwrap();
    doc.vertices[k].height = None;
    let msgs = schema_messages(map_from_doc(&doc).unwrap_err());
    assert!(
        msgs.iter()
            .any(|m| m.contains("needs both theta and height")),
        "{msgs:#?}"
    );
}

#[test]
fn path_map_tiles_into_two_rectangles() {
    let dir = tempfile::tempdir().unwrap();
    let (map, emb) = path_map();
    let input = dir.path().join("path.json");
    std::fs::write(&input, write_map(&map, Some(&emb))).unwrap();
    let out = dir.path().join("d.json");
    assert_eq!(smith(&["tile", path_str(&input), "-o", path_str(&out)]), 0);
    let d: DiagramDoc = parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(d.kind, "diagram");
    assert_eq!(d.rects.len(), 2);
    assert!((d.eta - 0.5).abs() < 1e-12);

    // A solution document tiles the same way.
    let sol = dir.path().join("s.json");
    let out2 = dir.path().join("d2.json");
    assert_eq!(smith(&["solve", path_str(&input), "-o", path_str(&sol)]), 0);
    let s: SolutionDoc = parse(&std::fs::read_to_string(&sol).unwrap()).unwrap();
    assert!((s.h[&1] - 0.5).abs() < 1e-12 && s.residual < 1e-10);
    assert_eq!(smith(&["tile", path_str(&sol), "-o", path_str(&out2)]), 0);
    assert_eq!(std::fs::read(&out).unwrap(), std::fs::read(&out2).unwrap());
}

#[test]
fn verify_passes_on_three_parallel_edges() {
    let dir = tempfile::tempdir().unwrap();
    let (map, emb) = parallel_map(&[1.0, 1.0, 1.0]);
    let input = dir.path().join("p.json");
    std::fs::write(&input, write_map(&map, Some(&emb))).unwrap();
    let out = dir.path().join("r.json");
    assert_eq!(
        smith(&["verify", path_str(&input), "-o", path_str(&out)]),
        0
    );
    let rep = read_report(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(rep.pass);
    assert!(rep.laws.len() >= 12);
    assert!(rep.law("tiling_coverage").unwrap().max_deviation.unwrap() <= 1e-9);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = |s: &str| dir.path().join(s);
    for f in ["m1.json", "m2.json"] {
        assert_eq!(
            smith(&[
                "mated-crt",
                "--n",
                "32",
                "--gamma",
                "1.2",
                "--seed",
                "11",
                "-o",
                path_str(&p(f))
            ]),
            0
        );
    }
    for f in ["v1.json", "v2.json"] {
        assert_eq!(
            smith(&[
                "verify",
                path_str(&p("m1.json")),
                "--seed",
                "3",
                "-o",
                path_str(&p(f))
            ]),
            0
        );
    }
    for f in ["c1.csv", "c2.csv"] {
        assert_eq!(
            smith(&[
                "converge",
                "--n-list",
                "12,8",
                "--walks",
                "50",
                "-o",
                path_str(&p(f))
            ]),
            0
        );
    }
    for (a, b) in [
        ("m1.json", "m2.json"),
        ("v1.json", "v2.json"),
        ("c1.csv", "c2.csv"),
    ] {
        assert_eq!(
            std::fs::read(p(a)).unwrap(),
            std::fs::read(p(b)).unwrap(),
            "{a}"
        );
    }
    let csv = std::fs::read_to_string(p("c1.csv")).unwrap();
    assert!(csv.lines().nth(1).unwrap().starts_with("8,"));
}

#[test]
fn loaded_increments_are_bridged_with_the_seed() {
    let dir = tempfile::tempdir().unwrap();
    let exc = sample_excursion(1.2, 20, 5, 1_000_000).unwrap();
    let inc = dir.path().join("inc.json");
    std::fs::write(&inc, write_increments(&exc)).unwrap();
    let out = |s: &str| dir.path().join(s);
    for (f, seed) in [("a.json", "1"), ("b.json", "1"), ("c.json", "2")] {
        let target = out(f);
        let args = [
            "mated-crt",
            "--increments",
            path_str(&inc),
            "--seed",
            seed,
            "-o",
            path_str(&target),
        ];
        assert_eq!(smith(&args), 0);
        read_map(&std::fs::read_to_string(out(f)).unwrap()).unwrap();
    }
    assert_eq!(
        std::fs::read(out("a.json")).unwrap(),
        std::fs::read(out("b.json")).unwrap()
    );
}

fn pipe(args: &[&str], input: &[u8]) -> (i32, Vec<u8>) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_smith"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), out.stdout)
}

#[test]
fn mated_crt_pipeline_draws_squares() {
    let (c, map) = pipe(
        &["mated-crt", "--n", "64", "--gamma", "1.2", "--seed", "2"],
        b"",
    );
    assert_eq!(c, 0);
    let (c, sol) = pipe(&["solve"], &map);
    assert_eq!(c, 0);
    let (c, diagram) = pipe(&["tile", "-"], &sol);
    assert_eq!(c, 0);
    let d: DiagramDoc = parse(std::str::from_utf8(&diagram).unwrap()).unwrap();
    let mut squares = 0;
    for r in d.rects.iter().filter(|r| !r.degenerate) {
        let (w, h) = (r.x1 - r.x0, r.y1 - r.y0);
        assert!(
            (w - h).abs() <= 1e-9 * h.max(1e-300) || (w / h - 1.0).abs() <= 1e-9,
            "{r:?}"
        );
        squares += 1;
    }
    assert!(squares > 64);
    let (c, svg) = pipe(&["render", "--color-by", "size"], &diagram);
    assert_eq!(c, 0);
    let svg = String::from_utf8(svg).unwrap();
    assert!(svg.starts_with("<svg") && svg.matches("<rect").count() > squares);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(smith(&["tile", "--no-such-flag"]), 2);
    assert_eq!(smith(&["frobnicate"]), 2);
    assert_eq!(
        smith(&["tile", path_str(&dir.path().join("missing.json"))]),
        2
    );
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"schema\": \"smith/1\"}").unwrap();
    assert_eq!(smith(&["tile", path_str(&bad)]), 1);
    assert_eq!(smith(&["verify", path_str(&bad), "--tol-exact", "0"]), 2);
    assert_eq!(
        smith(&[
            "mated-crt",
            "--gamma",
            "2.5",
            "--seed",
            "0",
            "-o",
            path_str(&bad)
        ]),
        1
    );
    assert_eq!(smith(&["converge", "--n-list", "2"]), 2);

    let (c, _) = pipe(&["tile"], b"[1, 2");
    assert_eq!(c, 1);
    let out = Command::new(env!("CARGO_BIN_EXE_smith"))
        .args(["converge", "--n-list", "4"])
        .env("SMITH_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_smith"))
        .args(["converge", "--n-list", "8"])
        .env("SMITH_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn every_subcommand_documents_the_schema() {
    for sub in ["solve", "tile", "render", "verify", "mated-crt", "converge"] {
        let out = Command::new(env!("CARGO_BIN_EXE_smith"))
            .args([sub, "--help"])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{sub}");
        let text = String::from_utf8(out.stdout).unwrap();
        assert!(text.contains("smith/1"), "{sub}: {text}");
    }
}
