//! Writes a map document, reads it back, and shows what validation reports
//! for a broken one.

use smith_embedding::fixtures::path_map;
use smith_embedding::io::{map_doc, map_from_doc, read_map, write_map};

fn main() -> smith_embedding::Result<()> {
    let (map, emb) = path_map();
    let text = write_map(&map, Some(&emb));
    print!("{text}");
    let (back, back_emb) = read_map(&text)?;
    assert_eq!(write_map(&back, back_emb.as_ref()), text);

    let mut doc = map_doc(&map, Some(&emb));
    doc.edges[0].conductance = -1.0;
    doc.edges[1].tail = 9;
    doc.rotation.remove(&1);
    match map_from_doc(&doc) {
        Err(e) => println!("{e}"),
        Ok(_) => unreachable!("the document is broken"),
    }
    Ok(())
}
