//! Reading and writing graph6.

use std::error::Error;

use contractible::g6::read_graph6;
use contractible::{decode_graph6, encode_graph6, Graph};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("K1 -> {}", encode_graph6(&Graph::complete(1)));
    println!("K4 -> {}", encode_graph6(&Graph::complete(4)));
    println!("C4 -> {}", encode_graph6(&Graph::cycle(4)));

    let g = decode_graph6(b"Bw")?;
    println!("Bw has {} vertices and {} edges", g.n(), g.edge_count());

    let stream = ">>graph6<<C~\n\nCl\r\nE?~o\n";
    for g in read_graph6(stream.as_bytes())? {
        println!("{} vertices, connected: {}", g.n(), g.is_connected());
    }

    match decode_graph6(b"C~~") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => return Err("trailing bytes were accepted".into()),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
