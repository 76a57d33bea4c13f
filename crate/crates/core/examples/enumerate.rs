//! Connected graphs up to isomorphism.

use std::error::Error;

use contractible::enumerate::{connected_levels, enumerate_connected};
use contractible::encode_graph6;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let counts: Vec<usize> = connected_levels(7)?.iter().map(Vec::len).collect();
    println!("connected graphs on 1..=7 vertices: {counts:?}");

    for g in enumerate_connected(4)? {
        println!("{} ({} edges)", encode_graph6(&g), g.edge_count());
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
