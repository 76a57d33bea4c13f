//! Applying the four transformations and watching homology stay put.

use std::error::Error;

use contractible::homology::same_homology;
use contractible::{encode_graph6, Decider, Graph, MemoCache, Move, Policy, VertexSet};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cache = MemoCache::new();
    let d = Decider::new(&cache, Policy::default());
    let mut g = Graph::cycle(5);

    let script = [
        Move::GlueVertex([0, 1].into_iter().collect::<VertexSet>()),
        Move::GlueEdge(5, 2),
        Move::DeleteEdge(1, 2),
        Move::parse("delete-vertex 2", 1)?,
    ];
    for m in &script {
        let next = d.apply_move(&g, m)?;
        println!("{:<16} -> {}  homology unchanged: {}", m.to_text(1), encode_graph6(&next), same_homology(&g, &next));
        g = next;
    }

    match d.apply_move(&Graph::cycle(4), &Move::DeleteVertex(0)) {
        Err(e) => println!("C4, delete-vertex 1: {e}"),
        Ok(_) => return Err("illegal move accepted".into()),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
