//! Decide contractibility, print a certificate and replay it.

use std::error::Error;

use contractible::{replay_certificate, Decider, Graph, MemoCache, MoveSet, Policy};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let cache = MemoCache::new();
    let decider = Decider::new(&cache, Policy::default());

    // a triangulated pentagon: C5 with the chords {0,2} and {0,3}
    let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 2), (0, 3)])?;
    let cert = decider.certificate(&g).ok_or("expected a contractible graph")?;
    println!("fan: contractible in {} steps", cert.len());
    print!("{}", cert.to_text(1));
    replay_certificate(&g, &cert, decider.policy())?;

    for (name, g) in [("C4", Graph::cycle(4)), ("C5", Graph::cycle(5)), ("K6", Graph::complete(6))] {
        println!("{name}: {}", decider.is_contractible(&g));
    }

    let vertex_only = Decider::new(&cache, Policy::new(MoveSet::I1, 0));
    println!("fan under {}: {}", vertex_only.policy(), vertex_only.is_contractible(&g));
    println!("cache holds {} verdicts", cache.len());
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
