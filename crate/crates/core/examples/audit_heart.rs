//! The heart graph: contractible, yet vertex 1 has no nonadjacent partner
//! with a contractible common neighbourhood.

use std::error::Error;

use contractible::audit::{audit_axiom, audit_min_contractible_vertices, violations_certified};
use contractible::fixtures;
use contractible::{Decider, MemoCache, Policy};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let g = fixtures::heart();
    let cache = MemoCache::new();
    let d = Decider::new(&cache, Policy::default());

    let report = audit_axiom(&d, &g);
    println!("contractible: {}", report.contractible);
    let shown = report.relabeled(1);
    for r in shown.vertices.iter().filter(|r| r.violated) {
        println!("vertex {} violated; nonadjacent to {:?}", r.vertex, r.nonadjacent);
    }
    println!("counterexample: {}", report.is_counterexample);
    println!("violations backed by homology: {}", violations_certified(&g, &report));

    let cv = audit_min_contractible_vertices(&d, &g);
    println!("contractible vertices: {} (two-vertex claim holds: {})", cv.count, cv.claim_holds);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
