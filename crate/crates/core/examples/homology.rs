//! Clique-complex homology over GF(2), the rationals and the integers.

use std::error::Error;

use contractible::fixtures;
use contractible::homology::{betti, full_clique_complex, integral_homology, smith_normal_form, Field};
use contractible::Graph;

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let pairs: Vec<(usize, usize)> = (0..6).flat_map(|u| (u + 1..6).map(move |v| (u, v))).filter(|&(u, v)| v != u + 3).collect();
    let octahedron = Graph::from_edges(6, &pairs)?;

    for (name, g) in [("octahedron", octahedron), ("C7", Graph::cycle(7)), ("heart", fixtures::heart())] {
        let c = full_clique_complex(&g);
        println!("{name}: f = {:?}", c.f_vector());
        println!("  GF2 {}  Q {}", betti(&g, Field::Gf2, true), betti(&g, Field::Rational, true));
        for (p, h) in integral_homology(&g)?.iter().enumerate() {
            println!("  H{p}(Z): rank {} torsion {:?}", h.rank, h.torsion);
        }
    }

    let d = smith_normal_form(&[vec![4, 0, 0], vec![0, 6, 0], vec![0, 0, 10]])?;
    println!("diag(4,6,10) invariant factors: {:?}", d.factors);
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
