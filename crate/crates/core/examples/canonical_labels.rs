//! Canonical keys identify isomorphism classes.

use std::error::Error;

use contractible::{canonical_form, fixtures, Graph};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let heart = fixtures::heart();
    let reversed: Vec<usize> = (0..heart.n()).rev().collect();
    let shuffled = heart.permute(&reversed)?;

    let form = canonical_form(&heart);
    println!("heart key: {}", form.key.to_hex());
    println!("same key after relabelling: {}", shuffled.canonical_key() == form.key);
    println!("canonical labels: {:?}", form.labeling);

    println!("P4 ~ P4 relabelled: {}", Graph::path(4).is_isomorphic(&Graph::from_edges(4, &[(0, 2), (2, 3), (3, 1)])?));
    println!("P4 ~ K1,3: {}", Graph::path(4).is_isomorphic(&Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)])?));
    Ok(())
}

fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
