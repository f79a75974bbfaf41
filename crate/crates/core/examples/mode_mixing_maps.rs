// Sector-level mixing maps: beamsplitters pass, perturbed maps are located.

use modesplit::mixing::mapfile::{parse_map, write_map};
use modesplit::mixing::{characterize, induced_map, is_mode_mixing, is_nontrivial, SectorPair};
use modesplit::splitting::SplitterParams;
use modesplit::Complex64;

pub fn run_example() -> modesplit::Result<()> {
    let p = SplitterParams::from_angles(0.4, 1.1);
    let map = induced_map(&p, 3);
    let coeffs = characterize(&map).expect("beamsplitter maps mix modes");
    for (pair, c) in coeffs.iter().take(4) {
        println!("C{pair} = {c:.6}");
    }
    println!("nontrivial: {}", is_nontrivial(&coeffs));

    let mut bad = parse_map(&write_map(&map))?;
    let pair = SectorPair::new((2, 1), (1, 2));
    bad.block_mut(&pair).expect("block present")[(0, 1)] += Complex64::new(0.01, 0.0);
    let check = is_mode_mixing(&bad);
    println!("perturbed map mixing: {}", check.is_mixing);
    if let Some(v) = check.violation {
        println!("  {v}");
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> modesplit::Result<()> {
    run_example()
}
