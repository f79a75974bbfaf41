// Particle-basis maps: mode-blind tensor powers pass, spin-sensitive ones fail.

use modesplit::mixing::{check_theorem1a, ParticleMap};
use modesplit::splitting::SplitterParams;
use modesplit::Complex64;

pub fn run_example() -> modesplit::Result<()> {
    let u = SplitterParams::balanced().mode_matrix();
    let map = ParticleMap::tensor_power(&u, 3);
    let report = check_theorem1a(&map, 1e-10)?;
    println!("U^(x3): commutes {}, passed {}", report.commutes, report.passed());
    if let Some(coeffs) = &report.coefficients {
        println!("{} sector coefficients recovered", coeffs.len());
    }

    let tilted = map.plus_scaled(&ParticleMap::sigma(0, true, 3), Complex64::new(0.1, 0.0));
    let report = check_theorem1a(&tilted, 1e-10)?;
    println!("U^(x3) + 0.1 σ+_0: commutes {}", report.commutes);
    if let Some(v) = report.commutator_violation {
        println!("  particle {} entry ({}, {}) = {:.3e}", v.particle, v.row, v.col, v.magnitude);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> modesplit::Result<()> {
    run_example()
}
