// Splitting `|2,1>` on a beamsplitter and reading off each output sector.

use modesplit::splitting::{beamsplit, project_sector, SplitterParams};
use modesplit::states::make_fock;

pub fn run_example() -> modesplit::Result<()> {
    let s = make_fock(2, 3)?;
    let p = SplitterParams::from_angles(0.6, 0.3);
    let split = beamsplit(&s, &p);
    for (key, sector) in split.sectors() {
        let sd = sector.state.schmidt()?;
        println!(
            "sector {:?}: p = {:.6}, schmidt = {:.6?}",
            key,
            sector.probability(),
            sd.coefficients()
        );
    }
    println!("total probability {:.12}", split.total_probability());

    let outcome = project_sector(&split, &[2, 1])?;
    if let Some(state) = outcome.state {
        for (downs, a) in state.basis().iter().zip(state.amplitudes()) {
            if a.norm() > 0.0 {
                println!("  downs {downs:?}: {a:.6}");
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> modesplit::Result<()> {
    run_example()
}
