// Repeat-until-success extraction of mode entanglement from `|2,1>`.

use modesplit::protocol::{min_two_step_bound, run_ensemble, run_once, ProtocolConfig};
use modesplit::splitting::SplitterParams;
use modesplit::states::make_fock;

pub fn run_example() -> modesplit::Result<()> {
    let s = make_fock(2, 3)?;
    let p = SplitterParams::balanced();
    let cfg = ProtocolConfig::new((2, 1), p, 7);

    let one = run_once(&s, &cfg)?;
    println!("trajectory {:?}, fidelity {:.12}", one.trajectory, one.fidelity_with_target);

    let stats = run_ensemble(&s, &cfg, 100_000)?;
    println!(
        "first-round acceptance {:.4}, mean rounds {:.3}, failures {}",
        stats.acceptance_rate[1],
        stats.mean_iterations,
        stats.failure_fraction
    );
    println!("two-step success bound {:.6}", min_two_step_bound(3, (2, 1), &p)?);
    Ok(())
}

#[allow(dead_code)]
fn main() -> modesplit::Result<()> {
    run_example()
}
