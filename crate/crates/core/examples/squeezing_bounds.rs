// Tangle, monogamy and squeezing bounds along a one-axis-twisting sweep.

use modesplit::entanglement::{concurrence, monogamy_bound, one_axis_twist};
use modesplit::states::{make_fock, two_particle_rdm};

pub fn run_example() -> modesplit::Result<()> {
    let w = two_particle_rdm(&make_fock(2, 3)?)?;
    println!("pair concurrence of |2,1>: {:.9}", concurrence(&w)?);

    let total = 8;
    println!("theta   xi2      tangle   squeezing bound");
    for k in 0..5 {
        let theta = 0.05 + 0.1 * k as f64;
        let b = monogamy_bound(&one_axis_twist(total, theta), total / 2, total / 2)?;
        println!(
            "{theta:.2}    {:.5}  {:.5}  {}",
            b.xi_squared.unwrap_or(f64::NAN),
            b.tangle_value,
            b.squeezing_bound.map_or("-".into(), |x| format!("{x:.5}"))
        );
        assert!(b.monogamy_satisfied);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> modesplit::Result<()> {
    run_example()
}
