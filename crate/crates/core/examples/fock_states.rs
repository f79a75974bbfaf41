// Fock states, their first-quantization images and collective spin moments.

use modesplit::states::{apply_ladder, collective_spin, make_fock, to_first_quantization, Ladder};

pub fn run_example() -> modesplit::Result<()> {
    let s = make_fock(2, 3)?;
    let ps = to_first_quantization(&s)?;
    println!("|2,1> in first quantization ({} particles):", ps.num_particles());
    for (idx, a) in ps.amplitudes().iter().enumerate() {
        if a.norm() > 0.0 {
            println!("  |{idx:03b}>  {:.6}", a.re);
        }
    }
    let back = ps.project_symmetric();
    assert!((back.inner(&s).norm() - 1.0).abs() < 1e-12);

    // a†_down a_up moves one particle into the down level.
    let hopped = apply_ladder(&apply_ladder(&s, Ladder::UpAnnihilation), Ladder::DownCreation);
    let re: Vec<f64> = hopped.amplitudes().iter().map(|a| a.re).collect();
    println!("a+_0 a_1 |2,1> = {re:.6?}");

    let spin = collective_spin(&s);
    println!("<J> = {:?}", spin.mean);
    Ok(())
}

#[allow(dead_code)]
fn main() -> modesplit::Result<()> {
    run_example()
}
