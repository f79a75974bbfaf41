// Splitting one mode over three output modes through a linear network column.

use modesplit::splitting::{multimode_split, NetworkColumn};
use modesplit::states::make_fock;
use modesplit::Complex64;

pub fn run_example() -> modesplit::Result<()> {
    let s = make_fock(1, 3)?;
    let col = NetworkColumn::new(vec![
        Complex64::new(0.6, 0.0),
        Complex64::new(0.0, 0.48),
        Complex64::new(-0.64, 0.0),
    ])?;
    let split = multimode_split(&s, &col);
    for (counts, sector) in split.sectors() {
        println!("{counts:?}  p = {:.6}", sector.probability());
    }
    println!("total probability {:.12}", split.total_probability());

    let uniform = multimode_split(&s, &NetworkColumn::uniform(3));
    let sector = uniform.sector(&[1, 1, 1]).expect("occupied");
    println!("uniform column, sector [1,1,1]: p = {:.6}", sector.probability());
    Ok(())
}

#[allow(dead_code)]
fn main() -> modesplit::Result<()> {
    run_example()
}
