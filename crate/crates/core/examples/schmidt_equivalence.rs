// Mode entanglement after an ideal split equals particle entanglement.

use modesplit::entanglement::schmidt_entropy;
use modesplit::splitting::{ideal_mode_split, mode_schmidt_coeffs, particle_schmidt};
use modesplit::states::{to_first_quantization, TwoModeState};
use modesplit::Complex64;

pub fn run_example() -> modesplit::Result<()> {
    let (n, total, n_x) = (3, 7, 3);
    let closed = mode_schmidt_coeffs(n, total, n_x, total - n_x)?;
    println!("closed form |{n},{}> at N_X = {n_x}: {:.9?}", total - n, closed.coefficients());

    let s = TwoModeState::normalized(
        [0.2, -0.1, 0.5, 0.3, 0.4, -0.6, 0.2, 0.1]
            .iter()
            .enumerate()
            .map(|(n, &x)| Complex64::from_polar(x, 0.3 * n as f64))
            .collect(),
    )?;
    let mode = ideal_mode_split(&s, n_x, total - n_x)?.schmidt()?;
    let particle = particle_schmidt(&to_first_quantization(&s)?, n_x)?;
    println!("mode picture:     {:.9?}", mode.coefficients());
    println!("particle picture: {:.9?}", particle.coefficients());
    println!(
        "entropy {:.9} bits, max deviation {:.2e}",
        schmidt_entropy(&mode),
        mode.spectrum_deviation(&particle)
    );
    Ok(())
}

#[allow(dead_code)]
fn main() -> modesplit::Result<()> {
    run_example()
}
