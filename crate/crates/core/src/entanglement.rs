//! Entanglement measures and the bounds relating them to spin squeezing.
//!
//! `ξ²` is the Kitagawa–Ueda parameter `4 min(ΔJ_⊥)² / N`, with the minimum
//! over directions orthogonal to the mean spin. The tangle across a mode split
//! is evaluated on pure states only, as `2(1 - Tr ρ_C²)`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::numeric::binomial;
use crate::splitting::{ideal_mode_split, FockState, SchmidtDecomposition};
use crate::states::{collective_spin, two_particle_rdm, DensityMatrix, TwoModeState};
use crate::{Error, Result, EPS_NORM};

/// `-Σ λ² log₂ λ²` over a list of Schmidt coefficients.
pub fn entropy_of_coefficients(coefficients: &[f64]) -> f64 {
    coefficients
        .iter()
        .map(|l| l * l)
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Entanglement entropy in bits.
pub fn schmidt_entropy(sd: &SchmidtDecomposition) -> f64 {
    entropy_of_coefficients(sd.coefficients())
}

fn psd_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let eig = SymmetricEigen::new(m.clone());
    // Rounding noise in null eigenvalues would otherwise surface as ~1e-8 roots.
    let roots = eig.eigenvalues.map(|l| {
        let l = if l < NULL_EIGENVALUE { 0.0 } else { l };
        Complex64::new(l.sqrt(), 0.0)
    });
    &eig.eigenvectors * DMatrix::from_diagonal(&roots) * eig.eigenvectors.adjoint()
}

const NULL_EIGENVALUE: f64 = 1e-14;

/// Wootters concurrence of a two-qubit state.
///
/// The `μ_i` are taken as singular values of `√ρ √ρ̃` rather than roots of
/// the eigenvalues of `√ρ ρ̃ √ρ`, which keeps small `μ_i` accurate.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::domain(format!(
            "concurrence needs a 4x4 density matrix, got {0}x{0}",
            rho.dim()
        )));
    }
    // σ_y ⊗ σ_y is real: antidiagonal (-1, 1, 1, -1).
    let mut yy = DMatrix::<Complex64>::zeros(4, 4);
    for (i, s) in [-1.0, 1.0, 1.0, -1.0].into_iter().enumerate() {
        yy[(i, 3 - i)] = Complex64::new(s, 0.0);
    }
    let root = psd_sqrt(rho.matrix());
    let flipped_root = &yy * root.conjugate() * &yy;
    let prod = &root * flipped_root;
    let a = faer::Mat::<Complex64>::from_fn(4, 4, |i, j| prod[(i, j)]);
    let svd = a
        .thin_svd()
        .map_err(|e| Error::domain(format!("SVD did not converge: {e:?}")))?;
    let mut mu: Vec<f64> = (0..4).map(|k| svd.S()[k].re).collect();
    mu.sort_by(|a, b| b.total_cmp(a));
    Ok((mu[0] - mu[1] - mu[2] - mu[3]).clamp(0.0, 1.0))
}

/// `2(1 - Tr ρ_C²)` of a normalized pure two-mode state.
pub fn tangle_pure(state: &FockState) -> Result<f64> {
    let norm = state.norm();
    if (norm - 1.0).abs() > EPS_NORM {
        return Err(Error::domain(format!("tangle needs a normalized state, norm = {norm}")));
    }
    Ok((2.0 * (1.0 - state.first_mode_purity()?)).max(0.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct SqueezingReport {
    pub xi_squared: f64,
    pub mean_spin_direction: [f64; 3],
    pub mean_spin_length: f64,
    pub min_orthogonal_variance: f64,
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter().zip(&b).map(|(x, y)| x * y).sum()
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn unit(a: [f64; 3]) -> [f64; 3] {
    let n = dot(a, a).sqrt();
    [a[0] / n, a[1] / n, a[2] / n]
}

pub fn squeezing(s: &TwoModeState) -> Result<SqueezingReport> {
    let spin = collective_spin(s);
    let length = dot(spin.mean, spin.mean).sqrt();
    if length <= EPS_NORM {
        return Err(Error::domain("mean spin vanishes; squeezing direction undefined"));
    }
    let n = unit(spin.mean);
    // Seed with the axis least aligned with n.
    let axis = (0..3)
        .min_by(|&a, &b| n[a].abs().total_cmp(&n[b].abs()))
        .unwrap();
    let mut seed = [0.0; 3];
    seed[axis] = 1.0;
    let e1 = unit(cross(n, seed));
    let e2 = cross(n, e1);
    let cov = spin.covariance();
    let quad = |u: [f64; 3], v: [f64; 3]| {
        let mut acc = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                acc += u[a] * cov[a][b] * v[b];
            }
        }
        acc
    };
    let (a, b, d) = (quad(e1, e1), quad(e1, e2), quad(e2, e2));
    let min_var = ((a + d) / 2.0 - (((a - d) / 2.0).powi(2) + b * b).sqrt()).max(0.0);
    Ok(SqueezingReport {
        xi_squared: 4.0 * min_var / s.total_particles() as f64,
        mean_spin_direction: n,
        mean_spin_length: length,
        min_orthogonal_variance: min_var,
    })
}

fn check_split(total: usize, n_c: usize, n_d: usize) -> Result<()> {
    if total < 2 {
        return Err(Error::domain("bounds need N >= 2"));
    }
    if n_c + n_d != total {
        return Err(Error::domain(format!("split ({n_c},{n_d}) does not sum to N = {total}")));
    }
    Ok(())
}

/// `max{N_C, N_D} [(1 - ξ²)/(N - 1)]²`, zero when `ξ² >= 1`.
pub fn squeezing_tangle_bound(xi_squared: f64, total: usize, n_c: usize, n_d: usize) -> Result<f64> {
    check_split(total, n_c, n_d)?;
    if xi_squared >= 1.0 {
        return Ok(0.0);
    }
    let c = (1.0 - xi_squared) / (total - 1) as f64;
    Ok(n_c.max(n_d) as f64 * c * c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub split: (usize, usize),
    /// Tangle of the ideal mode split across `C:D`.
    pub tangle_value: f64,
    /// Concurrence of the two-particle reduced state.
    pub concurrence: f64,
    /// `max{N_C, N_D} C(ρ_pq)²`.
    pub monogamy_bound: f64,
    pub monogamy_satisfied: bool,
    /// `None` when the mean spin vanishes.
    pub xi_squared: Option<f64>,
    /// `max(0, (1 - ξ²)/(N - 1))`, the concurrence the squeezing relation predicts.
    pub concurrence_from_squeezing: Option<f64>,
    pub squeezing_bound: Option<f64>,
    pub squeezing_satisfied: Option<bool>,
}

/// Evaluates both sides of the monogamy chain, and the squeezing bound when
/// `ξ²` is defined.
pub fn monogamy_bound(s: &TwoModeState, n_c: usize, n_d: usize) -> Result<BoundReport> {
    let total = s.total_particles();
    check_split(total, n_c, n_d)?;
    let tangle_value = tangle_pure(&ideal_mode_split(s, n_c, n_d)?)?;
    let c = concurrence(&two_particle_rdm(s)?)?;
    let monogamy_bound = n_c.max(n_d) as f64 * c * c;
    let xi_squared = squeezing(s).ok().map(|r| r.xi_squared);
    let squeezing_bound = xi_squared
        .map(|x| squeezing_tangle_bound(x, total, n_c, n_d))
        .transpose()?;
    Ok(BoundReport {
        split: (n_c, n_d),
        tangle_value,
        concurrence: c,
        monogamy_bound,
        monogamy_satisfied: tangle_value >= monogamy_bound - EPS_NORM,
        xi_squared,
        concurrence_from_squeezing: xi_squared.map(|x| ((1.0 - x) / (total - 1) as f64).max(0.0)),
        squeezing_bound,
        squeezing_satisfied: squeezing_bound.map(|b| tangle_value >= b - EPS_NORM),
    })
}

/// Coherent spin state along `+x`, twisted by `exp(-iθ J_z²)`.
pub fn one_axis_twist(total: usize, theta: f64) -> TwoModeState {
    let half = total as f64 / 2.0;
    let scale = 0.5f64.powi(total as i32);
    let amplitudes = (0..=total)
        .map(|n| {
            let m = n as f64 - half;
            Complex64::from_polar((binomial(total, n) * scale).sqrt(), -theta * m * m)
        })
        .collect();
    TwoModeState::from_raw(amplitudes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::make_fock;

    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy_of_coefficients(&[1.0]), 0.0);
        assert!((entropy_of_coefficients(&[H, H]) - 1.0).abs() < 1e-15);
        let e = entropy_of_coefficients(&[(1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()]);
        assert!((e - (3.0f64.log2() - 2.0 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn concurrence_examples() {
        let product = DensityMatrix::from_pure(&[c(1.0), c(0.0), c(0.0), c(0.0)]).unwrap();
        assert!(concurrence(&product).unwrap() < 1e-12);
        let bell = DensityMatrix::from_pure(&[c(H), c(0.0), c(0.0), c(H)]).unwrap();
        assert!((concurrence(&bell).unwrap() - 1.0).abs() < 1e-12);
        let w = two_particle_rdm(&make_fock(2, 3).unwrap()).unwrap();
        assert!((concurrence(&w).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        let qubit = DensityMatrix::from_pure(&[c(1.0), c(0.0)]).unwrap();
        assert!(concurrence(&qubit).is_err());
    }

    #[test]
    fn tangle_examples() {
        let bell = ideal_mode_split(&make_fock(1, 2).unwrap(), 1, 1).unwrap();
        assert!((tangle_pure(&bell).unwrap() - 1.0).abs() < 1e-14);
        let w = ideal_mode_split(&make_fock(2, 3).unwrap(), 2, 1).unwrap();
        assert!((tangle_pure(&w).unwrap() - 8.0 / 9.0).abs() < 1e-14);
        let product = ideal_mode_split(&make_fock(3, 3).unwrap(), 2, 1).unwrap();
        assert!(tangle_pure(&product).unwrap() < 1e-14);
        assert!(tangle_pure(&w.scaled(c(2.0))).is_err());
    }

    #[test]
    fn bound_examples() {
        assert_eq!(squeezing_tangle_bound(1.0, 3, 2, 1).unwrap(), 0.0);
        assert!((squeezing_tangle_bound(0.0, 3, 2, 1).unwrap() - 0.5).abs() < 1e-15);
        assert!((squeezing_tangle_bound(0.5, 5, 3, 2).unwrap() - 3.0 / 64.0).abs() < 1e-15);
        assert!(squeezing_tangle_bound(0.5, 1, 1, 0).is_err());

        let r = monogamy_bound(&make_fock(1, 2).unwrap(), 1, 1).unwrap();
        assert!((r.monogamy_bound - 1.0).abs() < 1e-12 && r.monogamy_satisfied);
        let r = monogamy_bound(&make_fock(2, 3).unwrap(), 2, 1).unwrap();
        assert!((r.monogamy_bound - 8.0 / 9.0).abs() < 1e-12 && r.monogamy_satisfied);
        let r = monogamy_bound(&make_fock(4, 4).unwrap(), 2, 2).unwrap();
        assert!(r.tangle_value < 1e-14 && r.monogamy_bound < 1e-14);
        assert!(monogamy_bound(&make_fock(1, 1).unwrap(), 1, 0).is_err());
    }

    #[test]
    fn squeezing_examples() {
        let r = squeezing(&make_fock(5, 5).unwrap()).unwrap();
        assert!((r.xi_squared - 1.0).abs() < 1e-12);
        assert!((r.mean_spin_direction[2] + 1.0).abs() < 1e-12);
        let coherent = one_axis_twist(10, 0.0);
        assert!((squeezing(&coherent).unwrap().xi_squared - 1.0).abs() < 1e-12);
        assert!(squeezing(&one_axis_twist(10, 0.1)).unwrap().xi_squared < 1.0);
        assert!(squeezing(&make_fock(1, 2).unwrap()).is_err());
    }

    #[test]
    fn twist_amplitudes() {
        let s = one_axis_twist(2, 0.0);
        let expected = [0.5, H, 0.5];
        for (z, e) in s.amplitudes().iter().zip(expected) {
            assert!((z - c(e)).norm() < 1e-15);
        }
        assert!((one_axis_twist(9, 0.37).norm() - 1.0).abs() < 1e-14);
    }
}
