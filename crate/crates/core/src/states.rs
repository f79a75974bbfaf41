//! Symmetric states of `N` two-level bosons in a single spatial mode.
//!
//! Second quantization uses the Fock basis `|n, N-n>` (`n` spin-down and
//! `N-n` spin-up particles). First quantization uses the `2^N` pseudo-labelled
//! product basis with bit `0` = spin-down, bit `1` = spin-up and particle 0 as
//! the most significant bit.
//!
//! Spin convention: spin-down is the `-1` eigenstate of `σ_z`, so
//! `<J_z>` on `|N, 0>` is `-N/2`.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::numeric::{self, binomial};
use crate::{Error, Result, DEFAULT_MAX_FIRST_QUANTIZATION, EPS_NORM};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Amplitudes `φ_n` over `|n, N-n>`, `n = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeState {
    amplitudes: Vec<Complex64>,
}

impl TwoModeState {
    /// Validates unit norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::domain("amplitude vector must have length N+1 >= 1"));
        }
        let norm = numeric::norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > EPS_NORM {
            return Err(Error::domain(format!(
                "state not normalized: sum |phi_n|^2 = {norm}"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Rescales to unit norm. Fails on the zero vector.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm = numeric::norm_sqr(&amplitudes).sqrt();
        if amplitudes.is_empty() || norm == 0.0 || !norm.is_finite() {
            return Err(Error::domain("cannot normalize a zero or empty amplitude vector"));
        }
        Ok(Self {
            amplitudes: amplitudes.into_iter().map(|z| z / norm).collect(),
        })
    }

    /// No normalization check; used for ladder outputs.
    pub fn from_raw(amplitudes: Vec<Complex64>) -> Self {
        assert!(!amplitudes.is_empty(), "amplitude vector must be non-empty");
        Self { amplitudes }
    }

    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn total_particles(&self) -> usize {
        self.amplitudes.len() - 1
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, n: usize) -> Complex64 {
        self.amplitudes.get(n).copied().unwrap_or(ZERO)
    }

    pub fn norm(&self) -> f64 {
        numeric::norm_sqr(&self.amplitudes).sqrt()
    }

    pub fn inner(&self, other: &TwoModeState) -> Complex64 {
        numeric::inner(&self.amplitudes, &other.amplitudes)
    }

    /// True when the state is a single Fock basis vector up to phase.
    pub fn as_fock(&self) -> Option<usize> {
        let mut found = None;
        for (n, z) in self.amplitudes.iter().enumerate() {
            if z.norm() > EPS_NORM {
                if found.is_some() {
                    return None;
                }
                found = Some(n);
            }
        }
        found
    }
}

/// `|n, N-n>`.
pub fn make_fock(n: usize, total: usize) -> Result<TwoModeState> {
    if n > total {
        return Err(Error::domain(format!(
            "spin-down count {n} exceeds particle number {total}"
        )));
    }
    let mut amplitudes = vec![ZERO; total + 1];
    amplitudes[n] = ONE;
    Ok(TwoModeState { amplitudes })
}

/// Amplitudes over the `2^N` pseudo-labelled product basis.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleState {
    num_particles: usize,
    amplitudes: Vec<Complex64>,
}

impl ParticleState {
    pub fn new(num_particles: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != 1usize << num_particles {
            return Err(Error::domain(format!(
                "expected 2^{num_particles} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        let norm = numeric::norm_sqr(&amplitudes);
        if (norm - 1.0).abs() > EPS_NORM {
            return Err(Error::domain(format!("particle state not normalized: {norm}")));
        }
        Ok(Self {
            num_particles,
            amplitudes,
        })
    }

    pub fn num_particles(&self) -> usize {
        self.num_particles
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Internal state (0 = down, 1 = up) of particle `p` in basis index `index`.
    pub fn bit(&self, index: usize, p: usize) -> u8 {
        ((index >> (self.num_particles - 1 - p)) & 1) as u8
    }

    /// Relabel particles: particle `p` of the result carries what particle
    /// `perm[p]` carried here.
    pub fn permuted(&self, perm: &[usize]) -> ParticleState {
        let n = self.num_particles;
        assert_eq!(perm.len(), n, "permutation length must equal N");
        let mut out = vec![ZERO; self.amplitudes.len()];
        for (index, &amp) in self.amplitudes.iter().enumerate() {
            let mut target = 0usize;
            for (p, &q) in perm.iter().enumerate() {
                let b = (index >> (n - 1 - q)) & 1;
                target |= b << (n - 1 - p);
            }
            out[target] = amp;
        }
        ParticleState {
            num_particles: n,
            amplitudes: out,
        }
    }

    /// Coordinates in the symmetric basis: `φ_n = <n, N-n|ψ>`. Exact inverse of
    /// [`to_first_quantization`] on symmetric inputs.
    pub fn project_symmetric(&self) -> TwoModeState {
        let n = self.num_particles;
        let mut phi = vec![ZERO; n + 1];
        for (index, &amp) in self.amplitudes.iter().enumerate() {
            let zeros = n - index.count_ones() as usize;
            phi[zeros] += amp;
        }
        for (k, z) in phi.iter_mut().enumerate() {
            *z /= binomial(n, k).sqrt();
        }
        TwoModeState::from_raw(phi)
    }

    /// Reduced density matrix of the particles in `keep` (ascending basis
    /// order by position in `keep`), tracing out everything else by brute force.
    pub fn reduced_density(&self, keep: &[usize]) -> DensityMatrix {
        let n = self.num_particles;
        let k = keep.len();
        let traced: Vec<usize> = (0..n).filter(|p| !keep.contains(p)).collect();
        let dim = 1usize << k;
        let mut rho = DMatrix::<Complex64>::zeros(dim, dim);
        let compose = |kept_bits: usize, env_bits: usize| -> usize {
            let mut index = 0usize;
            for (j, &p) in keep.iter().enumerate() {
                let b = (kept_bits >> (k - 1 - j)) & 1;
                index |= b << (n - 1 - p);
            }
            for (j, &p) in traced.iter().enumerate() {
                let b = (env_bits >> (traced.len() - 1 - j)) & 1;
                index |= b << (n - 1 - p);
            }
            index
        };
        for env in 0..(1usize << traced.len()) {
            for a in 0..dim {
                let va = self.amplitudes[compose(a, env)];
                if va == ZERO {
                    continue;
                }
                for b in 0..dim {
                    rho[(a, b)] += va * self.amplitudes[compose(b, env)].conj();
                }
            }
        }
        DensityMatrix { matrix: rho }
    }
}

/// Dense first-quantization vector, capped at
/// [`DEFAULT_MAX_FIRST_QUANTIZATION`] particles.
pub fn to_first_quantization(s: &TwoModeState) -> Result<ParticleState> {
    to_first_quantization_capped(s, DEFAULT_MAX_FIRST_QUANTIZATION)
}

pub fn to_first_quantization_capped(s: &TwoModeState, max_particles: usize) -> Result<ParticleState> {
    let n = s.total_particles();
    if n > max_particles {
        return Err(Error::Resource(format!(
            "N = {n} exceeds the first-quantization cap of {max_particles}"
        )));
    }
    let scale: Vec<f64> = (0..=n).map(|k| binomial(n, k).sqrt().recip()).collect();
    let amplitudes = (0..1usize << n)
        .map(|index| {
            let zeros = n - index.count_ones() as usize;
            s.amplitudes[zeros] * scale[zeros]
        })
        .collect();
    Ok(ParticleState {
        num_particles: n,
        amplitudes,
    })
}

/// Normalized equal superposition of every distinct permutation of `bits`
/// (`false` = spin-down).
pub fn symmetrize(bits: &[bool]) -> ParticleState {
    let n = bits.len();
    let ones = bits.iter().filter(|&&b| b).count() as u32;
    let amp = Complex64::new(binomial(n, ones as usize).sqrt().recip(), 0.0);
    let amplitudes = (0..1usize << n)
        .map(|index| if index.count_ones() == ones { amp } else { ZERO })
        .collect();
    ParticleState {
        num_particles: n,
        amplitudes,
    }
}

/// Single-mode creation and annihilation operators for the two internal levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ladder {
    DownCreation,
    UpCreation,
    DownAnnihilation,
    UpAnnihilation,
}

/// Applies a ladder operator. The output is generally unnormalized and lives
/// at particle number `N ± 1`; annihilating the vacuum gives the zero vector
/// of the vacuum space.
pub fn apply_ladder(s: &TwoModeState, which: Ladder) -> TwoModeState {
    let n_tot = s.total_particles();
    let phi = &s.amplitudes;
    let out = match which {
        Ladder::DownCreation => {
            let mut out = vec![ZERO; n_tot + 2];
            for (n, z) in phi.iter().enumerate() {
                out[n + 1] = z * ((n + 1) as f64).sqrt();
            }
            out
        }
        Ladder::UpCreation => phi
            .iter()
            .enumerate()
            .map(|(n, z)| z * ((n_tot - n + 1) as f64).sqrt())
            .chain(std::iter::once(ZERO))
            .collect(),
        Ladder::DownAnnihilation if n_tot == 0 => vec![ZERO],
        Ladder::DownAnnihilation => (1..=n_tot).map(|n| phi[n] * (n as f64).sqrt()).collect(),
        Ladder::UpAnnihilation if n_tot == 0 => vec![ZERO],
        Ladder::UpAnnihilation => (0..n_tot)
            .map(|n| phi[n] * ((n_tot - n) as f64).sqrt())
            .collect(),
    };
    TwoModeState::from_raw(out)
}

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: DMatrix<Complex64>,
}

impl DensityMatrix {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        let rho = Self { matrix };
        rho.validate()?;
        Ok(rho)
    }

    pub fn from_pure(vector: &[Complex64]) -> Result<Self> {
        let v = DMatrix::from_column_slice(vector.len(), 1, vector);
        Self::new(&v * v.adjoint())
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self
            .matrix
            .clone()
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn max_deviation(&self, other: &DensityMatrix) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    fn validate(&self) -> Result<()> {
        let m = &self.matrix;
        if !m.is_square() || m.nrows() == 0 {
            return Err(Error::domain("density matrix must be square and non-empty"));
        }
        let herm = (m - m.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
        if herm > EPS_NORM {
            return Err(Error::domain(format!("density matrix not Hermitian ({herm:e})")));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > EPS_NORM {
            return Err(Error::domain(format!("density matrix trace {tr} != 1")));
        }
        if let Some(&min) = self.eigenvalues().first() {
            if min < -EPS_NORM {
                return Err(Error::domain(format!("negative eigenvalue {min:e}")));
            }
        }
        Ok(())
    }
}

/// Two-particle reduced state `ρ_pq`, identical for every pseudo-label pair.
///
/// Computed in the symmetric basis: splitting `|n, N-n>` into a pair and the
/// remaining `N-2` particles gives coefficients
/// `sqrt(C(2,k) C(N-2,n-k) / C(N,n))`; the pair's symmetric states are then
/// embedded as `|00>`, `(|01>+|10>)/sqrt(2)`, `|11>`.
pub fn two_particle_rdm(s: &TwoModeState) -> Result<DensityMatrix> {
    let n_tot = s.total_particles();
    if n_tot < 2 {
        return Err(Error::domain("two-particle reduced state needs N >= 2"));
    }
    let rest = n_tot - 2;
    // pair[k][j]: pair has k spin-down particles, remainder has j.
    let mut pair = vec![vec![ZERO; rest + 1]; 3];
    for (k, row) in pair.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let n = k + j;
            *entry = s.amplitude(n) * numeric::split_amplitude(&[2, rest], &[k, j]);
        }
    }
    let mut sym = [[ZERO; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            sym[a][b] = numeric::inner(&pair[b], &pair[a]);
        }
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // Columns: qubit-basis embedding of the pair state with k spin-down.
    let embed = |k: usize| -> [f64; 4] {
        match k {
            2 => [1.0, 0.0, 0.0, 0.0],
            1 => [0.0, h, h, 0.0],
            _ => [0.0, 0.0, 0.0, 1.0],
        }
    };
    let mut rho = DMatrix::<Complex64>::zeros(4, 4);
    for (a, row) in sym.iter().enumerate() {
        let ea = embed(a);
        for (b, &weight) in row.iter().enumerate() {
            let eb = embed(b);
            for i in 0..4 {
                for j in 0..4 {
                    rho[(i, j)] += weight * ea[i] * eb[j];
                }
            }
        }
    }
    DensityMatrix::new(rho)
}

/// First and second moments of the collective spin `J_α = Σ_p σ_α^(p) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveSpin {
    /// `<J_x>, <J_y>, <J_z>`.
    pub mean: [f64; 3],
    /// `second[a][b] = <J_a J_b>`.
    pub second: [[Complex64; 3]; 3],
}

impl CollectiveSpin {
    /// Symmetrized covariance `Re<J_a J_b> - <J_a><J_b>`.
    pub fn covariance(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|a| std::array::from_fn(|b| self.second[a][b].re - self.mean[a] * self.mean[b]))
    }

    /// Variance of `n·J` for a unit vector `n`.
    pub fn variance_along(&self, n: [f64; 3]) -> f64 {
        let cov = self.covariance();
        let mut v = 0.0;
        for a in 0..3 {
            for b in 0..3 {
                v += n[a] * n[b] * cov[a][b];
            }
        }
        v
    }
}

/// Matrices of `J_x, J_y, J_z` acting on `φ`, applied without forming them.
fn collective_actions(phi: &[Complex64]) -> [Vec<Complex64>; 3] {
    let n_tot = phi.len() - 1;
    let raise = |n: usize| ((n * (n_tot - n + 1)) as f64).sqrt(); // <n-1|J+|n>
    let mut jp = vec![ZERO; n_tot + 1];
    let mut jm = vec![ZERO; n_tot + 1];
    for n in 1..=n_tot {
        jp[n - 1] += phi[n] * raise(n);
        jm[n] += phi[n - 1] * raise(n);
    }
    let i = Complex64::new(0.0, 1.0);
    let jx = jp.iter().zip(&jm).map(|(a, b)| (a + b) * 0.5).collect();
    let jy = jp.iter().zip(&jm).map(|(a, b)| (a - b) / (2.0 * i)).collect();
    let jz = phi
        .iter()
        .enumerate()
        .map(|(n, z)| z * ((n_tot as f64 - 2.0 * n as f64) * 0.5))
        .collect();
    [jx, jy, jz]
}

/// Collective spin moments evaluated in the symmetric basis.
pub fn collective_spin(s: &TwoModeState) -> CollectiveSpin {
    let phi = s.amplitudes();
    let acted = collective_actions(phi);
    let mut mean = [0.0; 3];
    let mut second = [[ZERO; 3]; 3];
    for a in 0..3 {
        mean[a] = numeric::inner(phi, &acted[a]).re;
        for b in 0..3 {
            // J_a is Hermitian: <J_a J_b> = <J_a φ | J_b φ>.
            second[a][b] = numeric::inner(&acted[a], &acted[b]);
        }
    }
    CollectiveSpin { mean, second }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn fock_basis_vectors() {
        assert_eq!(make_fock(0, 3).unwrap().amplitudes(), &[ONE, ZERO, ZERO, ZERO]);
        assert_eq!(make_fock(2, 3).unwrap().amplitudes(), &[ZERO, ZERO, ONE, ZERO]);
        let s = make_fock(5, 5).unwrap();
        assert_eq!(s.as_fock(), Some(5));
        assert!(matches!(make_fock(4, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn first_quantization_of_w_like_state() {
        let ps = to_first_quantization(&make_fock(2, 3).unwrap()).unwrap();
        let a = 3f64.sqrt().recip();
        // |001>, |010>, |100> = indices 1, 2, 4.
        for (i, z) in ps.amplitudes().iter().enumerate() {
            let expected = if [1, 2, 4].contains(&i) { a } else { 0.0 };
            assert!((z - c(expected)).norm() < 1e-15, "index {i}");
        }
        let all_down = to_first_quantization(&make_fock(3, 3).unwrap()).unwrap();
        assert_eq!(all_down.amplitudes()[0], ONE);
        let s = TwoModeState::from_real(&[0.0, 1.0, 0.0]).unwrap();
        let ps = to_first_quantization(&s).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((ps.amplitudes()[1] - c(h)).norm() < 1e-15);
        assert!((ps.amplitudes()[2] - c(h)).norm() < 1e-15);
    }

    #[test]
    fn first_quantization_cap() {
        let s = make_fock(3, 15).unwrap();
        assert!(matches!(to_first_quantization(&s), Err(Error::Resource(_))));
        assert!(to_first_quantization_capped(&s, 15).is_ok());
    }

    #[test]
    fn symmetrize_examples() {
        let w = symmetrize(&[false, false, true]);
        assert_eq!(w, to_first_quantization(&make_fock(2, 3).unwrap()).unwrap());
        let d = symmetrize(&[false; 3]);
        assert_eq!(d.amplitudes()[0], ONE);
        let s = symmetrize(&[false, false, true, true]);
        let nonzero: Vec<_> = s.amplitudes().iter().filter(|z| z.norm() > 0.0).collect();
        assert_eq!(nonzero.len(), 6);
        for z in nonzero {
            assert!((z.re - 6f64.sqrt().recip()).abs() < 1e-15);
        }
    }

    #[test]
    fn ladder_examples() {
        let s = make_fock(1, 2).unwrap();
        let out = apply_ladder(&s, Ladder::DownCreation);
        assert_eq!(out.total_particles(), 3);
        assert!((out.amplitude(2) - c(2f64.sqrt())).norm() < 1e-15);

        let vac_down = apply_ladder(&make_fock(0, 2).unwrap(), Ladder::DownAnnihilation);
        assert_eq!(vac_down.total_particles(), 1);
        assert_eq!(vac_down.norm(), 0.0);

        let up = apply_ladder(&make_fock(2, 2).unwrap(), Ladder::UpCreation);
        assert_eq!(up.total_particles(), 3);
        assert!((up.amplitude(2) - ONE).norm() < 1e-15);
    }

    #[test]
    fn ladder_consistency() {
        for n_tot in 0..6 {
            for n in 0..=n_tot {
                let s = make_fock(n, n_tot).unwrap();
                let back = apply_ladder(&apply_ladder(&s, Ladder::DownCreation), Ladder::DownAnnihilation);
                assert!((back.amplitude(n) - c((n + 1) as f64)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rdm_of_product_and_bell() {
        let rho = two_particle_rdm(&make_fock(2, 2).unwrap()).unwrap();
        assert!((rho.matrix()[(0, 0)] - ONE).norm() < 1e-15);
        assert!((rho.purity() - 1.0).abs() < 1e-12);

        let rho = two_particle_rdm(&make_fock(1, 2).unwrap()).unwrap();
        for (i, j) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!((rho.matrix()[(i, j)] - c(0.5)).norm() < 1e-15);
        }
        assert!(matches!(
            two_particle_rdm(&make_fock(1, 1).unwrap()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn density_validation() {
        let bad = DMatrix::from_diagonal_element(2, 2, c(0.6));
        assert!(DensityMatrix::new(bad).is_err());
        let neg = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.5), c(-0.5)]));
        assert!(DensityMatrix::new(neg).is_err());
    }

    #[test]
    fn spin_of_all_down() {
        let spin = collective_spin(&make_fock(4, 4).unwrap());
        assert!((spin.mean[2] + 2.0).abs() < 1e-15);
        assert!(spin.mean[0].abs() < 1e-15 && spin.mean[1].abs() < 1e-15);
        let spin = collective_spin(&make_fock(1, 2).unwrap());
        assert!(spin.mean[2].abs() < 1e-15);
    }
}
