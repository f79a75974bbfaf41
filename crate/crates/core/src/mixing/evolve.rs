//! Brute-force evolution of general two-mode states under a mode unitary, and
//! the sector-block maps and coefficients it induces.

use std::collections::{BTreeMap, HashMap};

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{sectors, MixingMap, SectorPair};
use crate::numeric::{binomial, split_amplitude};
use crate::splitting::{FockState, SplitterParams};
use crate::{Error, Result, EPS_NORM};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// State of `N` particles over two modes, keyed by
/// `(n_A, m_A, n_B, m_B)`: spin-down and spin-up counts in each mode.
#[derive(Debug, Clone, PartialEq)]
pub struct JointModeState {
    total_particles: usize,
    amplitudes: BTreeMap<[usize; 4], Complex64>,
}

impl JointModeState {
    /// Validates particle number on every key and unit norm.
    pub fn new(total_particles: usize, amplitudes: BTreeMap<[usize; 4], Complex64>) -> Result<Self> {
        let state = Self::unchecked(total_particles, amplitudes)?;
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > EPS_NORM {
            return Err(Error::domain(format!("joint state not normalized: {norm}")));
        }
        Ok(state)
    }

    fn unchecked(total_particles: usize, amplitudes: BTreeMap<[usize; 4], Complex64>) -> Result<Self> {
        if let Some(key) = amplitudes
            .keys()
            .find(|k| k.iter().sum::<usize>() != total_particles)
        {
            return Err(Error::domain(format!(
                "occupation {key:?} does not hold {total_particles} particles"
            )));
        }
        Ok(Self {
            total_particles,
            amplitudes,
        })
    }

    /// A single occupation basis vector.
    pub fn basis(occupation: [usize; 4]) -> Self {
        Self {
            total_particles: occupation.iter().sum(),
            amplitudes: BTreeMap::from([(occupation, Complex64::new(1.0, 0.0))]),
        }
    }

    /// Embeds a two-mode Fock state with local totals `(N_A, N_B)`.
    pub fn from_fock(state: &FockState) -> Result<Self> {
        let totals = state.totals();
        if totals.len() != 2 {
            return Err(Error::domain("joint states hold exactly two modes"));
        }
        let mut amplitudes = BTreeMap::new();
        for downs in state.basis() {
            let z = state.amplitude(&downs);
            if z != ZERO {
                amplitudes.insert(
                    [downs[0], totals[0] - downs[0], downs[1], totals[1] - downs[1]],
                    z,
                );
            }
        }
        Self::new(state.total_particles(), amplitudes)
    }

    pub fn total_particles(&self) -> usize {
        self.total_particles
    }

    pub fn amplitudes(&self) -> &BTreeMap<[usize; 4], Complex64> {
        &self.amplitudes
    }

    pub fn amplitude(&self, occupation: [usize; 4]) -> Complex64 {
        self.amplitudes.get(&occupation).copied().unwrap_or(ZERO)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|z| z.norm_sqr()).sum()
    }

    /// Probability of finding `(N_C, N_D)` particles in the two modes.
    pub fn sector_probability(&self, sector: (usize, usize)) -> f64 {
        self.amplitudes
            .iter()
            .filter(|(k, _)| k[0] + k[1] == sector.0 && k[2] + k[3] == sector.1)
            .map(|(_, z)| z.norm_sqr())
            .sum()
    }

    /// Unnormalized component in sector `(N_C, N_D)` as a two-mode Fock state.
    pub fn sector_component(&self, sector: (usize, usize)) -> FockState {
        let mut out = FockState::zeros(vec![sector.0, sector.1]);
        for (k, &z) in &self.amplitudes {
            if k[0] + k[1] == sector.0 && k[2] + k[3] == sector.1 {
                out.set_amplitude(&[k[0], k[2]], z);
            }
        }
        out
    }

    /// `<m, N-m|_{(N_C, N_D)} ψ`.
    pub fn sector_coordinate(&self, sector: (usize, usize), m: usize) -> Complex64 {
        let (n_c, n_d) = sector;
        let lo = m.saturating_sub(n_d);
        let hi = m.min(n_c);
        (lo..=hi)
            .map(|k_c| {
                let k_d = m - k_c;
                split_amplitude(&[n_c, n_d], &[k_c, k_d])
                    * self.amplitude([k_c, n_c - k_c, k_d, n_d - k_d])
            })
            .sum()
    }
}

/// `|n, N-n>_{(N_A, N_B)}` as a joint state.
pub fn sector_basis_state(n: usize, sector: (usize, usize)) -> Result<JointModeState> {
    let (n_a, n_b) = sector;
    let total = n_a + n_b;
    if n > total {
        return Err(Error::domain(format!("n = {n} exceeds N = {total}")));
    }
    let mut amplitudes = BTreeMap::new();
    for k_a in n.saturating_sub(n_b)..=n.min(n_a) {
        let k_b = n - k_a;
        amplitudes.insert(
            [k_a, n_a - k_a, k_b, n_b - k_b],
            Complex64::new(split_amplitude(&[n_a, n_b], &[k_a, k_b]), 0.0),
        );
    }
    JointModeState::new(total, amplitudes)
}

/// One species: `a†^{k_a} b†^{k_b} / sqrt(k_a! k_b!) |0>` under
/// `a† -> u00 c† + u10 d†`, `b† -> u01 c† + u11 d†`, returned as amplitudes
/// over `|p, k-p>_{CD}`.
fn species_amplitudes(u: &[[Complex64; 2]; 2], k_a: usize, k_b: usize) -> Vec<Complex64> {
    let k = k_a + k_b;
    let mut out = vec![ZERO; k + 1];
    for i in 0..=k_a {
        let from_a = u[0][0].powu(i as u32) * u[1][0].powu((k_a - i) as u32) * binomial(k_a, i);
        for j in 0..=k_b {
            let from_b =
                u[0][1].powu(j as u32) * u[1][1].powu((k_b - j) as u32) * binomial(k_b, j);
            out[i + j] += from_a * from_b;
        }
    }
    // c†^p d†^{k-p}|0> = sqrt(p!(k-p)!) |p, k-p>, and
    // p!(k-p)! / (k_a! k_b!) = C(k, k_a) / C(k, p).
    for (p, z) in out.iter_mut().enumerate() {
        *z *= (binomial(k, k_a) / binomial(k, p)).sqrt();
    }
    out
}

/// Substitutes the creation operators of both species through a general
/// mode matrix `u[(K, L)]` (`K` output, `L` input) and re-expands.
pub fn transform_joint(js: &JointModeState, u: &[[Complex64; 2]; 2]) -> JointModeState {
    let mut cache: HashMap<(usize, usize), Vec<Complex64>> = HashMap::new();
    let mut out: BTreeMap<[usize; 4], Complex64> = BTreeMap::new();
    for (&[n_a, m_a, n_b, m_b], &psi) in &js.amplitudes {
        if psi == ZERO {
            continue;
        }
        let down = cache
            .entry((n_a, n_b))
            .or_insert_with(|| species_amplitudes(u, n_a, n_b))
            .clone();
        let up = cache
            .entry((m_a, m_b))
            .or_insert_with(|| species_amplitudes(u, m_a, m_b))
            .clone();
        let (kd, ku) = (n_a + n_b, m_a + m_b);
        for (p, &zd) in down.iter().enumerate() {
            if zd == ZERO {
                continue;
            }
            for (q, &zu) in up.iter().enumerate() {
                if zu == ZERO {
                    continue;
                }
                *out.entry([p, q, kd - p, ku - q]).or_insert(ZERO) += psi * zd * zu;
            }
        }
    }
    JointModeState {
        total_particles: js.total_particles,
        amplitudes: out,
    }
}

/// Full two-mode beamsplitter `a† -> r c† + t d†`, `b† -> -t* c† + r* d†`
/// applied to both internal levels.
pub fn evolve_joint(js: &JointModeState, p: &SplitterParams) -> JointModeState {
    transform_joint(js, &p.mode_matrix())
}

/// Sector blocks of the map induced by a general mode matrix.
pub fn induced_map_from_modes(u: &[[Complex64; 2]; 2], total: usize) -> MixingMap {
    let mut map = MixingMap::new(total);
    let dim = total + 1;
    let mut blocks: BTreeMap<SectorPair, DMatrix<Complex64>> = BTreeMap::new();
    for input in sectors(total) {
        for n in 0..=total {
            let evolved = transform_joint(&sector_basis_state(n, input).expect("valid n"), u);
            for output in sectors(total) {
                let block = blocks
                    .entry(SectorPair::new(input, output))
                    .or_insert_with(|| DMatrix::zeros(dim, dim));
                for m in 0..=total {
                    block[(m, n)] = evolved.sector_coordinate(output, m);
                }
            }
        }
    }
    for (pair, block) in blocks {
        map.insert_block(pair, block).expect("consistent shapes");
    }
    map
}

/// Sector blocks of the beamsplitter map, obtained by evolving every sector
/// basis state and projecting onto every output sector basis.
pub fn induced_map(p: &SplitterParams, total: usize) -> MixingMap {
    induced_map_from_modes(&p.mode_matrix(), total)
}

/// `C(N_A, N_B; N_C, N_D) = <N_C,0|<N_D,0| U |N_A,0>|N_B,0>`, which equals the
/// block coefficient for every symmetric state because the blocks are
/// multiples of the identity.
pub fn mixing_coefficient(
    n_a: usize,
    n_b: usize,
    n_c: usize,
    n_d: usize,
    p: &SplitterParams,
) -> Result<Complex64> {
    if n_a + n_b != n_c + n_d {
        return Err(Error::domain(format!(
            "particle numbers differ: {} in, {} out",
            n_a + n_b,
            n_c + n_d
        )));
    }
    let evolved = evolve_joint(&JointModeState::basis([n_a, 0, n_b, 0]), p);
    Ok(evolved.amplitude([n_c, 0, n_d, 0]))
}
