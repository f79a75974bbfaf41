//! Mode splitting and Schmidt decompositions.
//!
//! A single occupied mode `A` is spread over output modes by a passive,
//! internal-state-blind transformation `a_k† -> Σ_K α_K c_{kK}†`. The output
//! is organised by local particle numbers (sectors); within each sector the
//! state is the symmetric Fock state split into groups, whose Schmidt
//! coefficients are `sqrt(Π_K C(N_K, n_K) / C(N, n))`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::numeric::{self, compositions, sector_weight, split_amplitude, tuples_up_to};
use crate::states::{ParticleState, TwoModeState};
use crate::{Error, Result, EPS_NORM, EPS_RANK};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Beamsplitter amplitudes for `a_k† -> r c_k† + t d_k†`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitterParams {
    r: Complex64,
    t: Complex64,
}

impl SplitterParams {
    pub fn new(r: Complex64, t: Complex64) -> Result<Self> {
        let norm = r.norm_sqr() + t.norm_sqr();
        if (norm - 1.0).abs() > EPS_NORM {
            return Err(Error::domain(format!("|r|^2 + |t|^2 = {norm}, expected 1")));
        }
        Ok(Self { r, t })
    }

    /// Accepts pairs within `slack` of unit norm and rescales them exactly.
    pub fn normalized(r: Complex64, t: Complex64, slack: f64) -> Result<Self> {
        let norm = r.norm_sqr() + t.norm_sqr();
        if (norm.sqrt() - 1.0).abs() > slack {
            return Err(Error::domain(format!(
                "|r|^2 + |t|^2 = {norm} is not within {slack:e} of unit norm"
            )));
        }
        let scale = norm.sqrt();
        Ok(Self {
            r: r / scale,
            t: t / scale,
        })
    }

    /// `r = t = 1/sqrt(2)`.
    pub fn balanced() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            r: Complex64::new(h, 0.0),
            t: Complex64::new(h, 0.0),
        }
    }

    pub fn identity() -> Self {
        Self {
            r: Complex64::new(1.0, 0.0),
            t: ZERO,
        }
    }

    /// Real-angle splitter `r = cos θ`, `t = e^{iχ} sin θ`.
    pub fn from_angles(theta: f64, chi: f64) -> Self {
        Self {
            r: Complex64::new(theta.cos(), 0.0),
            t: Complex64::from_polar(theta.sin(), chi),
        }
    }

    pub fn r(&self) -> Complex64 {
        self.r
    }

    pub fn t(&self) -> Complex64 {
        self.t
    }

    /// A splitter is trivial when it sends everything to one output mode.
    pub fn is_trivial(&self) -> bool {
        self.r.norm() <= EPS_NORM || self.t.norm() <= EPS_NORM
    }

    /// Mode matrix `u[(K, L)]` of the full two-mode unitary:
    /// `a† -> r c† + t d†`, `b† -> -t* c† + r* d†`.
    pub fn mode_matrix(&self) -> [[Complex64; 2]; 2] {
        [[self.r, -self.t.conj()], [self.t, self.r.conj()]]
    }
}

/// Joint Fock state of several modes with fixed local particle numbers.
///
/// Amplitudes are indexed by spin-down occupations `(n_1, ..., n_k)` with
/// `0 <= n_K <= N_K` in mixed radix, first mode most significant. The basis
/// vector for a tuple is `⊗_K |n_K, N_K - n_K>_K`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockState {
    totals: Vec<usize>,
    amplitudes: Vec<Complex64>,
}

impl FockState {
    pub fn new(totals: Vec<usize>, amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim: usize = totals.iter().map(|k| k + 1).product();
        if amplitudes.len() != dim {
            return Err(Error::domain(format!(
                "sector {totals:?} needs {dim} amplitudes, got {}",
                amplitudes.len()
            )));
        }
        Ok(Self { totals, amplitudes })
    }

    pub fn zeros(totals: Vec<usize>) -> Self {
        let dim = totals.iter().map(|k| k + 1).product();
        Self {
            totals,
            amplitudes: vec![ZERO; dim],
        }
    }

    pub fn totals(&self) -> &[usize] {
        &self.totals
    }

    pub fn total_particles(&self) -> usize {
        self.totals.iter().sum()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    fn index_of(&self, downs: &[usize]) -> Option<usize> {
        if downs.len() != self.totals.len() {
            return None;
        }
        let mut index = 0;
        for (&n, &cap) in downs.iter().zip(&self.totals) {
            if n > cap {
                return None;
            }
            index = index * (cap + 1) + n;
        }
        Some(index)
    }

    /// Amplitude of `⊗_K |downs[K], N_K - downs[K]>`.
    pub fn amplitude(&self, downs: &[usize]) -> Complex64 {
        self.index_of(downs)
            .map(|i| self.amplitudes[i])
            .unwrap_or(ZERO)
    }

    pub fn set_amplitude(&mut self, downs: &[usize], value: Complex64) {
        let i = self
            .index_of(downs)
            .unwrap_or_else(|| panic!("occupation {downs:?} outside sector {:?}", self.totals));
        self.amplitudes[i] = value;
    }

    /// Basis labels in storage order.
    pub fn basis(&self) -> Vec<Vec<usize>> {
        tuples_up_to(&self.totals)
    }

    pub fn norm(&self) -> f64 {
        numeric::norm_sqr(&self.amplitudes).sqrt()
    }

    /// `<self|other>`; zero when sectors differ.
    pub fn inner(&self, other: &FockState) -> Complex64 {
        if self.totals != other.totals {
            return ZERO;
        }
        numeric::inner(&self.amplitudes, &other.amplitudes)
    }

    /// `|<self|other>|`.
    pub fn fidelity(&self, other: &FockState) -> f64 {
        self.inner(other).norm()
    }

    pub fn scaled(&self, factor: Complex64) -> FockState {
        FockState {
            totals: self.totals.clone(),
            amplitudes: self.amplitudes.iter().map(|z| z * factor).collect(),
        }
    }

    /// Phase-aligned copy: largest-magnitude amplitude made real positive.
    pub fn phase_aligned(&self) -> FockState {
        FockState {
            totals: self.totals.clone(),
            amplitudes: numeric::align_phase(&self.amplitudes),
        }
    }

    /// Largest amplitude deviation after quotienting global phase.
    pub fn distance_up_to_phase(&self, other: &FockState) -> f64 {
        if self.totals != other.totals {
            return f64::INFINITY;
        }
        numeric::max_deviation_up_to_phase(&self.amplitudes, &other.amplitudes)
    }

    /// Exchange the two modes of a two-mode state.
    pub fn swap_modes(&self) -> FockState {
        assert_eq!(self.totals.len(), 2, "swap_modes needs a two-mode state");
        let (a, b) = (self.totals[0], self.totals[1]);
        let mut out = FockState::zeros(vec![b, a]);
        for n_a in 0..=a {
            for n_b in 0..=b {
                out.set_amplitude(&[n_b, n_a], self.amplitude(&[n_a, n_b]));
            }
        }
        out
    }

    /// Coefficient matrix `M[(n_C, n_D)]` of a two-mode state.
    pub fn coefficient_matrix(&self) -> Result<DMatrix<Complex64>> {
        if self.totals.len() != 2 {
            return Err(Error::domain("coefficient matrix needs exactly two modes"));
        }
        let cols = self.totals[1] + 1;
        Ok(DMatrix::from_fn(self.totals[0] + 1, cols, |i, j| {
            self.amplitudes[i * cols + j]
        }))
    }

    /// Schmidt decomposition across the two modes, by SVD.
    pub fn schmidt(&self) -> Result<SchmidtDecomposition> {
        let m = self.coefficient_matrix()?;
        SchmidtDecomposition::from_matrix(m)
    }

    /// `Tr ρ_1²` for the reduced state of the first mode of a two-mode state.
    pub fn first_mode_purity(&self) -> Result<f64> {
        let m = self.coefficient_matrix()?;
        let rho = &m * m.adjoint();
        Ok((&rho * &rho).trace().re)
    }
}

/// Local Schmidt vector: either a Fock basis state of one mode or an explicit
/// vector in the local basis.
#[derive(Debug, Clone, PartialEq)]
pub enum LocalState {
    /// `|down, up>`.
    Fock { down: usize, up: usize },
    Vector(Vec<Complex64>),
}

/// Schmidt coefficients in descending order with their local states.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    coefficients: Vec<f64>,
    left: Vec<LocalState>,
    right: Vec<LocalState>,
}

impl SchmidtDecomposition {
    /// Sorts the terms by coefficient, validates non-negativity and
    /// normalization.
    pub fn new(terms: Vec<(f64, LocalState, LocalState)>) -> Result<Self> {
        let mut terms = terms;
        if terms.iter().any(|(c, _, _)| c.is_nan() || *c < 0.0) {
            return Err(Error::domain("Schmidt coefficients must be non-negative"));
        }
        let total: f64 = terms.iter().map(|(c, _, _)| c * c).sum();
        if (total - 1.0).abs() > EPS_NORM {
            return Err(Error::domain(format!(
                "Schmidt coefficients not normalized: sum of squares {total}"
            )));
        }
        terms.sort_by(|a, b| b.0.total_cmp(&a.0));
        let mut coefficients = Vec::with_capacity(terms.len());
        let mut left = Vec::with_capacity(terms.len());
        let mut right = Vec::with_capacity(terms.len());
        for (c, l, r) in terms {
            coefficients.push(c);
            left.push(l);
            right.push(r);
        }
        Ok(Self {
            coefficients,
            left,
            right,
        })
    }

    /// SVD of a bipartite coefficient matrix; singular values below
    /// [`EPS_RANK`] are dropped.
    pub fn from_matrix(m: DMatrix<Complex64>) -> Result<Self> {
        // nalgebra's SVD misreports singular values of some sparse degenerate
        // matrices when singular vectors are requested; faer's does not.
        let a = faer::Mat::<Complex64>::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)]);
        let svd = a
            .thin_svd()
            .map_err(|e| Error::domain(format!("SVD did not converge: {e:?}")))?;
        let (u, s, v) = (svd.U(), svd.S(), svd.V());
        let mut terms = Vec::new();
        for k in 0..s.dim() {
            let sk = s[k].re;
            if sk < EPS_RANK {
                continue;
            }
            // m = Σ s_k u_k v_k^†, so the right factor is conj(v_k).
            let left = LocalState::Vector((0..u.nrows()).map(|i| u[(i, k)]).collect());
            let right = LocalState::Vector((0..v.nrows()).map(|j| v[(j, k)].conj()).collect());
            terms.push((sk, left, right));
        }
        Self::new(terms)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn left(&self) -> &[LocalState] {
        &self.left
    }

    pub fn right(&self) -> &[LocalState] {
        &self.right
    }

    pub fn rank(&self) -> usize {
        self.coefficients.len()
    }

    /// Largest coefficient difference, padding the shorter spectrum with zeros.
    pub fn spectrum_deviation(&self, other: &SchmidtDecomposition) -> f64 {
        spectrum_deviation(&self.coefficients, &other.coefficients)
    }
}

/// Largest difference between two descending spectra, zero-padded.
pub fn spectrum_deviation(a: &[f64], b: &[f64]) -> f64 {
    let len = a.len().max(b.len());
    (0..len)
        .map(|i| (a.get(i).copied().unwrap_or(0.0) - b.get(i).copied().unwrap_or(0.0)).abs())
        .fold(0.0, f64::max)
}

/// One particle-number sector of a split state.
#[derive(Debug, Clone, PartialEq)]
pub struct Sector {
    pub weight: Complex64,
    /// Normalized joint Fock state in this sector.
    pub state: FockState,
}

impl Sector {
    pub fn probability(&self) -> f64 {
        self.weight.norm_sqr()
    }
}

/// Output of a splitting transformation organised by local particle numbers.
/// Zero-weight sectors are omitted.
#[derive(Debug, Clone, PartialEq)]
pub struct SectoredState {
    total_particles: usize,
    num_modes: usize,
    sectors: BTreeMap<Vec<usize>, Sector>,
}

impl SectoredState {
    pub fn total_particles(&self) -> usize {
        self.total_particles
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    /// Sectors in ascending key order.
    pub fn sectors(&self) -> &BTreeMap<Vec<usize>, Sector> {
        &self.sectors
    }

    pub fn sector(&self, key: &[usize]) -> Option<&Sector> {
        self.sectors.get(key)
    }

    pub fn total_probability(&self) -> f64 {
        self.sectors.values().map(Sector::probability).sum()
    }
}

/// Result of measuring local particle numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorOutcome {
    pub probability: f64,
    /// `None` for an unoccupied sector.
    pub state: Option<FockState>,
}

/// Two-mode splitting of a single-mode state with vacuum in the second input.
pub fn beamsplit(s: &TwoModeState, p: &SplitterParams) -> SectoredState {
    split_over(s, &[p.r, p.t])
}

/// Probability and post-measurement state of one sector.
pub fn project_sector(ss: &SectoredState, key: &[usize]) -> Result<SectorOutcome> {
    if key.len() != ss.num_modes || key.iter().sum::<usize>() != ss.total_particles {
        return Err(Error::domain(format!(
            "sector {key:?} is not a split of {} particles over {} modes",
            ss.total_particles, ss.num_modes
        )));
    }
    Ok(match ss.sectors.get(key) {
        Some(sector) => SectorOutcome {
            probability: sector.probability(),
            state: Some(sector.state.clone()),
        },
        None => SectorOutcome {
            probability: 0.0,
            state: None,
        },
    })
}

/// Closed-form Schmidt decomposition of `|n, N-n>` split into `(N_C, N_D)`.
pub fn mode_schmidt_coeffs(
    n: usize,
    total: usize,
    n_c: usize,
    n_d: usize,
) -> Result<SchmidtDecomposition> {
    if n_c + n_d != total {
        return Err(Error::domain(format!(
            "N_C + N_D = {} does not equal N = {total}",
            n_c + n_d
        )));
    }
    if n > total {
        return Err(Error::domain(format!("n = {n} exceeds N = {total}")));
    }
    let lo = n.saturating_sub(n_d);
    let hi = n.min(n_c);
    let terms = (lo..=hi)
        .map(|k_c| {
            let k_d = n - k_c;
            (
                split_amplitude(&[n_c, n_d], &[k_c, k_d]),
                LocalState::Fock {
                    down: k_c,
                    up: n_c - k_c,
                },
                LocalState::Fock {
                    down: k_d,
                    up: n_d - k_d,
                },
            )
        })
        .collect();
    SchmidtDecomposition::new(terms)
}

/// Schmidt decomposition across (first `n_x` pseudo-labels : rest) by SVD of
/// the `2^{n_x} x 2^{N-n_x}` coefficient matrix.
pub fn particle_schmidt(ps: &ParticleState, n_x: usize) -> Result<SchmidtDecomposition> {
    let n = ps.num_particles();
    if n_x == 0 || n_x >= n {
        return Err(Error::domain(format!(
            "bipartition size {n_x} must lie in 1..={}",
            n.saturating_sub(1)
        )));
    }
    let cols = 1usize << (n - n_x);
    let amps = ps.amplitudes();
    let m = DMatrix::from_fn(1usize << n_x, cols, |i, j| amps[i * cols + j]);
    SchmidtDecomposition::from_matrix(m)
}

/// Isometric column `α_K` of a passive, internal-state-blind network.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkColumn {
    alphas: Vec<Complex64>,
}

impl NetworkColumn {
    pub fn new(alphas: Vec<Complex64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::domain("network column needs at least one output mode"));
        }
        let norm = numeric::norm_sqr(&alphas);
        if (norm - 1.0).abs() > EPS_NORM {
            return Err(Error::domain(format!(
                "network column not isometric: sum |alpha_K|^2 = {norm}"
            )));
        }
        Ok(Self { alphas })
    }

    /// Equal amplitude `1/sqrt(k)` into each of `k` modes.
    pub fn uniform(k: usize) -> Self {
        let a = Complex64::new((k as f64).sqrt().recip(), 0.0);
        Self { alphas: vec![a; k] }
    }

    pub fn alphas(&self) -> &[Complex64] {
        &self.alphas
    }

    pub fn num_modes(&self) -> usize {
        self.alphas.len()
    }
}

impl From<&SplitterParams> for NetworkColumn {
    fn from(p: &SplitterParams) -> Self {
        Self {
            alphas: vec![p.r, p.t],
        }
    }
}

/// Splitting over an arbitrary number of output modes. Sector weights are
/// `sqrt(N!/Π N_K!) Π α_K^{N_K}`; sector states are the ideal multimode
/// splits.
pub fn multimode_split(s: &TwoModeState, col: &NetworkColumn) -> SectoredState {
    split_over(s, col.alphas())
}

fn split_over(s: &TwoModeState, alphas: &[Complex64]) -> SectoredState {
    let n = s.total_particles();
    let mut sectors = BTreeMap::new();
    for counts in compositions(n, alphas.len()) {
        let weight = sector_weight(alphas, &counts);
        if weight.norm_sqr() == 0.0 {
            continue;
        }
        let state = ideal_multimode_split(s, &counts).expect("composition of N");
        sectors.insert(counts, Sector { weight, state });
    }
    SectoredState {
        total_particles: n,
        num_modes: alphas.len(),
        sectors,
    }
}

/// `|n, N-n>_A -> |n, N-n>_{(N_C, N_D)}` applied to every amplitude.
pub fn ideal_mode_split(s: &TwoModeState, n_c: usize, n_d: usize) -> Result<FockState> {
    ideal_multimode_split(s, &[n_c, n_d])
}

/// Multimode version of [`ideal_mode_split`] for group sizes `totals`.
pub fn ideal_multimode_split(s: &TwoModeState, totals: &[usize]) -> Result<FockState> {
    let n = s.total_particles();
    if totals.iter().sum::<usize>() != n {
        return Err(Error::domain(format!(
            "group sizes {totals:?} do not add up to N = {n}"
        )));
    }
    let mut out = FockState::zeros(totals.to_vec());
    for (index, downs) in tuples_up_to(totals).into_iter().enumerate() {
        let k: usize = downs.iter().sum();
        let phi = s.amplitude(k);
        if phi == ZERO {
            continue;
        }
        out.amplitudes[index] = phi * split_amplitude(totals, &downs);
    }
    Ok(out)
}
