//! Repeat-until-success extraction of a single-mode state onto two modes.
//!
//! Each iteration mixes the two modes with a beamsplitter and measures the
//! local particle numbers. Because every mixing block is `C{N}` times the
//! identity, the symmetric amplitudes `φ_n` never change; only the sector
//! `(N_A, N_B)` and a global phase do. The fast path therefore tracks just the
//! sector and samples outcomes from `|C{N}|²`. A full joint-state simulation is
//! kept as a cross-check for small `N`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::mixing::{evolve_joint, JointModeState};
use crate::numeric::binomial;
use crate::splitting::{ideal_mode_split, FockState, SplitterParams};
use crate::states::TwoModeState;
use crate::{Error, Result};

/// Default cap on mixing rounds.
pub const DEFAULT_MAX_ITERATIONS: usize = 50;

/// Largest `N` for [`run_once_full_state`].
pub const MAX_FULL_STATE_PARTICLES: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub enum SplitterSchedule {
    Fixed(SplitterParams),
    /// Iteration `k` (0-based) uses entry `k % len`.
    Cycle(Vec<SplitterParams>),
}

impl SplitterSchedule {
    fn splitters(&self) -> &[SplitterParams] {
        match self {
            SplitterSchedule::Fixed(p) => std::slice::from_ref(p),
            SplitterSchedule::Cycle(ps) => ps,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolConfig {
    /// Desired bipartition `(N_X, N_Y)`.
    pub target: (usize, usize),
    pub schedule: SplitterSchedule,
    pub max_iterations: usize,
    pub rng_seed: u64,
}

impl ProtocolConfig {
    pub fn new(target: (usize, usize), splitter: SplitterParams, rng_seed: u64) -> Self {
        Self {
            target,
            schedule: SplitterSchedule::Fixed(splitter),
            max_iterations: DEFAULT_MAX_ITERATIONS,
            rng_seed,
        }
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn validate(&self, total: usize) -> Result<()> {
        if self.target.0 + self.target.1 != total {
            return Err(Error::domain(format!(
                "target {:?} does not split N = {total}",
                self.target
            )));
        }
        let splitters = self.schedule.splitters();
        if splitters.is_empty() {
            return Err(Error::domain("empty splitter schedule"));
        }
        if splitters.iter().any(SplitterParams::is_trivial) {
            return Err(Error::domain("protocol needs non-trivial splitters (|r|, |t| > 0)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolResult {
    pub success: bool,
    pub iterations_used: usize,
    /// Measured `(N_C, N_D)` after each mixing round.
    pub trajectory: Vec<(usize, usize)>,
    /// Extracted state with mode `C` holding `N_X` particles.
    pub output_state: Option<FockState>,
    pub fidelity_with_target: f64,
    /// Accepted on `(N_Y, N_X)`; the output modes were relabelled.
    pub mirrored: bool,
}

/// Seeded generator for trial `index`: one ChaCha stream per trial.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `C(N_A, N - N_A; N_C, N - N_C)` for every input and output sector of one
/// splitter.
#[derive(Debug, Clone)]
struct TransitionTable {
    coefficients: Vec<Vec<Complex64>>,
    probabilities: Vec<Vec<f64>>,
}

impl TransitionTable {
    fn new(p: &SplitterParams, total: usize) -> Self {
        let mut coefficients = Vec::with_capacity(total + 1);
        for n_a in 0..=total {
            let out = evolve_joint(&JointModeState::basis([n_a, 0, total - n_a, 0]), p);
            coefficients.push(
                (0..=total)
                    .map(|n_c| out.amplitude([n_c, 0, total - n_c, 0]))
                    .collect::<Vec<_>>(),
            );
        }
        let probabilities = coefficients
            .iter()
            .map(|row| {
                let weights: Vec<f64> = row.iter().map(|c| c.norm_sqr()).collect();
                let sum: f64 = weights.iter().sum();
                weights.iter().map(|w| w / sum).collect()
            })
            .collect();
        Self {
            coefficients,
            probabilities,
        }
    }
}

/// Inverse-CDF sample over outcomes in ascending order.
fn sample_index(probabilities: &[f64], u: f64) -> usize {
    let mut cumulative = 0.0;
    let mut last_nonzero = 0;
    for (i, &p) in probabilities.iter().enumerate() {
        if p > 0.0 {
            last_nonzero = i;
        }
        cumulative += p;
        if u < cumulative {
            return i;
        }
    }
    last_nonzero
}

fn accepts(sector: (usize, usize), target: (usize, usize)) -> Option<bool> {
    if sector == target {
        Some(false)
    } else if sector == (target.1, target.0) {
        Some(true)
    } else {
        None
    }
}

/// Target output `Σ φ_n |n, N-n>_{(N_X, N_Y)}`.
pub fn target_state(s: &TwoModeState, target: (usize, usize)) -> Result<FockState> {
    ideal_mode_split(s, target.0, target.1)
}

fn finish(
    s: &TwoModeState,
    target: (usize, usize),
    produced: FockState,
    mirrored: bool,
    iterations_used: usize,
    trajectory: Vec<(usize, usize)>,
) -> ProtocolResult {
    let relabelled = if mirrored { produced.swap_modes() } else { produced };
    let fidelity = target_state(s, target)
        .expect("validated target")
        .fidelity(&relabelled);
    ProtocolResult {
        success: true,
        iterations_used,
        trajectory,
        output_state: Some(relabelled),
        fidelity_with_target: fidelity.min(1.0),
        mirrored,
    }
}

fn failure(iterations_used: usize, trajectory: Vec<(usize, usize)>) -> ProtocolResult {
    ProtocolResult {
        success: false,
        iterations_used,
        trajectory,
        output_state: None,
        fidelity_with_target: 0.0,
        mirrored: false,
    }
}

fn run_trial<R: Rng>(
    s: &TwoModeState,
    cfg: &ProtocolConfig,
    tables: &[TransitionTable],
    rng: &mut R,
) -> ProtocolResult {
    let total = s.total_particles();
    let mut sector = (total, 0);
    let mut phase = Complex64::new(1.0, 0.0);
    let mut trajectory = Vec::new();
    let materialize = |sector: (usize, usize), phase: Complex64| {
        ideal_mode_split(s, sector.0, sector.1)
            .expect("sector of N")
            .scaled(phase)
    };
    if let Some(mirrored) = accepts(sector, cfg.target) {
        return finish(s, cfg.target, materialize(sector, phase), mirrored, 0, trajectory);
    }
    for k in 0..cfg.max_iterations {
        let table = &tables[k % tables.len()];
        let u: f64 = rng.random();
        let n_c = sample_index(&table.probabilities[sector.0], u);
        let c = table.coefficients[sector.0][n_c];
        phase *= c / c.norm();
        sector = (n_c, total - n_c);
        trajectory.push(sector);
        if let Some(mirrored) = accepts(sector, cfg.target) {
            return finish(s, cfg.target, materialize(sector, phase), mirrored, k + 1, trajectory);
        }
    }
    failure(cfg.max_iterations, trajectory)
}

fn tables_for(cfg: &ProtocolConfig, total: usize) -> Vec<TransitionTable> {
    cfg.schedule
        .splitters()
        .iter()
        .map(|p| TransitionTable::new(p, total))
        .collect()
}

/// One protocol run driven by stream 0 of `cfg.rng_seed`.
pub fn run_once(s: &TwoModeState, cfg: &ProtocolConfig) -> Result<ProtocolResult> {
    cfg.validate(s.total_particles())?;
    let tables = tables_for(cfg, s.total_particles());
    Ok(run_trial(s, cfg, &tables, &mut trial_rng(cfg.rng_seed, 0)))
}

/// The same protocol on the full joint state: evolve through the complete
/// two-mode unitary, sample the measured sector from the actual state and
/// project. Uses the same random draws as [`run_once`], so trajectories agree
/// whenever the reduced description is exact.
pub fn run_once_full_state(s: &TwoModeState, cfg: &ProtocolConfig) -> Result<ProtocolResult> {
    run_full_state_trial(s, cfg, 0)
}

pub fn run_full_state_trial(
    s: &TwoModeState,
    cfg: &ProtocolConfig,
    trial: u64,
) -> Result<ProtocolResult> {
    let total = s.total_particles();
    cfg.validate(total)?;
    if total > MAX_FULL_STATE_PARTICLES {
        return Err(Error::Resource(format!(
            "full-state protocol simulation is limited to N <= {MAX_FULL_STATE_PARTICLES}"
        )));
    }
    let mut rng = trial_rng(cfg.rng_seed, trial);
    let mut sector = (total, 0);
    let mut state = ideal_mode_split(s, total, 0)?;
    let mut trajectory = Vec::new();
    if let Some(mirrored) = accepts(sector, cfg.target) {
        return Ok(finish(s, cfg.target, state, mirrored, 0, trajectory));
    }
    let splitters = cfg.schedule.splitters();
    for k in 0..cfg.max_iterations {
        let joint = JointModeState::from_fock(&state)?;
        let evolved = evolve_joint(&joint, &splitters[k % splitters.len()]);
        let probabilities: Vec<f64> = (0..=total)
            .map(|n_c| evolved.sector_probability((n_c, total - n_c)))
            .collect();
        let sum: f64 = probabilities.iter().sum();
        let normalized: Vec<f64> = probabilities.iter().map(|p| p / sum).collect();
        let u: f64 = rng.random();
        let n_c = sample_index(&normalized, u);
        sector = (n_c, total - n_c);
        trajectory.push(sector);
        let component = evolved.sector_component(sector);
        state = component.scaled(Complex64::new(component.norm().recip(), 0.0));
        if let Some(mirrored) = accepts(sector, cfg.target) {
            return Ok(finish(s, cfg.target, state, mirrored, k + 1, trajectory));
        }
    }
    Ok(failure(cfg.max_iterations, trajectory))
}

/// Aggregate statistics of independent trials.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleStats {
    pub trials: u64,
    pub successes: u64,
    pub failure_fraction: f64,
    /// Mean rounds used by successful trials.
    pub mean_iterations: f64,
    /// `acceptance_counts[k]`: trials that succeeded after exactly `k` rounds.
    pub acceptance_counts: Vec<u64>,
    /// `acceptance_rate[k]`: fraction of all trials accepted at round `k`.
    pub acceptance_rate: Vec<f64>,
    /// `survival[k]`: fraction of trials still unsuccessful after `k` rounds.
    pub survival: Vec<f64>,
    pub mean_fidelity: f64,
    pub min_fidelity: f64,
    /// Full record of the first successful trial, if any.
    pub sample: Option<ProtocolResult>,
    pub sample_trial: Option<u64>,
}

#[derive(Debug, Clone, Copy)]
struct TrialSummary {
    success: bool,
    iterations_used: usize,
    fidelity: f64,
}

/// Runs `trials` independent trials, trial `i` on ChaCha stream `i` of the
/// seed. Results do not depend on thread scheduling.
pub fn run_ensemble(s: &TwoModeState, cfg: &ProtocolConfig, trials: u64) -> Result<EnsembleStats> {
    if trials == 0 {
        return Err(Error::domain("ensemble needs at least one trial"));
    }
    cfg.validate(s.total_particles())?;
    let tables = tables_for(cfg, s.total_particles());
    let summaries: Vec<TrialSummary> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let r = run_trial(s, cfg, &tables, &mut trial_rng(cfg.rng_seed, i));
            TrialSummary {
                success: r.success,
                iterations_used: r.iterations_used,
                fidelity: r.fidelity_with_target,
            }
        })
        .collect();

    let max = cfg.max_iterations;
    let mut acceptance_counts = vec![0u64; max + 1];
    let mut successes = 0u64;
    let mut iteration_sum = 0u64;
    let mut fidelity_sum = 0.0;
    let mut min_fidelity = f64::INFINITY;
    let mut sample_trial = None;
    for (i, t) in summaries.iter().enumerate() {
        if t.success {
            successes += 1;
            acceptance_counts[t.iterations_used] += 1;
            iteration_sum += t.iterations_used as u64;
            fidelity_sum += t.fidelity;
            min_fidelity = min_fidelity.min(t.fidelity);
            sample_trial.get_or_insert(i as u64);
        }
    }
    let n = trials as f64;
    let acceptance_rate = acceptance_counts.iter().map(|&c| c as f64 / n).collect();
    let mut survival = Vec::with_capacity(max + 1);
    let mut remaining = trials;
    for &c in &acceptance_counts {
        remaining -= c;
        survival.push(remaining as f64 / n);
    }
    let sample = sample_trial
        .map(|i| run_trial(s, cfg, &tables, &mut trial_rng(cfg.rng_seed, i)));
    Ok(EnsembleStats {
        trials,
        successes,
        failure_fraction: (trials - successes) as f64 / n,
        mean_iterations: if successes > 0 {
            iteration_sum as f64 / successes as f64
        } else {
            0.0
        },
        acceptance_counts,
        acceptance_rate,
        survival,
        mean_fidelity: if successes > 0 {
            fidelity_sum / successes as f64
        } else {
            0.0
        },
        min_fidelity: if successes > 0 { min_fidelity } else { 0.0 },
        sample,
        sample_trial,
    })
}

/// `|C₁ C₂|²`: reach `(N, 0)` from `(N_A, N_B)` and then `(N_X, N_Y)` from
/// `(N, 0)`, with `C₁ = sqrt(C(N, N_A)) r^{N_A} (-t*)^{N_B}` and
/// `C₂ = sqrt(C(N, N_X)) r^{N_X} t^{N_Y}`.
pub fn two_step_bound(
    n_a: usize,
    n_b: usize,
    n_x: usize,
    n_y: usize,
    p: &SplitterParams,
) -> Result<f64> {
    if p.is_trivial() {
        return Err(Error::domain("two-step bound needs a non-trivial splitter"));
    }
    let total = n_a + n_b;
    if n_x + n_y != total {
        return Err(Error::domain(format!(
            "target ({n_x},{n_y}) does not split N = {total}"
        )));
    }
    let (r, t) = (p.r(), p.t());
    let c1 = binomial(total, n_a).sqrt() * r.powu(n_a as u32) * (-t.conj()).powu(n_b as u32);
    let c2 = binomial(total, n_x).sqrt() * r.powu(n_x as u32) * t.powu(n_y as u32);
    Ok((c1 * c2).norm_sqr())
}

/// Smallest two-step bound over every starting sector.
pub fn min_two_step_bound(total: usize, target: (usize, usize), p: &SplitterParams) -> Result<f64> {
    let mut min = f64::INFINITY;
    for n_a in 0..=total {
        min = min.min(two_step_bound(n_a, total - n_a, target.0, target.1, p)?);
    }
    Ok(min)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::make_fock;

    #[test]
    fn sampling_is_inverse_cdf() {
        let p = [0.25, 0.0, 0.75];
        assert_eq!(sample_index(&p, 0.0), 0);
        assert_eq!(sample_index(&p, 0.2499), 0);
        assert_eq!(sample_index(&p, 0.25), 2);
        assert_eq!(sample_index(&p, 0.9999999), 2);
    }

    #[test]
    fn config_validation() {
        let s = make_fock(2, 3).unwrap();
        let cfg = ProtocolConfig::new((2, 2), SplitterParams::balanced(), 1);
        assert!(run_once(&s, &cfg).is_err());
        let cfg = ProtocolConfig::new((2, 1), SplitterParams::identity(), 1);
        assert!(run_once(&s, &cfg).is_err());
    }

    #[test]
    fn target_equal_to_start_accepts_immediately() {
        let s = make_fock(1, 3).unwrap();
        let cfg = ProtocolConfig::new((0, 3), SplitterParams::balanced(), 5);
        let r = run_once(&s, &cfg).unwrap();
        assert!(r.success && r.mirrored);
        assert_eq!(r.iterations_used, 0);
        assert!((r.fidelity_with_target - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_iterations_fail() {
        let s = make_fock(2, 3).unwrap();
        let cfg = ProtocolConfig::new((2, 1), SplitterParams::balanced(), 5).with_max_iterations(0);
        let r = run_once(&s, &cfg).unwrap();
        assert!(!r.success);
        assert!(r.trajectory.is_empty());
    }

    #[test]
    fn bound_examples() {
        let b = two_step_bound(2, 1, 2, 1, &SplitterParams::balanced()).unwrap();
        assert!((b - 9.0 / 64.0).abs() < 1e-15);
        let p = SplitterParams::from_angles(0.3, 0.2);
        let b = two_step_bound(3, 0, 3, 0, &p).unwrap();
        assert!((b - p.r().norm().powi(12)).abs() < 1e-15);
        assert!(two_step_bound(3, 0, 3, 0, &SplitterParams::identity()).is_err());
        let near = SplitterParams::from_angles(1e-3, 0.0);
        let b = two_step_bound(2, 1, 2, 1, &near).unwrap();
        assert!(b > 0.0 && b < 1e-10);
    }
}
