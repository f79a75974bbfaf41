//! Independent oracles and random generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use modesplit::splitting::SplitterParams;
use modesplit::states::{ParticleState, TwoModeState};
use modesplit::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
}

pub fn random_state<R: Rng>(rng: &mut R, total: usize) -> TwoModeState {
    let amps = (0..=total).map(|_| random_complex(rng)).collect();
    TwoModeState::normalized(amps).unwrap()
}

/// Unitary `(r, t)` with both amplitudes bounded away from zero.
pub fn random_splitter<R: Rng>(rng: &mut R) -> SplitterParams {
    let theta: f64 = rng.random_range(0.1..1.47);
    let (pr, pt) = (rng.random_range(0.0..std::f64::consts::TAU), rng.random_range(0.0..std::f64::consts::TAU));
    SplitterParams::new(
        Complex64::from_polar(theta.cos(), pr),
        Complex64::from_polar(theta.sin(), pt),
    )
    .unwrap()
}

/// Random unit vector of `k` complex entries.
pub fn random_column<R: Rng>(rng: &mut R, k: usize) -> Vec<Complex64> {
    let v: Vec<Complex64> = (0..k).map(|_| random_complex(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Occupations `[down_K0, up_K0, down_K1, up_K1, ...]` over output modes.
pub type Occupation = Vec<usize>;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Expands `Σ_n φ_n a0†^n a1†^{N-n} / sqrt(n!(N-n)!) |vac>` with
/// `a_i† -> Σ_K α_K c_{K,i}†`, applying one creation operator at a time.
pub fn operator_expansion(phi: &[Complex64], alphas: &[Complex64]) -> BTreeMap<Occupation, Complex64> {
    let total = phi.len() - 1;
    let modes = alphas.len();
    let mut out: BTreeMap<Occupation, Complex64> = BTreeMap::new();
    for (n, &amp) in phi.iter().enumerate() {
        if amp.norm() == 0.0 {
            continue;
        }
        let mut state: BTreeMap<Occupation, Complex64> = BTreeMap::new();
        state.insert(vec![0; 2 * modes], amp / (factorial(n) * factorial(total - n)).sqrt());
        let levels = std::iter::repeat_n(0, n).chain(std::iter::repeat_n(1, total - n));
        for level in levels {
            let mut next = BTreeMap::new();
            for (occ, z) in &state {
                for (k, &alpha) in alphas.iter().enumerate() {
                    let slot = 2 * k + level;
                    let mut o = occ.clone();
                    o[slot] += 1;
                    *next.entry(o).or_insert(c(0.0, 0.0)) += z * alpha * (occ[slot] as f64 + 1.0).sqrt();
                }
            }
            state = next;
        }
        for (occ, z) in state {
            *out.entry(occ).or_insert(c(0.0, 0.0)) += z;
        }
    }
    out
}

/// `Σ_p σ_α^(p) / 2` applied to a first-quantization vector, `α = 0, 1, 2`
/// for `x, y, z`, using `σ_z|0> = -|0>` and `σ_+|0> = |1>`.
pub fn collective_apply(ps: &ParticleState, axis: usize) -> Vec<Complex64> {
    let n = ps.num_particles();
    let amps = ps.amplitudes();
    let mut out = vec![c(0.0, 0.0); amps.len()];
    for (idx, &z) in amps.iter().enumerate() {
        for p in 0..n {
            let mask = 1usize << (n - 1 - p);
            let up = idx & mask != 0;
            match axis {
                0 => out[idx ^ mask] += z * 0.5,
                // σ_y|0> = -i|1>, σ_y|1> = i|0> in this convention.
                1 => out[idx ^ mask] += z * c(0.0, if up { 0.5 } else { -0.5 }),
                _ => out[idx] += z * if up { 0.5 } else { -0.5 },
            }
        }
    }
    out
}

pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}
