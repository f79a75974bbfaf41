//! The mode-mixing conditions on the pseudo-labelled `N`-particle space.
//!
//! Each particle carries an internal level `i ∈ {0, 1}` and a mode label
//! (`A`/`B` before mixing, `C`/`D` after). Its local index is
//! `2 * mode + internal`; the global index is base 4 with particle 0 most
//! significant.

use std::collections::BTreeMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{characterize_with_tolerance, sectors, Diagnostic, MixingMap, SectorPair};
use crate::numeric::{multinomial_exact, split_amplitude};
use crate::{Error, Result, EPS_NORM};

use num_traits::ToPrimitive;

/// Largest `N` accepted by [`check_theorem1a`] (`4^6 = 4096` basis states).
pub const MAX_PARTICLES: usize = 6;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense linear map from the input to the output `N`-particle space.
#[derive(Debug, Clone, PartialEq)]
pub struct ParticleMap {
    num_particles: usize,
    matrix: DMatrix<Complex64>,
}

impl ParticleMap {
    pub fn new(num_particles: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        let dim = 1usize << (2 * num_particles);
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::domain(format!(
                "particle map on N = {num_particles} must be {dim}x{dim}"
            )));
        }
        Ok(Self {
            num_particles,
            matrix,
        })
    }

    /// `[M^(1)]^{⊗N}` with `M^(1) = Σ_i Σ_{K,L} C_KL |i;K><i;L|`, where
    /// `single[K][L]` maps input mode `L` to output mode `K`.
    pub fn tensor_power(single: &[[Complex64; 2]; 2], num_particles: usize) -> Self {
        let mut local = DMatrix::<Complex64>::zeros(4, 4);
        for k in 0..2 {
            for l in 0..2 {
                for i in 0..2 {
                    local[(2 * k + i, 2 * l + i)] = single[k][l];
                }
            }
        }
        let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for _ in 0..num_particles {
            m = m.kronecker(&local);
        }
        Self {
            num_particles,
            matrix: m,
        }
    }

    pub fn identity(num_particles: usize) -> Self {
        let dim = 1usize << (2 * num_particles);
        Self {
            num_particles,
            matrix: DMatrix::identity(dim, dim),
        }
    }

    /// `σ_p^+` (or `σ_p^-`) on particle `p`, with mode labels carried over
    /// unchanged.
    pub fn sigma(p: usize, raising: bool, num_particles: usize) -> Self {
        let dim = 1usize << (2 * num_particles);
        let stride = 1usize << (2 * (num_particles - 1 - p));
        let mut m = DMatrix::zeros(dim, dim);
        for col in 0..dim {
            let internal = (col / stride) & 1;
            match (raising, internal) {
                (true, 0) => m[(col + stride, col)] = Complex64::new(1.0, 0.0),
                (false, 1) => m[(col - stride, col)] = Complex64::new(1.0, 0.0),
                _ => {}
            }
        }
        Self {
            num_particles,
            matrix: m,
        }
    }

    pub fn num_particles(&self) -> usize {
        self.num_particles
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// `self + factor * other`.
    pub fn plus_scaled(&self, other: &ParticleMap, factor: Complex64) -> ParticleMap {
        ParticleMap {
            num_particles: self.num_particles,
            matrix: &self.matrix + &other.matrix * factor,
        }
    }
}

/// First non-zero entry of `[M, σ_p^±]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorViolation {
    pub particle: usize,
    pub raising: bool,
    pub row: usize,
    pub col: usize,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Theorem1aReport {
    pub commutes: bool,
    pub commutator_violation: Option<CommutatorViolation>,
    /// `C{N}` per block when the induced sector blocks are identity multiples.
    pub coefficients: Option<BTreeMap<SectorPair, Complex64>>,
    pub block_diagnostic: Option<Diagnostic>,
    /// Sector blocks induced on symmetric states (present once commutation holds).
    pub induced: Option<MixingMap>,
}

impl Theorem1aReport {
    pub fn passed(&self) -> bool {
        self.commutes && self.coefficients.is_some()
    }
}

fn find_commutator_violation(map: &ParticleMap, tol: f64) -> Option<CommutatorViolation> {
    let n = map.num_particles;
    let dim = map.matrix.nrows();
    let m = &map.matrix;
    for p in 0..n {
        let stride = 1usize << (2 * (n - 1 - p));
        let bit = |idx: usize| (idx / stride) & 1;
        for raising in [true, false] {
            for a in 0..dim {
                for b in 0..dim {
                    // (M σ)[a,b] - (σ M)[a,b]
                    let m_sigma = match (raising, bit(b)) {
                        (true, 0) => m[(a, b + stride)],
                        (false, 1) => m[(a, b - stride)],
                        _ => ZERO,
                    };
                    let sigma_m = match (raising, bit(a)) {
                        (true, 1) => m[(a - stride, b)],
                        (false, 0) => m[(a + stride, b)],
                        _ => ZERO,
                    };
                    let magnitude = (m_sigma - sigma_m).norm();
                    if magnitude > tol {
                        return Some(CommutatorViolation {
                            particle: p,
                            raising,
                            row: a,
                            col: b,
                            magnitude,
                        });
                    }
                }
            }
        }
    }
    None
}

/// `|n, N-n>_{(N_X, N_Y)}` in the pseudo-labelled space: a sum of symmetrized
/// products with per-label counts `(X0, X1, Y0, Y1)`.
fn sector_vector(n: usize, sector: (usize, usize)) -> DVector<Complex64> {
    let (n_x, n_y) = sector;
    let total = n_x + n_y;
    let dim = 1usize << (2 * total);
    let mut v = DVector::zeros(dim);
    for idx in 0..dim {
        let mut counts = [0usize; 4];
        let mut rest = idx;
        for _ in 0..total {
            counts[rest & 3] += 1;
            rest >>= 2;
        }
        if counts[0] + counts[1] != n_x || counts[2] + counts[3] != n_y || counts[0] + counts[2] != n
        {
            continue;
        }
        let multiplicity = multinomial_exact(&counts).to_f64().expect("small N");
        let lambda = split_amplitude(&[n_x, n_y], &[counts[0], counts[2]]);
        v[idx] = Complex64::new(lambda / multiplicity.sqrt(), 0.0);
    }
    v
}

/// Checks `[M, σ_p^±] = 0` for every particle and, when it holds, that the
/// induced sector blocks are `C{N}` times the identity.
pub fn check_theorem1a(map: &ParticleMap, tol: f64) -> Result<Theorem1aReport> {
    let n = map.num_particles;
    if n > MAX_PARTICLES {
        return Err(Error::Resource(format!(
            "first-quantization map check is limited to N <= {MAX_PARTICLES}"
        )));
    }
    let tol = if tol > 0.0 { tol } else { EPS_NORM };
    if let Some(v) = find_commutator_violation(map, tol) {
        return Ok(Theorem1aReport {
            commutes: false,
            commutator_violation: Some(v),
            coefficients: None,
            block_diagnostic: None,
            induced: None,
        });
    }
    let basis: BTreeMap<((usize, usize), usize), DVector<Complex64>> = sectors(n)
        .flat_map(|s| (0..=n).map(move |k| (s, k)))
        .map(|(s, k)| ((s, k), sector_vector(k, s)))
        .collect();
    let mut induced = MixingMap::new(n);
    for input in sectors(n) {
        let images: Vec<DVector<Complex64>> = (0..=n)
            .map(|k| &map.matrix * &basis[&(input, k)])
            .collect();
        for output in sectors(n) {
            let block = DMatrix::from_fn(n + 1, n + 1, |row, col| {
                basis[&(output, row)].dotc(&images[col])
            });
            induced
                .insert_block(SectorPair::new(input, output), block)
                .expect("consistent shapes");
        }
    }
    let (coefficients, block_diagnostic) = match characterize_with_tolerance(&induced, tol) {
        Ok(c) => (Some(c), None),
        Err(d) => (None, Some(d)),
    };
    Ok(Theorem1aReport {
        commutes: true,
        commutator_violation: None,
        coefficients,
        block_diagnostic,
        induced: Some(induced),
    })
}
