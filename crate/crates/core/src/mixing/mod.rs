//! Mode-mixing maps between two-mode sector spaces.
//!
//! A particle-preserving map `M` from modes `(A, B)` to modes `(C, D)` is
//! stored as blocks `M^{N}` indexed by input sector `(N_A, N_B)` and output
//! sector `(N_C, N_D)`. Each block acts on the symmetric coordinates
//! `n = 0..=N` of `|n, N-n>_{(., .)}`. A map commutes with collective
//! excitation `J+` and de-excitation `J-` exactly when every block is a
//! multiple `C{N}` of the identity.

mod evolve;
pub mod mapfile;
mod particle;

use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub use evolve::{
    evolve_joint, induced_map, induced_map_from_modes, mixing_coefficient, sector_basis_state,
    transform_joint, JointModeState,
};
pub use particle::{check_theorem1a, CommutatorViolation, ParticleMap, Theorem1aReport};

use crate::{Error, Result, EPS_NORM};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Input and output local particle numbers `(N_A, N_B; N_C, N_D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SectorPair {
    pub input: (usize, usize),
    pub output: (usize, usize),
}

impl SectorPair {
    pub fn new(input: (usize, usize), output: (usize, usize)) -> Self {
        Self { input, output }
    }

    pub fn total_particles(&self) -> usize {
        self.input.0 + self.input.1
    }
}

impl fmt::Display for SectorPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{};{},{})",
            self.input.0, self.input.1, self.output.0, self.output.1
        )
    }
}

/// All sectors `(k, N-k)` for `k = 0..=N`, ascending in the first mode.
pub fn sectors(total: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=total).map(move |k| (k, total - k))
}

/// Block-structured particle-preserving map. Absent blocks are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingMap {
    total_particles: usize,
    blocks: BTreeMap<SectorPair, DMatrix<Complex64>>,
}

impl MixingMap {
    pub fn new(total_particles: usize) -> Self {
        Self {
            total_particles,
            blocks: BTreeMap::new(),
        }
    }

    /// Map whose every listed block is `C{N}` times the identity.
    pub fn from_coefficients(
        total_particles: usize,
        coefficients: &BTreeMap<SectorPair, Complex64>,
    ) -> Result<Self> {
        let mut map = Self::new(total_particles);
        let dim = total_particles + 1;
        for (&pair, &c) in coefficients {
            map.insert_block(pair, DMatrix::from_diagonal_element(dim, dim, c))?;
        }
        Ok(map)
    }

    /// Identity on matching sectors.
    pub fn identity(total_particles: usize) -> Self {
        let coefficients = sectors(total_particles)
            .map(|s| (SectorPair::new(s, s), Complex64::new(1.0, 0.0)))
            .collect();
        Self::from_coefficients(total_particles, &coefficients).expect("valid sectors")
    }

    pub fn total_particles(&self) -> usize {
        self.total_particles
    }

    pub fn insert_block(&mut self, pair: SectorPair, block: DMatrix<Complex64>) -> Result<()> {
        let n = self.total_particles;
        if pair.input.0 + pair.input.1 != n || pair.output.0 + pair.output.1 != n {
            return Err(Error::domain(format!(
                "block {pair} does not preserve N = {n}"
            )));
        }
        if block.nrows() != n + 1 || block.ncols() != n + 1 {
            return Err(Error::domain(format!(
                "block {pair} must be {0}x{0}, got {1}x{2}",
                n + 1,
                block.nrows(),
                block.ncols()
            )));
        }
        self.blocks.insert(pair, block);
        Ok(())
    }

    pub fn block(&self, pair: &SectorPair) -> Option<&DMatrix<Complex64>> {
        self.blocks.get(pair)
    }

    pub fn block_mut(&mut self, pair: &SectorPair) -> Option<&mut DMatrix<Complex64>> {
        self.blocks.get_mut(pair)
    }

    pub fn blocks(&self) -> &BTreeMap<SectorPair, DMatrix<Complex64>> {
        &self.blocks
    }

    /// Apply to a state given as symmetric coordinates in one input sector;
    /// returns the output coordinates per output sector.
    pub fn apply(
        &self,
        input: (usize, usize),
        coords: &[Complex64],
    ) -> BTreeMap<(usize, usize), Vec<Complex64>> {
        let v = nalgebra::DVector::from_column_slice(coords);
        self.blocks
            .iter()
            .filter(|(pair, _)| pair.input == input)
            .map(|(pair, block)| (pair.output, (block * &v).iter().copied().collect()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    /// `J+ = a_0 a_1† + b_0 b_1†`: turns one spin-down particle into spin-up.
    Raise,
    /// `J- = (J+)†`.
    Lower,
}

impl fmt::Display for LadderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LadderKind::Raise => "J+",
            LadderKind::Lower => "J-",
        })
    }
}

/// Collective ladder operator on `span{|n, N-n>}` of any sector.
#[derive(Debug, Clone, PartialEq)]
pub struct CollectiveLadder {
    pub which: LadderKind,
    pub matrix: DMatrix<Complex64>,
}

/// `J+ |n, N-n> = sqrt(n (N-n+1)) |n-1, N-n+1>`, and its adjoint. The same
/// matrix applies in every sector `(N_X, N_Y)`.
pub fn ladder_on_sector(which: LadderKind, total: usize) -> CollectiveLadder {
    let mut raise = DMatrix::<Complex64>::zeros(total + 1, total + 1);
    for n in 1..=total {
        raise[(n - 1, n)] = Complex64::new(((n * (total - n + 1)) as f64).sqrt(), 0.0);
    }
    let matrix = match which {
        LadderKind::Raise => raise,
        LadderKind::Lower => raise.adjoint(),
    };
    CollectiveLadder { which, matrix }
}

/// Why a map is not a mode-mixing map, located to a single entry.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    /// `(M J - J M)[row, col]` is non-zero in a block.
    Commutator {
        pair: SectorPair,
        ladder: LadderKind,
        row: usize,
        col: usize,
        magnitude: f64,
    },
    /// A block differs from `C{N}` times the identity.
    NotIdentity {
        pair: SectorPair,
        row: usize,
        col: usize,
        value: Complex64,
        expected: Complex64,
    },
    /// `M_{m+1,n+1} != M_{m,n} sqrt((n+1)(N-n) / ((m+1)(N-m)))`.
    Recurrence {
        pair: SectorPair,
        m: usize,
        n: usize,
        lhs: Complex64,
        rhs: Complex64,
    },
    /// `M_{mn} [n(N-n+1) - m(N-m+1)] != 0`.
    RootStructure {
        pair: SectorPair,
        m: usize,
        n: usize,
        magnitude: f64,
    },
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::Commutator {
                pair,
                ladder,
                row,
                col,
                magnitude,
            } => write!(
                f,
                "block {pair}: [M, {ladder}] entry ({row},{col}) has magnitude {magnitude:e}"
            ),
            Diagnostic::NotIdentity {
                pair,
                row,
                col,
                value,
                expected,
            } => write!(
                f,
                "block {pair}: entry ({row},{col}) = {value} but C{{N}}*identity gives {expected}"
            ),
            Diagnostic::Recurrence {
                pair,
                m,
                n,
                lhs,
                rhs,
            } => write!(
                f,
                "block {pair}: recurrence fails at (m,n)=({m},{n}): {lhs} vs {rhs}"
            ),
            Diagnostic::RootStructure {
                pair,
                m,
                n,
                magnitude,
            } => write!(
                f,
                "block {pair}: root condition fails at (m,n)=({m},{n}) with magnitude {magnitude:e}"
            ),
        }
    }
}

impl std::error::Error for Diagnostic {}

impl From<Diagnostic> for Error {
    fn from(d: Diagnostic) -> Self {
        Error::Characterization(d.to_string())
    }
}

/// Outcome of the commutation test.
#[derive(Debug, Clone, PartialEq)]
pub struct MixingCheck {
    pub is_mixing: bool,
    /// First violated entry, in block order, `J+` before `J-`, row-major.
    pub violation: Option<Diagnostic>,
}

pub fn is_mode_mixing(m: &MixingMap) -> MixingCheck {
    is_mode_mixing_with_tolerance(m, EPS_NORM)
}

/// `M J±_AB = J±_CD M`. Both ladders preserve sectors and act identically in
/// each, so the test is block-wise `[M^{N}, J±] = 0`.
pub fn is_mode_mixing_with_tolerance(m: &MixingMap, tol: f64) -> MixingCheck {
    let n = m.total_particles;
    let ladders = [
        ladder_on_sector(LadderKind::Raise, n),
        ladder_on_sector(LadderKind::Lower, n),
    ];
    for (&pair, block) in &m.blocks {
        for ladder in &ladders {
            let comm = block * &ladder.matrix - &ladder.matrix * block;
            for row in 0..=n {
                for col in 0..=n {
                    let magnitude = comm[(row, col)].norm();
                    if magnitude > tol {
                        return MixingCheck {
                            is_mixing: false,
                            violation: Some(Diagnostic::Commutator {
                                pair,
                                ladder: ladder.which,
                                row,
                                col,
                                magnitude,
                            }),
                        };
                    }
                }
            }
        }
    }
    MixingCheck {
        is_mixing: true,
        violation: None,
    }
}

/// Entry-wise check of the `J+` recurrence on one block.
pub fn check_recurrence(
    pair: SectorPair,
    block: &DMatrix<Complex64>,
    tol: f64,
) -> std::result::Result<(), Diagnostic> {
    let n_tot = block.nrows() - 1;
    for m in 0..n_tot {
        for n in 0..n_tot {
            let factor =
                (((n + 1) * (n_tot - n)) as f64 / ((m + 1) * (n_tot - m)) as f64).sqrt();
            let lhs = block[(m + 1, n + 1)];
            let rhs = block[(m, n)] * factor;
            if (lhs - rhs).norm() > tol {
                return Err(Diagnostic::Recurrence { pair, m, n, lhs, rhs });
            }
        }
    }
    Ok(())
}

/// Entry-wise check of `M_{mn} [n(N-n+1) - m(N-m+1)] = 0`, the consequence of
/// commuting with `J- J+`.
pub fn check_root_structure(
    pair: SectorPair,
    block: &DMatrix<Complex64>,
    tol: f64,
) -> std::result::Result<(), Diagnostic> {
    let n_tot = block.nrows() - 1;
    let eig = |k: usize| (k * (n_tot + 1 - k)) as f64;
    for m in 0..=n_tot {
        for n in 0..=n_tot {
            let magnitude = (block[(m, n)] * (eig(n) - eig(m))).norm();
            if magnitude > tol {
                return Err(Diagnostic::RootStructure { pair, m, n, magnitude });
            }
        }
    }
    Ok(())
}

pub fn characterize(m: &MixingMap) -> std::result::Result<BTreeMap<SectorPair, Complex64>, Diagnostic> {
    characterize_with_tolerance(m, EPS_NORM)
}

/// Extracts `C{N}` per block after confirming commutation, identity form and
/// the recurrence independently.
pub fn characterize_with_tolerance(
    m: &MixingMap,
    tol: f64,
) -> std::result::Result<BTreeMap<SectorPair, Complex64>, Diagnostic> {
    if let Some(violation) = is_mode_mixing_with_tolerance(m, tol).violation {
        return Err(violation);
    }
    let dim = m.total_particles + 1;
    let mut out = BTreeMap::new();
    for (&pair, block) in &m.blocks {
        let c = block.diagonal().iter().sum::<Complex64>() / dim as f64;
        for row in 0..dim {
            for col in 0..dim {
                let expected = if row == col { c } else { ZERO };
                let value = block[(row, col)];
                if (value - expected).norm() > tol {
                    return Err(Diagnostic::NotIdentity {
                        pair,
                        row,
                        col,
                        value,
                        expected,
                    });
                }
            }
        }
        check_recurrence(pair, block, tol)?;
        out.insert(pair, c);
    }
    Ok(out)
}

/// A map is non-trivial when some input sector feeds at least two output
/// sectors with `|C{N}| > EPS_NORM`.
pub fn is_nontrivial(coefficients: &BTreeMap<SectorPair, Complex64>) -> bool {
    let mut fan_out: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (pair, c) in coefficients {
        if c.norm() > EPS_NORM {
            *fan_out.entry(pair.input).or_default() += 1;
        }
    }
    fan_out.values().any(|&k| k >= 2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_examples() {
        let jp = ladder_on_sector(LadderKind::Raise, 1);
        // |1,0> is coordinate 1; J+ sends it to |0,1>.
        assert_eq!(jp.matrix[(0, 1)], Complex64::new(1.0, 0.0));
        let n_tot = 5;
        let jp = ladder_on_sector(LadderKind::Raise, n_tot);
        let jm = ladder_on_sector(LadderKind::Lower, n_tot);
        assert_eq!(jm.matrix, jp.matrix.adjoint());
        // J+ annihilates |0, N>.
        assert!(jp.matrix.column(0).iter().all(|z| z.norm() == 0.0));
        let prod = &jm.matrix * &jp.matrix;
        for n in 0..=n_tot {
            let expected = (n * (n_tot - n + 1)) as f64;
            assert!((prod[(n, n)].re - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_blocks_characterize() {
        let map = MixingMap::identity(3);
        assert!(is_mode_mixing(&map).is_mixing);
        let coeffs = characterize(&map).unwrap();
        for (pair, c) in coeffs {
            assert_eq!(pair.input, pair.output);
            assert!((c - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn perturbation_is_located() {
        let mut map = MixingMap::identity(3);
        let pair = SectorPair::new((1, 2), (1, 2));
        map.block_mut(&pair).unwrap()[(0, 2)] += Complex64::new(1e-3, 0.0);
        let check = is_mode_mixing(&map);
        assert!(!check.is_mixing);
        match check.violation.unwrap() {
            Diagnostic::Commutator { pair: p, .. } => assert_eq!(p, pair),
            other => panic!("unexpected diagnostic {other:?}"),
        }
        assert!(characterize(&map).is_err());
    }

    #[test]
    fn block_shape_is_validated() {
        let mut map = MixingMap::new(2);
        let pair = SectorPair::new((1, 1), (2, 0));
        assert!(map.insert_block(pair, DMatrix::zeros(2, 2)).is_err());
        assert!(map
            .insert_block(SectorPair::new((1, 1), (2, 1)), DMatrix::zeros(3, 3))
            .is_err());
        assert!(map.insert_block(pair, DMatrix::zeros(3, 3)).is_ok());
    }

    #[test]
    fn nontrivial_needs_two_outputs() {
        let id = characterize(&MixingMap::identity(2)).unwrap();
        assert!(!is_nontrivial(&id));
        let mut two = id.clone();
        two.insert(SectorPair::new((2, 0), (1, 1)), Complex64::new(0.5, 0.0));
        assert!(is_nontrivial(&two));
    }
}
