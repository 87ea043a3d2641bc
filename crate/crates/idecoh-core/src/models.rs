//! Factories for internal Hamiltonians, kick phase generators, and
//! initial states.
//!
//! Two contrasting internal models are provided: an evenly spaced harmonic
//! ladder (integrable, Poisson level statistics) and a GOE random matrix
//! (chaotic, level repulsion). All factories are pure functions of their
//! spec and seeds, so repeated builds are bitwise identical. Every
//! generator produced here is real-symmetric, which keeps the whole
//! operator algebra invariant under complex conjugation (the anti-unitary
//! time-reversal operation).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::hilbert::{HermitianOperator, Spectrum, StateVector};

/// Which internal Hamiltonian to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    /// Evenly spaced ladder `E_i = i * scale`.
    Harmonic,
    /// Real-symmetric Gaussian ensemble draw.
    GoeRandomMatrix,
}

/// Internal-Hamiltonian specification.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub dim: usize,
    /// Level-spacing scale for the harmonic ladder; matrix-element
    /// standard deviation for the GOE draw.
    pub scale: f64,
    /// Ignored by the harmonic model.
    pub seed: u64,
}

impl ModelSpec {
    fn validate(&self) -> Result<()> {
        if self.dim < 2 {
            return Err(Error::DimensionTooSmall(self.dim));
        }
        if !self.scale.is_finite() || self.scale <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "model scale must be positive, got {}",
                self.scale
            )));
        }
        Ok(())
    }
}

/// Builds the internal Hamiltonian for a spec.
///
/// The GOE draw has independent off-diagonal entries of standard deviation
/// `scale` and diagonal entries of standard deviation `scale * sqrt(2)`.
pub fn build_hamiltonian(spec: &ModelSpec) -> Result<HermitianOperator> {
    spec.validate()?;
    match spec.kind {
        ModelKind::Harmonic => {
            let entries: Vec<f64> = (0..spec.dim).map(|i| i as f64 * spec.scale).collect();
            HermitianOperator::from_real_diagonal(&entries)
        }
        ModelKind::GoeRandomMatrix => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            let n = spec.dim;
            let mut m = DMatrix::<Complex64>::zeros(n, n);
            for i in 0..n {
                for j in i..n {
                    let g: f64 = rng.sample(StandardNormal);
                    let value = if i == j {
                        g * spec.scale * std::f64::consts::SQRT_2
                    } else {
                        g * spec.scale
                    };
                    m[(i, j)] = Complex64::new(value, 0.0);
                    m[(j, i)] = Complex64::new(value, 0.0);
                }
            }
            HermitianOperator::new(m)
        }
    }
}

/// Basis in which a kick generator is diagonal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KickBasis {
    /// Diagonal in the eigenbasis of the internal Hamiltonian, so the kick
    /// commutes with it.
    EigenbasisDiagonal,
    /// Diagonal in a seeded random orthogonal frame; generically does not
    /// commute with the Hamiltonian.
    Rotated { rotation_seed: u64 },
}

/// Kick phase-generator specification.
#[derive(Debug, Clone, PartialEq)]
pub struct KickGeneratorSpec {
    /// Dimensionless kick strength; generator eigenvalues are drawn
    /// uniformly from `[-strength, strength]`.
    pub strength: f64,
    pub basis: KickBasis,
    pub seed: u64,
}

/// Builds a kick phase generator against a decomposed internal Hamiltonian.
///
/// The generator is diagonal with entries uniform in
/// `[-strength, strength]`, expressed either in the Hamiltonian eigenbasis
/// (commuting case) or in a seeded random orthogonal frame (generic
/// non-commuting case).
pub fn build_kick(spec: &KickGeneratorSpec, spectrum: &Spectrum) -> Result<HermitianOperator> {
    if !spec.strength.is_finite() || spec.strength < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "kick strength must be nonnegative, got {}",
            spec.strength
        )));
    }
    let n = spectrum.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let diag: Vec<f64> = (0..n)
        .map(|_| rng.random_range(-1.0..1.0) * spec.strength)
        .collect();
    let frame: DMatrix<Complex64> = match spec.basis {
        KickBasis::EigenbasisDiagonal => spectrum.eigenvectors().clone(),
        KickBasis::Rotated { rotation_seed } => {
            let q = random_orthogonal(n, rotation_seed);
            q.map(|x| Complex64::new(x, 0.0))
        }
    };
    let d = DMatrix::from_diagonal(&DVector::from_iterator(
        n,
        diag.iter().map(|&x| Complex64::new(x, 0.0)),
    ));
    let raw = &frame * d * frame.adjoint();
    // symmetrize away the last-ulp asymmetry of the triple product
    let herm = (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0);
    HermitianOperator::new(herm)
}

/// Haar-ish random orthogonal matrix: QR of a Gaussian draw with the sign
/// of the R diagonal folded into Q.
fn random_orthogonal(n: usize, seed: u64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = DMatrix::<f64>::from_fn(n, n, |_, _| rng.sample(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for value in q.column_mut(j).iter_mut() {
                *value = -*value;
            }
        }
    }
    q
}

/// Initial internal-state selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitialStateSpec {
    /// Eigenvector of the lowest internal eigenvalue.
    GroundState,
    /// Computational basis state `e_index`.
    BasisState { index: usize },
    /// Seeded complex-Gaussian vector, normalized.
    RandomVector { seed: u64 },
}

/// Builds the initial internal state for a decomposed Hamiltonian.
pub fn initial_state(spec: &InitialStateSpec, spectrum: &Spectrum) -> Result<StateVector> {
    match *spec {
        InitialStateSpec::GroundState => Ok(spectrum.ground_state()),
        InitialStateSpec::BasisState { index } => StateVector::basis_state(spectrum.dim(), index),
        InitialStateSpec::RandomVector { seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let v: Vec<Complex64> = (0..spectrum.dim())
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect();
            StateVector::new(v)
        }
    }
}

/// Derives a decorrelated sub-seed from a master seed and an index.
///
/// SplitMix64 finalizer; used wherever per-item seeds must depend only on
/// the item index, never on draw order.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master
        .wrapping_add(0x9e3779b97f4a7c15u64.wrapping_mul(index.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Convenience wrapper used by ensemble code: an RNG for sample `index`
/// under a master seed, independent of every other sample's RNG.
pub(crate) fn sample_rng(master: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    // burn one word so stream 0 differs from the unstreamed generator
    rng.next_u64();
    rng
}
