//! Dense finite-dimensional Hilbert-space primitives.
//!
//! States are normalized complex amplitude vectors; operators are dense
//! complex matrices. Operator exponentials are evaluated through the
//! eigendecomposition of their Hermitian generator, which is exact up to
//! roundoff. Units use hbar = 1, so time and inverse energy are
//! interchangeable.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// State vectors stay within this distance of unit norm.
pub const NORM_TOL: f64 = 1e-9;
/// Elementwise tolerance for `U^H U = I` checks.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Elementwise tolerance for `H = H^H` checks.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// A normalized pure state of the internal dynamics.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: DVector<Complex64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, rescaling them to unit norm.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::from_column(DVector::from_vec(amplitudes))
    }

    pub(crate) fn from_column(column: DVector<Complex64>) -> Result<Self> {
        if column.len() < 2 {
            return Err(Error::DimensionTooSmall(column.len()));
        }
        let norm = column.norm();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::ZeroNorm(norm));
        }
        Ok(Self {
            amplitudes: column / Complex64::from(norm),
        })
    }

    /// Wraps an evolution result without renormalizing, so that norm drift
    /// stays observable.
    pub(crate) fn from_column_unchecked(column: DVector<Complex64>) -> Self {
        Self { amplitudes: column }
    }

    /// The computational basis state `e_index`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        if index >= dim {
            return Err(Error::InvalidParameter(format!(
                "basis index {index} out of range for dimension {dim}"
            )));
        }
        let mut v = DVector::zeros(dim);
        v[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }
}

/// Inner product `<a|b>`, conjugate-linear in the first argument.
pub fn overlap(a: &StateVector, b: &StateVector) -> Result<Complex64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(a.amplitudes.dotc(&b.amplitudes))
}

/// A Hermitian generator: the internal Hamiltonian or a kick phase operator.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: DMatrix<Complex64>,
}

impl HermitianOperator {
    /// Validates squareness and Hermiticity (within [`HERMITICITY_TOL`]).
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() < 2 {
            return Err(Error::DimensionTooSmall(matrix.nrows()));
        }
        let mut deviation = 0.0f64;
        for i in 0..matrix.nrows() {
            for j in i..matrix.ncols() {
                let d = (matrix[(i, j)] - matrix[(j, i)].conj()).norm();
                deviation = deviation.max(d);
            }
        }
        if !deviation.is_finite() || deviation > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                deviation,
                tolerance: HERMITICITY_TOL,
            });
        }
        Ok(Self { matrix })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        Ok(Self {
            matrix: DMatrix::zeros(dim, dim),
        })
    }

    /// Diagonal operator with real entries, e.g. a harmonic ladder.
    pub fn from_real_diagonal(entries: &[f64]) -> Result<Self> {
        if entries.len() < 2 {
            return Err(Error::DimensionTooSmall(entries.len()));
        }
        let diag = DVector::from_iterator(
            entries.len(),
            entries.iter().map(|&e| Complex64::new(e, 0.0)),
        );
        Ok(Self {
            matrix: DMatrix::from_diagonal(&diag),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }
}

/// Largest entry modulus of the commutator `[a, b] = ab - ba`.
pub fn commutator_max_abs(a: &HermitianOperator, b: &HermitianOperator) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let c = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    Ok(c.iter().map(Complex64::norm).fold(0.0, f64::max))
}

/// Eigendata of a Hermitian operator: ascending real eigenvalues and the
/// unitary matrix whose columns are the matching eigenvectors.
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Column `i` is the eigenvector of `eigenvalues()[i]`.
    pub fn eigenvectors(&self) -> &DMatrix<Complex64> {
        &self.eigenvectors
    }

    /// The eigenvector of the lowest eigenvalue.
    pub fn ground_state(&self) -> StateVector {
        let column = self.eigenvectors.column(0).into_owned();
        StateVector::from_column(column).expect("eigenvector column has unit norm")
    }
}

/// Full eigendecomposition of a Hermitian operator.
///
/// Non-Hermitian input is rejected at [`HermitianOperator`] construction,
/// so this operation itself cannot fail.
pub fn eigendecompose(h: &HermitianOperator) -> Spectrum {
    let eig = h.matrix().clone().symmetric_eigen();
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        eig.eigenvalues[a]
            .partial_cmp(&eig.eigenvalues[b])
            .expect("Hermitian eigenvalues are finite")
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut eigenvectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Spectrum {
        eigenvalues,
        eigenvectors,
    }
}

/// A unitary evolution operator: a free-flight propagator or a kick.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    matrix: DMatrix<Complex64>,
}

impl UnitaryOperator {
    /// Validates squareness and unitarity (within [`UNITARITY_TOL`]).
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        if matrix.nrows() < 2 {
            return Err(Error::DimensionTooSmall(matrix.nrows()));
        }
        let gram = matrix.adjoint() * &matrix;
        let mut deviation = 0.0f64;
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                let expected = if i == j {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                };
                deviation = deviation.max((gram[(i, j)] - expected).norm());
            }
        }
        if !deviation.is_finite() || deviation > UNITARITY_TOL {
            return Err(Error::NotUnitary {
                deviation,
                tolerance: UNITARITY_TOL,
            });
        }
        Ok(Self { matrix })
    }

    /// For products of already-validated unitaries.
    pub(crate) fn new_unchecked(matrix: DMatrix<Complex64>) -> Self {
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::DimensionTooSmall(dim));
        }
        Ok(Self {
            matrix: DMatrix::identity(dim, dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    /// Applies the operator to a state. The result is not renormalized;
    /// unitarity keeps the norm within [`NORM_TOL`] of 1.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if self.dim() != state.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: state.dim(),
            });
        }
        Ok(StateVector::from_column_unchecked(
            &self.matrix * state.amplitudes(),
        ))
    }

    /// `self * rhs`: apply `rhs` first, then `self`.
    pub fn compose(&self, rhs: &UnitaryOperator) -> Result<UnitaryOperator> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: rhs.dim(),
            });
        }
        Ok(Self::new_unchecked(&self.matrix * &rhs.matrix))
    }

    pub fn adjoint(&self) -> UnitaryOperator {
        Self::new_unchecked(self.matrix.adjoint())
    }
}

/// `exp(-i E_i dt)` phase factors for a spectrum.
pub(crate) fn phase_factors(energies: &[f64], dt: f64) -> Vec<Complex64> {
    energies
        .iter()
        .map(|&e| Complex64::from_polar(1.0, -e * dt))
        .collect()
}

pub(crate) fn propagator_from_spectrum(s: &Spectrum, dt: f64) -> UnitaryOperator {
    let v = s.eigenvectors();
    let phases = phase_factors(s.eigenvalues(), dt);
    // V diag(phases) V^H, built by scaling the columns of V.
    let mut scaled = v.clone();
    for (j, phase) in phases.iter().enumerate() {
        for value in scaled.column_mut(j).iter_mut() {
            *value *= phase;
        }
    }
    UnitaryOperator::new_unchecked(scaled * v.adjoint())
}

/// Free evolution under the decomposed Hamiltonian for a time `dt`:
/// `V diag(exp(-i E_i dt)) V^H`. Negative `dt` evolves backward.
pub fn free_propagator(s: &Spectrum, dt: f64) -> Result<UnitaryOperator> {
    if !dt.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "propagation time must be finite, got {dt}"
        )));
    }
    Ok(propagator_from_spectrum(s, dt))
}

/// Scatterer collision unitary `exp(-i F)` for a Hermitian phase
/// generator `F`, evaluated through the eigendecomposition of `F`.
pub fn kick_operator(f: &HermitianOperator) -> UnitaryOperator {
    propagator_from_spectrum(&eigendecompose(f), 1.0)
}
