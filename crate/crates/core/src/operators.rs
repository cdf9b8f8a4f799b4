//! Operators of the two-level truncated circuit.
//!
//! Single-qubit Paulis use `sigma_z = diag(+1, -1)` with `|0>` the first
//! basis vector. Extended operators are Kronecker products with qubit 1 on
//! the left, so the basis index is `2 n1 + n2`.

use log::info;
use nalgebra::{Matrix2, Matrix4, SymmetricEigen, Vector4};
use std::ops::{Index, Mul};

use crate::circuit::DerivedParams;
use crate::error::{Error, Result};
use crate::C64;

pub type ComplexMatrix2 = Matrix2<C64>;
pub type ComplexMatrix4 = Matrix4<C64>;

/// Relative Frobenius tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);
const I: C64 = C64::new(0.0, 1.0);

pub fn pauli_y() -> ComplexMatrix2 {
    Matrix2::new(ZERO, -I, I, ZERO)
}

pub fn pauli_z() -> ComplexMatrix2 {
    Matrix2::new(ONE, ZERO, ZERO, -ONE)
}

/// Returns `(sigma_y, sigma_z)` in the crate's convention.
pub fn pauli_conventions() -> (ComplexMatrix2, ComplexMatrix2) {
    (pauli_y(), pauli_z())
}

pub fn kron(a: &ComplexMatrix2, b: &ComplexMatrix2) -> ComplexMatrix4 {
    ComplexMatrix4::from_fn(|r, c| a[(r / 2, c / 2)] * b[(r % 2, c % 2)])
}

/// `op` acting on qubit 1 (left factor).
pub fn on_qubit1(op: &ComplexMatrix2) -> ComplexMatrix4 {
    kron(op, &Matrix2::identity())
}

/// `op` acting on qubit 2 (right factor).
pub fn on_qubit2(op: &ComplexMatrix2) -> ComplexMatrix4 {
    kron(&Matrix2::identity(), op)
}

/// Static Hamiltonian `-(w1/2) Z1 - (w2/2) Z2 + w_g Y1 Y2`.
pub fn build_h0(d: &DerivedParams) -> ComplexMatrix4 {
    let z1 = on_qubit1(&pauli_z());
    let z2 = on_qubit2(&pauli_z());
    let yy = kron(&pauli_y(), &pauli_y());
    z1 * C64::from(-0.5 * d.omega_1) + z2 * C64::from(-0.5 * d.omega_2) + yy * C64::from(d.omega_g)
}

/// Instantaneous drive amplitudes (rad/s) multiplying each qubit's `sigma_y`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DriveAmplitudes {
    pub qubit1: f64,
    pub qubit2: f64,
}

impl DriveAmplitudes {
    pub fn even(amplitude: f64) -> Self {
        DriveAmplitudes {
            qubit1: amplitude,
            qubit2: amplitude,
        }
    }

    pub fn odd(amplitude: f64) -> Self {
        DriveAmplitudes {
            qubit1: amplitude,
            qubit2: -amplitude,
        }
    }
}

impl From<crate::circuit::DriveCoefficients> for DriveAmplitudes {
    fn from(c: crate::circuit::DriveCoefficients) -> Self {
        DriveAmplitudes {
            qubit1: c.qubit1_total(),
            qubit2: c.qubit2_total(),
        }
    }
}

/// Drive Hamiltonian `a1 Y1 + a2 Y2`.
pub fn build_hd(amp: DriveAmplitudes) -> ComplexMatrix4 {
    on_qubit1(&pauli_y()) * C64::from(amp.qubit1) + on_qubit2(&pauli_y()) * C64::from(amp.qubit2)
}

/// `||H - H^dagger||_F / ||H||_F` (zero for the zero matrix).
pub fn hermitian_defect(h: &ComplexMatrix4) -> f64 {
    let scale = h.norm();
    if scale == 0.0 {
        return 0.0;
    }
    (h - h.adjoint()).norm() / scale
}

/// `||U^dagger U - I||_F`.
pub fn unitarity_defect(u: &ComplexMatrix4) -> f64 {
    (u.adjoint() * u - ComplexMatrix4::identity()).norm()
}

pub fn ensure_hermitian(h: &ComplexMatrix4) -> Result<()> {
    let defect = hermitian_defect(h);
    if defect.is_nan() || defect > HERMITIAN_TOLERANCE {
        return Err(Error::NotHermitian { defect });
    }
    Ok(())
}

/// Spectral decomposition `H = V diag(values) V^dagger` of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vector4<f64>,
    pub vectors: ComplexMatrix4,
}

impl HermitianEigen {
    pub fn new(h: &ComplexMatrix4) -> Result<Self> {
        ensure_hermitian(h)?;
        // Symmetrize so the solver sees an exactly Hermitian input.
        let h = (h + h.adjoint()) * C64::from(0.5);
        let eig = SymmetricEigen::new(h);
        Ok(HermitianEigen {
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    /// `exp(i s H)`.
    pub fn exp_i(&self, s: f64) -> ComplexMatrix4 {
        let phases =
            ComplexMatrix4::from_diagonal(&self.values.map(|v| C64::from_polar(1.0, s * v)));
        self.vectors * phases * self.vectors.adjoint()
    }

    pub fn sorted_values(&self) -> [f64; 4] {
        let mut v: [f64; 4] = self.values.into();
        v.sort_by(f64::total_cmp);
        v
    }
}

/// `exp(i s H)` for Hermitian `H`, computed through its eigendecomposition.
pub fn hermitian_expm(h: &ComplexMatrix4, s: f64) -> Result<ComplexMatrix4> {
    Ok(HermitianEigen::new(h)?.exp_i(s))
}

/// Tolerance on `| ||psi|| - 1 |` for a state vector.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Coefficients `[c00, c01, c10, c11]` of a two-qubit pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector(Vector4<C64>);

impl StateVector {
    /// Wraps `amplitudes`, rejecting vectors whose norm is not 1 within
    /// [`NORM_TOLERANCE`].
    pub fn new(amplitudes: [C64; 4]) -> Result<Self> {
        let v = Vector4::from(amplitudes);
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Precondition(format!("state norm {norm} is not 1")));
        }
        Ok(StateVector(v))
    }

    /// Normalizes an arbitrary non-zero vector. Logged, since it changes the
    /// caller's data.
    pub fn renormalized(amplitudes: [C64; 4]) -> Result<Self> {
        let v = Vector4::from(amplitudes);
        let norm = v.norm();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::Precondition(
                "cannot normalize a zero or non-finite state".into(),
            ));
        }
        info!("renormalizing state vector (norm was {norm})");
        Ok(StateVector(v / C64::from(norm)))
    }

    /// Unchecked wrap for vectors produced by unitary evolution.
    pub(crate) fn from_vector_unchecked(v: Vector4<C64>) -> Self {
        StateVector(v)
    }

    /// Basis state `|n1 n2>` with index `2 n1 + n2`.
    pub fn basis(index: usize) -> Self {
        assert!(index < 4, "basis index {index} out of range");
        let mut v = Vector4::zeros();
        v[index] = ONE;
        StateVector(v)
    }

    pub fn ground() -> Self {
        Self::basis(0)
    }

    pub fn as_vector(&self) -> &Vector4<C64> {
        &self.0
    }

    pub fn amplitudes(&self) -> [C64; 4] {
        self.0.into()
    }

    pub fn magnitudes(&self) -> [f64; 4] {
        self.0.map(|c| c.norm()).into()
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn with_global_phase(&self, phase: f64) -> Self {
        StateVector(self.0 * C64::from_polar(1.0, phase))
    }
}

impl Index<usize> for StateVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.0[i]
    }
}

impl Mul<&StateVector> for &ComplexMatrix4 {
    type Output = StateVector;

    fn mul(self, psi: &StateVector) -> StateVector {
        StateVector(self * psi.0)
    }
}
