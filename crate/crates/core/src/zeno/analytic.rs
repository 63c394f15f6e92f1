use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{require_non_negative, Error, Result};

/// Finite-dimensional system prepared in the "undecayed" state `u`.
#[derive(Debug, Clone)]
pub struct DecaySystem {
    hamiltonian: DMatrix<Complex64>,
    undecayed: DVector<Complex64>,
    energies: Vec<f64>,
    weights: Vec<f64>,
}

impl DecaySystem {
    /// `u` is normalised on construction; `H` must be Hermitian to 1e-12.
    pub fn new(hamiltonian: DMatrix<Complex64>, undecayed: DVector<Complex64>) -> Result<Self> {
        if !hamiltonian.is_square() {
            return Err(Error::param("hamiltonian", "must be square"));
        }
        let d = hamiltonian.nrows();
        if undecayed.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: undecayed.len(),
            });
        }
        let residue = (&hamiltonian - hamiltonian.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if residue > 1e-12 {
            return Err(Error::NonHermitianInput(residue));
        }
        let norm = undecayed.norm();
        if !(norm > 1e-12) {
            return Err(Error::ZeroNorm);
        }
        let undecayed = undecayed / Complex64::from(norm);
        let eig = hamiltonian.clone().symmetric_eigen();
        let overlaps = eig.eigenvectors.adjoint() * &undecayed;
        Ok(Self {
            energies: eig.eigenvalues.iter().copied().collect(),
            weights: {
                let w: Vec<f64> = overlaps.iter().map(|c| c.norm_sqr()).collect();
                let total: f64 = w.iter().sum();
                w.iter().map(|x| x / total).collect()
            },
            hamiltonian,
            undecayed,
        })
    }

    /// Two-level system `H = V σ_x` starting in `|1⟩`.
    pub fn two_level(v: f64) -> Self {
        let z = Complex64::new(0.0, 0.0);
        let h = DMatrix::from_row_slice(2, 2, &[z, Complex64::from(v), Complex64::from(v), z]);
        let u = DVector::from_vec(vec![Complex64::new(1.0, 0.0), z]);
        Self::new(h, u).expect("two-level system is valid")
    }

    pub fn dim(&self) -> usize {
        self.undecayed.len()
    }

    pub fn hamiltonian(&self) -> &DMatrix<Complex64> {
        &self.hamiltonian
    }

    pub fn undecayed(&self) -> &DVector<Complex64> {
        &self.undecayed
    }
}

/// `P(t) = |⟨u|e^{-iHt}|u⟩|²` from the eigendecomposition of H.
pub fn survival_probability(sys: &DecaySystem, t: f64) -> f64 {
    if t == 0.0 {
        return 1.0;
    }
    let amp: Complex64 = sys
        .energies
        .iter()
        .zip(&sys.weights)
        .map(|(e, w)| Complex64::from_polar(*w, -e * t))
        .sum();
    amp.norm_sqr().clamp(0.0, 1.0)
}

/// `(ΔH)² = ⟨u|H²|u⟩ - ⟨u|H|u⟩²`.
pub fn energy_variance(sys: &DecaySystem) -> f64 {
    let hu = &sys.hamiltonian * &sys.undecayed;
    let mean = sys.undecayed.dotc(&hu).re;
    (hu.norm_squared() - mean * mean).max(0.0)
}

/// `P_N(t) = P(t/N)^N` for N ideal projections onto `u`.
///
/// `P_N ≥ P` holds while `ln P` is concave on `[0, t]` (short times, or a
/// two-level system before `Vt = π/2`). Near a revival of `P` the ordering
/// can reverse.
pub fn repeated_measurement_survival(sys: &DecaySystem, t: f64, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::param("N", "must be >= 1"));
    }
    Ok(survival_probability(sys, t / n as f64).powi(n as i32))
}

/// Exponential survival `e^{-Γt}`, identical for every number of observations.
pub fn classical_decay_survival(gamma: f64, t: f64, n: u32) -> Result<f64> {
    require_non_negative("gamma", gamma)?;
    if n == 0 {
        return Err(Error::param("N", "must be >= 1"));
    }
    Ok((-gamma * t).exp())
}
