use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::qcore::DensityMatrix;

/// Two-level molecule with energy eigenstates `|1⟩` (E₁ = 0) and `|2⟩`
/// (E₂ = Δ), dephased in the chiral basis at rate `lambda_env`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChiralModel {
    pub delta: f64,
    pub lambda_env: f64,
}

impl ChiralModel {
    pub fn new(delta: f64, lambda_env: f64) -> Result<Self> {
        Ok(Self {
            delta: require_positive("delta", delta)?,
            lambda_env: require_non_negative("lambda_env", lambda_env)?,
        })
    }

    /// Tunneling period `2π/Δ`.
    pub fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.delta
    }

    pub fn hamiltonian(&self) -> DMatrix<Complex64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(self.delta, 0.0),
        ]))
    }
}

/// `|L⟩ = (|1⟩+|2⟩)/√2`, `|R⟩ = (|1⟩-|2⟩)/√2` as energy-basis amplitudes.
pub fn chiral_states(delta: f64) -> Result<([Complex64; 2], [Complex64; 2])> {
    require_positive("delta", delta)?;
    let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
    Ok(([a, a], [a, -a]))
}

/// Basis change between energy and chiral bases (its own inverse).
fn hadamard(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let h = DMatrix::from_row_slice(
        2,
        2,
        &[1.0, 1.0, 1.0, -1.0].map(|v| Complex64::new(v * FRAC_1_SQRT_2, 0.0)),
    );
    &h * m * &h
}

/// Fundamental solutions of `z̈ + λż + Δ²z = 0`: returns `(f, g, ḟ, ġ)` with
/// `f(0) = 1, ḟ(0) = 0, g(0) = 0, ġ(0) = 1`.
fn damped_oscillator(delta: f64, lambda: f64, t: f64) -> (f64, f64, f64, f64) {
    let s = 0.5 * lambda;
    let d2 = delta * delta;
    let (f, g, gdot);
    if s < delta {
        let w = (d2 - s * s).sqrt();
        let e = (-s * t).exp();
        let (sin, cos) = (w * t).sin_cos();
        g = e * sin / w;
        gdot = e * (cos - s * sin / w);
        f = e * (cos + s * sin / w);
    } else if s > delta {
        let k = (s * s - d2).sqrt();
        // slow and fast roots, the slow one computed without cancellation
        let r_slow = -d2 / (s + k);
        let r_fast = -(s + k);
        let (es, ef) = ((r_slow * t).exp(), (r_fast * t).exp());
        g = (es - ef) / (2.0 * k);
        gdot = (r_slow * es - r_fast * ef) / (2.0 * k);
        f = ((s + k) * es - (s - k) * ef) / (2.0 * k);
    } else {
        let e = (-s * t).exp();
        g = t * e;
        gdot = (1.0 - s * t) * e;
        f = (1.0 + s * t) * e;
    }
    (f, g, -d2 * g, gdot)
}

/// Closed-form evolution of an energy-basis 2×2 density matrix.
///
/// In the chiral basis the Bloch vector obeys `ẋ = -λx`, `ẏ = Δz - λy`,
/// `ż = -Δy`, with `z = ρ_LL - ρ_RR`.
pub fn evolve_chiral(model: &ChiralModel, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    if rho0.grid().is_some() || rho0.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: rho0.dim(),
        });
    }
    require_non_negative("t", t)?;
    let lr = hadamard(rho0.elements());
    let x0 = 2.0 * lr[(0, 1)].re;
    let y0 = -2.0 * lr[(0, 1)].im;
    let z0 = (lr[(0, 0)] - lr[(1, 1)]).re;
    let (delta, lambda) = (model.delta, model.lambda_env);

    let zdot0 = -delta * y0;
    let (f, g, fdot, gdot) = damped_oscillator(delta, lambda, t);
    let z = z0 * f + zdot0 * g;
    let zdot = z0 * fdot + zdot0 * gdot;
    let y = -zdot / delta;
    let x = x0 * (-lambda * t).exp();

    let half = Complex64::new(0.5, 0.0);
    let off = half * Complex64::new(x, -y);
    let out = DMatrix::from_row_slice(2, 2, &[half * (1.0 + z), off, off.conj(), half * (1.0 - z)]);
    DensityMatrix::discrete(hadamard(&out))
}

/// `⟨L|ρ|L⟩` for an energy-basis density matrix.
pub fn left_population(rho: &DensityMatrix) -> f64 {
    let m = rho.elements();
    (0.5 * (m[(0, 0)] + m[(1, 1)] + m[(0, 1)] + m[(1, 0)]).re).clamp(0.0, 1.0)
}

/// `|L⟩⟨L|` in the energy basis.
pub fn left_state_density() -> DensityMatrix {
    let (l, _) = chiral_states(1.0).expect("unit splitting");
    DensityMatrix::pure_discrete(&l).expect("normalised")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chiral_basis() {
        let (l, r) = chiral_states(2.0).unwrap();
        let overlap = l[0].conj() * r[0] + l[1].conj() * r[1];
        assert_eq!(overlap, Complex64::new(0.0, 0.0));
        let one = [(l[0] + r[0]) * FRAC_1_SQRT_2, (l[1] + r[1]) * FRAC_1_SQRT_2];
        assert!((one[0] - 1.0).norm() < 1e-15 && one[1].norm() < 1e-15);
        let delta = 2.0;
        let energy = l[1].norm_sqr() * delta;
        assert!((energy - delta / 2.0).abs() < 1e-15);
    }

    #[test]
    fn free_tunneling() {
        let m = ChiralModel::new(1.3, 0.0).unwrap();
        let rho0 = left_state_density();
        for t in [0.0, 0.5, 1.7, 4.2] {
            let p = left_population(&evolve_chiral(&m, &rho0, t).unwrap());
            assert!((p - (1.3 * t / 2.0).cos().powi(2)).abs() < 1e-13);
        }
    }

    #[test]
    fn ground_state_stationary() {
        let m = ChiralModel::new(1.0, 0.0).unwrap();
        let g = DensityMatrix::pure_discrete(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)])
            .unwrap();
        let out = evolve_chiral(&m, &g, 7.3).unwrap();
        assert!(
            (out.elements() - g.elements())
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
                < 1e-14
        );
    }

    #[test]
    fn damping_regimes_are_continuous() {
        let d = 1.0;
        for t in [0.3, 2.0, 9.0] {
            let below = damped_oscillator(d, 2.0 - 1e-7, t);
            let crit = damped_oscillator(d, 2.0, t);
            let above = damped_oscillator(d, 2.0 + 1e-7, t);
            for (a, b) in [
                (below.0, crit.0),
                (above.0, crit.0),
                (below.1, crit.1),
                (above.1, crit.1),
            ] {
                assert!((a - b).abs() < 1e-5);
            }
        }
    }

    #[test]
    fn strong_monitoring_freezes() {
        let m = ChiralModel::new(1.0, 1e4).unwrap();
        let rho0 = left_state_density();
        let out = evolve_chiral(&m, &rho0, m.period()).unwrap();
        assert!(1.0 - left_population(&out) < 1e-3);
        let huge = ChiralModel::new(1.0, 1e12).unwrap();
        let far = evolve_chiral(&huge, &rho0, 1e6).unwrap();
        assert!(left_population(&far).is_finite());
        far.validate().unwrap();
    }
}
