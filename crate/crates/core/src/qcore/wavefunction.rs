use num_complex::Complex64;

use super::SpatialGrid;
use crate::error::{require_positive, Error, Result};
use crate::fft::FftPair;
use crate::tolerance;

/// Normalised wave function on a [`SpatialGrid`]: `Σ|ψᵢ|²·dx = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveFunction {
    grid: SpatialGrid,
    amplitudes: Vec<Complex64>,
}

impl WaveFunction {
    /// Normalises `amplitudes` onto `grid`.
    pub fn from_amplitudes(grid: SpatialGrid, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != grid.len() {
            return Err(Error::DimensionMismatch {
                expected: grid.len(),
                found: amplitudes.len(),
            });
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * grid.spacing();
        if !norm_sq.is_finite() || norm_sq.sqrt() < 1e-12 {
            return Err(Error::ZeroNorm);
        }
        let scale = 1.0 / norm_sq.sqrt();
        amplitudes.iter_mut().for_each(|a| *a *= scale);
        Ok(Self { grid, amplitudes })
    }

    pub fn grid(&self) -> &SpatialGrid {
        &self.grid
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    pub fn probability_density(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn mean_position(&self) -> f64 {
        self.position_moment(1)
    }

    pub fn position_moment(&self, power: i32) -> f64 {
        let dx = self.grid.spacing();
        self.amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| a.norm_sqr() * self.grid.point(i).powi(power))
            .sum::<f64>()
            * dx
    }

    /// `⟨p⟩` evaluated in the discrete Fourier representation.
    pub fn mean_momentum(&self) -> f64 {
        let n = self.grid.len();
        let mut buf = self.amplitudes.clone();
        FftPair::new(n).forward(&mut buf);
        let k = self.grid.wave_numbers();
        let total: f64 = buf.iter().map(|a| a.norm_sqr()).sum();
        buf.iter()
            .zip(&k)
            .map(|(a, k)| a.norm_sqr() * k)
            .sum::<f64>()
            / total
    }

    /// Largest edge amplitude relative to the peak amplitude.
    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.amplitudes.iter().map(|a| a.norm()).fold(0.0, f64::max);
        let edge = self.amplitudes[0]
            .norm()
            .max(self.amplitudes[self.amplitudes.len() - 1].norm());
        edge / peak
    }

    /// `⟨self|other⟩` with the grid measure.
    pub fn inner(&self, other: &WaveFunction) -> Result<Complex64> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        let dx = self.grid.spacing();
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * dx)
    }

    pub(crate) fn is_normalised(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tolerance::NORMALISATION
    }
}

/// Gaussian packet `ψ(x) ∝ exp(-(x-center)²/(4·width²) + i·momentum·x)`.
///
/// `width` is the standard deviation of `|ψ|²`.
pub fn build_gaussian_packet(
    grid: SpatialGrid,
    center: f64,
    width: f64,
    momentum: f64,
) -> Result<WaveFunction> {
    require_positive("width", width)?;
    if !center.is_finite() || !momentum.is_finite() {
        return Err(Error::param("center/momentum", "must be finite"));
    }
    let dx = grid.spacing();
    if width <= 2.0 * dx {
        return Err(Error::GridTooCoarse { width, spacing: dx });
    }
    let amplitudes = grid
        .points()
        .into_iter()
        .map(|x| {
            let u = x - center;
            Complex64::from_polar((-u * u / (4.0 * width * width)).exp(), momentum * x)
        })
        .collect();
    let psi = WaveFunction::from_amplitudes(grid, amplitudes)?;
    let ratio = psi.boundary_ratio();
    if ratio >= tolerance::BOUNDARY_LEAK {
        return Err(Error::BoundaryLeak {
            ratio,
            limit: tolerance::BOUNDARY_LEAK,
        });
    }
    Ok(psi)
}

/// Normalised `c1·a + c2·b`.
pub fn superpose(
    a: &WaveFunction,
    b: &WaveFunction,
    c1: Complex64,
    c2: Complex64,
) -> Result<WaveFunction> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let amplitudes = a
        .amplitudes
        .iter()
        .zip(&b.amplitudes)
        .map(|(x, y)| c1 * x + c2 * y)
        .collect();
    WaveFunction::from_amplitudes(a.grid, amplitudes)
}

/// Equal-weight superposition of two Gaussian packets centred at `±separation/2`.
pub fn cat_state(grid: SpatialGrid, separation: f64, width: f64) -> Result<WaveFunction> {
    let left = build_gaussian_packet(grid, -0.5 * separation, width, 0.0)?;
    let right = build_gaussian_packet(grid, 0.5 * separation, width, 0.0)?;
    superpose(
        &left,
        &right,
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> SpatialGrid {
        SpatialGrid::new(256, -16.0, 16.0).unwrap()
    }

    #[test]
    fn gaussian_moments() {
        let psi = build_gaussian_packet(grid(), 0.0, 1.0, 0.0).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-10);
        assert!(psi.mean_position().abs() < 1e-6);
        assert!((psi.position_moment(2) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn gaussian_momentum() {
        let k0 = 1.7;
        let psi = build_gaussian_packet(grid(), 0.0, 1.0, k0).unwrap();
        assert!((psi.mean_momentum() - k0).abs() < 1e-6);
    }

    #[test]
    fn coarse_grid_rejected() {
        let g = SpatialGrid::new(256, -15.9375, 15.9375).unwrap();
        assert_eq!(g.spacing(), 0.125);
        assert!(matches!(
            build_gaussian_packet(g, 0.0, 0.01, 0.0),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn leaky_packet_rejected() {
        assert!(matches!(
            build_gaussian_packet(grid(), 14.0, 1.0, 0.0),
            Err(Error::BoundaryLeak { .. })
        ));
    }

    #[test]
    fn destructive_superposition() {
        let a = build_gaussian_packet(grid(), 0.0, 1.0, 0.0).unwrap();
        let one = Complex64::new(1.0, 0.0);
        let b = superpose(&a, &a, -one, Complex64::new(0.0, 0.0)).unwrap();
        assert!(matches!(superpose(&a, &b, one, one), Err(Error::ZeroNorm)));
    }

    #[test]
    fn identity_superposition() {
        let a = build_gaussian_packet(grid(), 1.0, 1.0, 0.5).unwrap();
        let b = build_gaussian_packet(grid(), -1.0, 1.0, 0.0).unwrap();
        let s = superpose(&a, &b, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)).unwrap();
        for (x, y) in s.amplitudes().iter().zip(a.amplitudes()) {
            assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn cat_has_two_peaks() {
        let psi = cat_state(grid(), 8.0, 1.0).unwrap();
        let rho = psi.probability_density();
        let pts = grid().points();
        let local_maxima: Vec<f64> = (1..rho.len() - 1)
            .filter(|&i| rho[i] > rho[i - 1] && rho[i] >= rho[i + 1] && rho[i] > 1e-3)
            .map(|i| pts[i])
            .collect();
        assert_eq!(local_maxima.len(), 2);
        assert!((local_maxima[0] + 4.0).abs() < grid().spacing());
        assert!((local_maxima[1] - 4.0).abs() < grid().spacing());
    }

    #[test]
    fn wrong_grid_rejected() {
        let a = build_gaussian_packet(grid(), 0.0, 1.0, 0.0).unwrap();
        let g2 = SpatialGrid::new(128, -16.0, 16.0).unwrap();
        let b = build_gaussian_packet(g2, 0.0, 1.0, 0.0).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(superpose(&a, &b, one, one), Err(Error::GridMismatch));
    }
}
