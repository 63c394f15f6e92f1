use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{require_non_negative, Error, Result};
use crate::fft::FftPair;
use crate::master::IntegrationPlan;
use crate::qcore::{build_gaussian_packet, SpatialGrid, WaveFunction};
use crate::tolerance;

/// Two-level system `V(|1⟩⟨2| + |2⟩⟨1|) + E|2⟩⟨2|` coupled to a continuous
/// pointer through `γ p̂ (|1⟩⟨1| - |2⟩⟨2|)`. The pointer has no kinetic term.
#[derive(Debug, Clone)]
pub struct PointerModel {
    pub v: f64,
    pub e: f64,
    pub gamma: f64,
    pointer_width: f64,
    pointer: WaveFunction,
    spectrum: Vec<Complex64>,
    wave_numbers: Vec<f64>,
    fft: FftPairHandle,
}

#[derive(Clone)]
struct FftPairHandle(FftPair);

impl std::fmt::Debug for FftPairHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("FftPair")
    }
}

impl PointerModel {
    /// Pointer starts as a centred Gaussian of width `pointer_width`; the
    /// system starts in `|1⟩`.
    pub fn new(v: f64, e: f64, gamma: f64, grid: SpatialGrid, pointer_width: f64) -> Result<Self> {
        require_non_negative("V", v)?;
        require_non_negative("gamma", gamma)?;
        if !e.is_finite() {
            return Err(Error::param("E", "must be finite"));
        }
        let pointer = build_gaussian_packet(grid, 0.0, pointer_width, 0.0)?;
        let fft = FftPair::new(grid.len());
        let mut spectrum = pointer.amplitudes().to_vec();
        fft.forward(&mut spectrum);
        Ok(Self {
            v,
            e,
            gamma,
            pointer_width,
            pointer,
            spectrum,
            wave_numbers: grid.wave_numbers(),
            fft: FftPairHandle(fft),
        })
    }

    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        require_non_negative("gamma", gamma)?;
        Ok(Self {
            gamma,
            ..self.clone()
        })
    }

    pub fn grid(&self) -> &SpatialGrid {
        self.pointer.grid()
    }

    pub fn pointer(&self) -> &WaveFunction {
        &self.pointer
    }

    pub fn pointer_width(&self) -> f64 {
        self.pointer_width
    }

    /// Joint state at time t in the pointer momentum representation.
    fn components(&self, t: f64) -> (Vec<Complex64>, Vec<Complex64>) {
        let n = self.spectrum.len();
        let mut c1 = Vec::with_capacity(n);
        let mut c2 = Vec::with_capacity(n);
        let phase = Complex64::from_polar(1.0, -0.5 * self.e * t);
        for (phi, &k) in self.spectrum.iter().zip(&self.wave_numbers) {
            // H_k = (E/2) I + V σ_x + (γk - E/2) σ_z
            let bz = self.gamma * k - 0.5 * self.e;
            let omega = (self.v * self.v + bz * bz).sqrt();
            let (cos, sinc) = if omega > 0.0 {
                ((omega * t).cos(), (omega * t).sin() / omega)
            } else {
                (1.0, t)
            };
            let i = Complex64::i();
            c1.push(phase * (cos - i * sinc * bz) * phi);
            c2.push(phase * (-i * sinc * self.v) * phi);
        }
        (c1, c2)
    }

    /// Population of `|2⟩` and diagnostics at time t.
    pub fn sample(&self, t: f64) -> PointerSample {
        let (mut c1, mut c2) = self.components(t);
        let total: f64 = self.spectrum.iter().map(|z| z.norm_sqr()).sum();
        let n1: f64 = c1.iter().map(|z| z.norm_sqr()).sum();
        let n2: f64 = c2.iter().map(|z| z.norm_sqr()).sum();
        self.fft.0.inverse(&mut c1);
        self.fft.0.inverse(&mut c2);
        let peak = c1.iter().chain(&c2).map(|z| z.norm()).fold(0.0, f64::max);
        let last = c1.len() - 1;
        let edge = [c1[0], c1[last], c2[0], c2[last]]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        PointerSample {
            t,
            p2: (n2 / total).clamp(0.0, 1.0),
            norm_error: ((n1 + n2) / total - 1.0).abs(),
            boundary_ratio: edge / peak,
        }
    }

    /// `|⟨φ|e^{2iγp̂t}|φ⟩|`, overlap of the two pointer branches.
    pub fn branch_overlap(&self, t: f64) -> f64 {
        let total: f64 = self.spectrum.iter().map(|z| z.norm_sqr()).sum();
        let s: Complex64 = self
            .spectrum
            .iter()
            .zip(&self.wave_numbers)
            .map(|(z, k)| Complex64::from_polar(z.norm_sqr(), 2.0 * self.gamma * k * t))
            .sum();
        s.norm() / total
    }

    /// Time at which the branch overlap drops to `e^{-1/2}` (`σ/γ` for the
    /// Gaussian pointer); `None` without coupling.
    pub fn resolution_time(&self) -> Option<f64> {
        (self.gamma > 0.0).then(|| self.pointer_width / self.gamma)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointerSample {
    pub t: f64,
    pub p2: f64,
    /// `|‖ψ‖² - 1|` of the joint state.
    pub norm_error: f64,
    /// Largest edge amplitude of either branch relative to the peak.
    pub boundary_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointerSeries {
    pub samples: Vec<PointerSample>,
    /// Set when a branch reached the grid edge; the series stops there.
    pub truncated: Option<Error>,
}

/// `P₂(t)` at every recorded step of `plan`, starting at t = 0.
///
/// Each pointer momentum evolves under its own 2×2 Hamiltonian, so the state
/// at each recorded time is evaluated exactly rather than stepped.
pub fn evolve_pointer_model(model: &PointerModel, plan: &IntegrationPlan) -> PointerSeries {
    let mut samples = Vec::new();
    let steps = (0..=plan.n_steps).filter(|s| s % plan.record_every == 0 || *s == plan.n_steps);
    for step in steps {
        let s = model.sample(step as f64 * plan.dt);
        if s.boundary_ratio >= tolerance::BOUNDARY_LEAK {
            return PointerSeries {
                samples,
                truncated: Some(Error::BoundaryLeak {
                    ratio: s.boundary_ratio,
                    limit: tolerance::BOUNDARY_LEAK,
                }),
            };
        }
        samples.push(s);
    }
    PointerSeries {
        samples,
        truncated: None,
    }
}

/// `P₂(t_fixed)` for each coupling, in input order.
pub fn coupling_scan(
    model: &PointerModel,
    t_fixed: f64,
    gammas: &[f64],
) -> Result<Vec<(f64, f64)>> {
    gammas
        .par_iter()
        .map(|&g| {
            let s = model.with_gamma(g)?.sample(t_fixed);
            if s.boundary_ratio >= tolerance::BOUNDARY_LEAK {
                return Err(Error::BoundaryLeak {
                    ratio: s.boundary_ratio,
                    limit: tolerance::BOUNDARY_LEAK,
                });
            }
            Ok((g, s.p2))
        })
        .collect()
}
