//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the propagators or transforms under test.

#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

/// Laguerre polynomial `L_n(x)` by the three-term recurrence.
pub fn laguerre(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 - x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next =
            ((2 * k + 1) as f64 - x) * cur / (k + 1) as f64 - k as f64 * prev / (k + 1) as f64;
        prev = cur;
        cur = next;
    }
    cur
}

/// Wigner function of the n-th eigenstate of `H = p²/2 + x²/2`.
pub fn oscillator_wigner(n: usize, x: f64, p: f64) -> f64 {
    let r2 = x * x + p * p;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    sign / PI * (-r2).exp() * laguerre(n, 2.0 * r2)
}

/// Second moments of a Gaussian packet (width `s`, no initial correlation)
/// under the free decoherence equation, from the moment ODEs
/// `d⟨x²⟩/dt = 2⟨xp⟩_s/m`, `d⟨xp⟩_s/dt = ⟨p²⟩/m`, `d⟨p²⟩/dt = 2Λ`.
pub fn gaussian_moments(s: f64, mass: f64, lambda: f64, t: f64) -> (f64, f64, f64) {
    let spp0 = 1.0 / (4.0 * s * s);
    let spp = spp0 + 2.0 * lambda * t;
    let sxp = spp0 * t / mass + lambda * t * t / mass;
    let sxx = s * s + spp0 * t * t / (mass * mass) + 2.0 * lambda * t.powi(3) / (3.0 * mass * mass);
    (sxx, sxp, spp)
}

/// Coherence length of a Gaussian state: `√(σxx / det Σ)`.
pub fn gaussian_coherence_length(s: f64, mass: f64, lambda: f64, t: f64) -> f64 {
    let (sxx, sxp, spp) = gaussian_moments(s, mass, lambda, t);
    (sxx / (sxx * spp - sxp * sxp)).sqrt()
}

/// Least-squares slope and coefficient of determination of `y` against `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    (slope, intercept, 1.0 - ss_res / syy)
}

/// Fourier differentiation matrices on a periodic grid of `n` (even) points
/// with spacing `h`.
pub fn spectral_derivatives(n: usize, h: f64) -> (DMatrix<f64>, DMatrix<f64>) {
    let scale = 2.0 * PI / (n as f64 * h);
    let d1 = DMatrix::from_fn(n, n, |j, k| {
        if j == k {
            return 0.0;
        }
        let d = j as f64 - k as f64;
        let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
        scale * 0.5 * sign / (PI * d / n as f64).tan()
    });
    let d2 = DMatrix::from_fn(n, n, |j, k| {
        if j == k {
            return -scale * scale * ((n * n) as f64 / 12.0 + 1.0 / 6.0);
        }
        let d = j as f64 - k as f64;
        let sign = if (j + k) % 2 == 0 { 1.0 } else { -1.0 };
        -scale * scale * sign * 0.5 / (PI * d / n as f64).sin().powi(2)
    });
    (d1, d2)
}

/// Dense brute-force integrator for
/// `∂ρ/∂t = (i/2m)(∂²ₓ - ∂²ₓ')ρ - Λ(x-x')²ρ - γ(x-x')(∂ₓ - ∂ₓ')ρ`
/// with spectral derivatives and classical RK4.
pub struct BruteForceCl {
    pub points: Vec<f64>,
    d1: CMatrix,
    d2: CMatrix,
    sep: DMatrix<f64>,
    mass: f64,
    lambda: f64,
    gamma: f64,
}

impl BruteForceCl {
    pub fn new(x0: f64, h: f64, n: usize, mass: f64, lambda: f64, gamma: f64) -> Self {
        let (d1, d2) = spectral_derivatives(n, h);
        let points: Vec<f64> = (0..n).map(|i| x0 + i as f64 * h).collect();
        let sep = DMatrix::from_fn(n, n, |i, j| points[i] - points[j]);
        Self {
            points,
            d1: d1.map(|v| Complex64::new(v, 0.0)),
            d2: d2.map(|v| Complex64::new(v, 0.0)),
            sep,
            mass,
            lambda,
            gamma,
        }
    }

    pub fn rhs(&self, rho: &CMatrix) -> CMatrix {
        let i_2m = Complex64::new(0.0, 0.5 / self.mass);
        let kinetic = (&self.d2 * rho - rho * self.d2.transpose()) * i_2m;
        let dx = &self.d1 * rho;
        let dxp = rho * self.d1.transpose();
        let n = rho.nrows();
        CMatrix::from_fn(n, n, |i, j| {
            let s = self.sep[(i, j)];
            kinetic[(i, j)]
                - self.lambda * s * s * rho[(i, j)]
                - self.gamma * s * (dx[(i, j)] - dxp[(i, j)])
        })
    }

    pub fn evolve(&self, rho: &CMatrix, t: f64, dt: f64) -> CMatrix {
        let steps = (t / dt).round() as usize;
        let h = t / steps as f64;
        let mut y = rho.clone();
        for _ in 0..steps {
            let k1 = self.rhs(&y);
            let k2 = self.rhs(&(&y + &k1 * Complex64::from(0.5 * h)));
            let k3 = self.rhs(&(&y + &k2 * Complex64::from(0.5 * h)));
            let k4 = self.rhs(&(&y + &k3 * Complex64::from(h)));
            y += (k1 + k2 * Complex64::from(2.0) + k3 * Complex64::from(2.0) + k4)
                * Complex64::from(h / 6.0);
        }
        y
    }
}

/// `|ψ⟩⟨ψ|` of a Gaussian packet sampled at `points`, normalised with spacing `h`.
pub fn gaussian_density(points: &[f64], h: f64, center: f64, width: f64, k0: f64) -> CMatrix {
    let psi: Vec<Complex64> = points
        .iter()
        .map(|&x| {
            let u = x - center;
            Complex64::from_polar((-u * u / (4.0 * width * width)).exp(), k0 * x)
        })
        .collect();
    let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum::<f64>() * h;
    let n = points.len();
    CMatrix::from_fn(n, n, |i, j| psi[i] * psi[j].conj() / norm)
}

/// `∫₀^∞ xᵃ/(eˣ - 1) dx` by composite Simpson quadrature.
pub fn bose_moment(a: i32) -> f64 {
    let upper = 80.0;
    let n = 200_000;
    let h = upper / n as f64;
    let f = |x: f64| {
        if x == 0.0 {
            if a == 1 {
                1.0
            } else {
                0.0
            }
        } else {
            x.powi(a) / x.exp_m1()
        }
    };
    let mut s = f(0.0) + f(upper);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(i as f64 * h);
    }
    s * h / 3.0
}

/// `W(x, p) = (1/π) ∫ ρ(x+y, x-y) e^{-2ipy} dy` by the trapezoidal rule on
/// `[-y_max, y_max]`, for a kernel given as a closure.
pub fn wigner_quadrature(rho: impl Fn(f64, f64) -> Complex64, x: f64, p: f64, y_max: f64) -> f64 {
    let n = 4000;
    let h = 2.0 * y_max / n as f64;
    let mut s = Complex64::new(0.0, 0.0);
    for i in 0..=n {
        let y = -y_max + i as f64 * h;
        let w = if i == 0 || i == n { 0.5 } else { 1.0 };
        s += rho(x + y, x - y) * Complex64::from_polar(w, -2.0 * p * y);
    }
    (s * h).re / PI
}

/// Physicists' Hermite polynomial `H_n(x)`.
pub fn hermite(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// n-th oscillator eigenfunction (m = ω = 1) from `H_n`.
pub fn oscillator_psi(n: usize, x: f64) -> f64 {
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    let norm = 1.0 / (2f64.powi(n as i32) * fact * PI.sqrt()).sqrt();
    norm * hermite(n, x) * (-0.5 * x * x).exp()
}
