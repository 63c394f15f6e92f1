mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use decolab::master::{IntegrationPlan, Scheme};
use decolab::qcore::{DensityMatrix, SpatialGrid};
use decolab::zeno::{
    chiral_states, coupling_scan, energy_variance, evolve_chiral, evolve_pointer_model,
    left_population, left_state_density, repeated_measurement_survival, survival_probability,
    ChiralModel, DecaySystem, PointerModel,
};

type CMatrix = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn three_level() -> (CMatrix, DVector<Complex64>) {
    let h = DMatrix::from_row_slice(
        3,
        3,
        &[
            c(0.0, 0.0),
            c(0.4, 0.1),
            c(0.0, 0.0),
            c(0.4, -0.1),
            c(1.0, 0.0),
            c(0.3, 0.0),
            c(0.0, 0.0),
            c(0.3, 0.0),
            c(-0.5, 0.0),
        ],
    );
    (
        h,
        DVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]),
    )
}

#[test]
fn survival_matches_matrix_exponential() {
    let (h, u) = three_level();
    let sys = DecaySystem::new(h.clone(), u.clone()).unwrap();
    for t in [0.1, 0.7, 2.3, 9.0] {
        let ut = (&h * c(0.0, -t)).exp();
        let amp = (u.adjoint() * &ut * &u)[(0, 0)];
        assert!((survival_probability(&sys, t) - amp.norm_sqr()).abs() < 1e-12);
    }
}

#[test]
fn short_time_loss_is_energy_variance() {
    let (h, u) = three_level();
    let sys = DecaySystem::new(h, u).unwrap();
    let var = energy_variance(&sys);
    // ⟨u|H²|u⟩ - ⟨u|H|u⟩² = |0.4 + 0.1i|² for this Hamiltonian
    assert!((var - 0.17).abs() < 1e-12);
    let t = 1e-3;
    let loss = 1.0 - survival_probability(&sys, t);
    assert!((loss / (var * t * t) - 1.0).abs() < 1e-3);
}

#[test]
fn dense_measurement_freezes_the_state() {
    let sys = DecaySystem::two_level(1.0);
    let t = 1.0;
    let pn = |n| repeated_measurement_survival(&sys, t, n).unwrap();
    // P_N → exp(-t²(ΔH)²/N)
    for n in [100, 1000, 10_000] {
        let expected = (-t * t / n as f64).exp();
        assert!((pn(n) - expected).abs() < 1.0 / (n as f64).powi(2));
    }
    assert!(repeated_measurement_survival(&sys, t, 0).is_err());
}

#[test]
fn detuned_rabi_without_pointer_coupling() {
    let (v, e) = (0.8, 1.3);
    let grid = SpatialGrid::new(256, -16.0, 16.0).unwrap();
    let model = PointerModel::new(v, e, 0.0, grid, 1.0).unwrap();
    let omega = (v * v + e * e / 4.0).sqrt();
    let plan = IntegrationPlan::covering(10.0, 0.05, 200, Scheme::SplitStep).unwrap();
    let series = evolve_pointer_model(&model, &plan);
    assert!(series.truncated.is_none());
    for s in &series.samples {
        let exact = v * v / (omega * omega) * (omega * s.t).sin().powi(2);
        assert!((s.p2 - exact).abs() < 1e-12);
    }
}

#[test]
fn branch_overlap_sets_the_resolution_time() {
    let grid = SpatialGrid::new(512, -32.0, 32.0).unwrap();
    let model = PointerModel::new(1.0, 0.0, 5.0, grid, 1.3).unwrap();
    let t_res = model.resolution_time().unwrap();
    assert!((t_res - 1.3 / 5.0).abs() < 1e-15);
    assert!((model.branch_overlap(t_res) - (-0.5f64).exp()).abs() < 1e-10);
    assert!((model.branch_overlap(0.0) - 1.0).abs() < 1e-14);
    assert!(PointerModel::new(1.0, 0.0, 0.0, grid, 1.0)
        .unwrap()
        .resolution_time()
        .is_none());
}

#[test]
fn strong_coupling_turns_growth_linear() {
    let gamma = 50.0;
    let grid = SpatialGrid::new(512, -32.0, 32.0).unwrap();
    let model = PointerModel::new(1.0, 0.0, gamma, grid, 1.0).unwrap();
    let plan = IntegrationPlan::covering(0.3, 0.001, 300, Scheme::SplitStep).unwrap();
    let series = evolve_pointer_model(&model, &plan);
    assert!(series.truncated.is_none());
    let start = 3.0 * model.resolution_time().unwrap();
    let (t, p): (Vec<f64>, Vec<f64>) = series
        .samples
        .iter()
        .filter(|s| s.t >= start)
        .map(|s| (s.t, s.p2))
        .unzip();
    let (slope, _, r2) = common::linear_fit(&t, &p);
    assert!(r2 > 0.99, "R² = {r2}");
    assert!(slope > 0.0);
    // well below the uncoupled Rabi value at the same time
    assert!(p.last().unwrap() < &(0.3f64.sin().powi(2) / 2.0));
}

#[test]
fn coupling_scan_is_bounded_and_starts_at_rabi() {
    let grid = SpatialGrid::new(1024, -72.0, 72.0).unwrap();
    let model = PointerModel::new(1.0, 0.0, 0.0, grid, 1.0).unwrap();
    let gammas: Vec<f64> = (0..=40).map(|i| i as f64).collect();
    let scan = coupling_scan(&model, FRAC_PI_2, &gammas).unwrap();
    assert!((scan[0].1 - 1.0).abs() < 1e-12);
    assert!(scan.iter().all(|(_, p)| (0.0..=1.0).contains(p)));
    assert!(scan.iter().zip(&gammas).all(|((g, _), h)| g == h));
    let tail: Vec<f64> = scan
        .iter()
        .filter(|(g, _)| *g >= 2.0)
        .map(|s| s.1)
        .collect();
    assert!(tail.windows(2).all(|w| w[1] < w[0]));
}

/// `dρ/dt = -i[H, ρ] + (λ/2)(σρσ - ρ)` with `σ = |L⟩⟨L| - |R⟩⟨R|`, by RK4.
fn lindblad_chiral(delta: f64, lambda: f64, rho0: &CMatrix, t: f64) -> CMatrix {
    let h = DMatrix::from_row_slice(
        2,
        2,
        &[c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(delta, 0.0)],
    );
    // σ_z in the chiral basis is σ_x in the energy basis
    let sigma =
        DMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
    let f = |r: &CMatrix| -> CMatrix {
        (&h * r - r * &h) * c(0.0, -1.0) + (&sigma * r * &sigma - r) * c(0.5 * lambda, 0.0)
    };
    let steps = ((t / 1e-4).ceil() as usize).max(1);
    let dt = t / steps as f64;
    let mut y = rho0.clone();
    for _ in 0..steps {
        let k1 = f(&y);
        let k2 = f(&(&y + &k1 * c(0.5 * dt, 0.0)));
        let k3 = f(&(&y + &k2 * c(0.5 * dt, 0.0)));
        let k4 = f(&(&y + &k3 * c(dt, 0.0)));
        y += (k1 + k2 * c(2.0, 0.0) + k3 * c(2.0, 0.0) + k4) * c(dt / 6.0, 0.0);
    }
    y
}

#[test]
fn chiral_closed_form_matches_lindblad_integration() {
    let mixed = DensityMatrix::discrete(DMatrix::from_row_slice(
        2,
        2,
        &[c(0.7, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.3, 0.0)],
    ))
    .unwrap();
    // underdamped, critical and overdamped
    for lambda in [0.0, 0.6, 2.0, 7.0] {
        let model = ChiralModel::new(1.0, lambda).unwrap();
        for rho0 in [left_state_density(), mixed.clone()] {
            for t in [0.3, 2.0, 5.5] {
                let closed = evolve_chiral(&model, &rho0, t).unwrap();
                let reference = lindblad_chiral(1.0, lambda, rho0.elements(), t);
                let diff = (closed.elements() - &reference)
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max);
                assert!(diff < 1e-9, "λ={lambda} t={t}: {diff:e}");
            }
        }
    }
}

#[test]
fn free_tunneling_and_chiral_basis() {
    let (l, r) = chiral_states(1.0).unwrap();
    let overlap = l[0].conj() * r[0] + l[1].conj() * r[1];
    assert!(overlap.norm() < 1e-15);
    // ⟨L|H|L⟩ = Δ/2
    let delta = 2.5;
    let model = ChiralModel::new(delta, 0.0).unwrap();
    let energy = (model.hamiltonian()[(1, 1)] * l[1].norm_sqr()).re;
    assert!((energy - delta / 2.0).abs() < 1e-14);
    for t in [0.0, 0.4, 1.1, 3.0] {
        let rho = evolve_chiral(&model, &left_state_density(), t).unwrap();
        assert!((left_population(&rho) - (delta * t / 2.0).cos().powi(2)).abs() < 1e-12);
    }
}

#[test]
fn strong_monitoring_keeps_chirality() {
    let model = ChiralModel::new(1.0, 1e4).unwrap();
    let horizon = 10.0 * model.period();
    for i in 0..=200 {
        let t = horizon * i as f64 / 200.0;
        let rho = evolve_chiral(&model, &left_state_density(), t).unwrap();
        assert!(left_population(&rho) >= 0.99);
    }
}

#[test]
fn moderate_monitoring_leaks_at_the_slow_rate() {
    // λ/Δ = 100: chirality decays at Δ²/λ, so ten periods lose about a quarter
    let (delta, lambda) = (1.0, 100.0);
    let model = ChiralModel::new(delta, lambda).unwrap();
    let t = 10.0 * 2.0 * PI / delta;
    let rho = evolve_chiral(&model, &left_state_density(), t).unwrap();
    let slow = 0.5 * (1.0 + (-delta * delta * t / lambda).exp());
    assert!((left_population(&rho) - slow).abs() < 1e-3);
    assert!(left_population(&rho) < 0.99);
}
