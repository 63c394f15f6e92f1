use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use proptest::prelude::*;

use decolab::cli::{parse_config, Experiment, ScenarioConfig};
use decolab::qcore::{
    build_gaussian_packet, ideal_measurement_entangle, pure_density, DensityMatrix,
    EnvironmentOverlapMatrix, SpatialGrid,
};
use decolab::rates::{apply_spatial_decoherence, localization_rate, ScatteringEnvironment};
use decolab::wigner::wigner_transform;
use decolab::zeno::{
    classical_decay_survival, evolve_chiral, left_population, repeated_measurement_survival,
    survival_probability, ChiralModel, DecaySystem,
};

fn grid() -> SpatialGrid {
    SpatialGrid::new(128, -16.0, 16.0).unwrap()
}

fn packet(center: f64, width: f64, k: f64) -> DensityMatrix {
    pure_density(&build_gaussian_packet(grid(), center, width, k).unwrap())
}

fn max_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn undecayed() -> DVector<Complex64> {
    DVector::from_vec(vec![
        Complex64::new(1.0, 0.0),
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.0),
    ])
}

fn hermitian(entries: &[f64]) -> DMatrix<Complex64> {
    let n = 3;
    let mut h = DMatrix::zeros(n, n);
    let mut it = entries.iter();
    for i in 0..n {
        h[(i, i)] = Complex64::new(*it.next().unwrap(), 0.0);
        for j in i + 1..n {
            let z = Complex64::new(*it.next().unwrap(), *it.next().unwrap());
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    h
}

#[test]
fn measurement_can_lose_at_a_revival() {
    // P(π) = 1 for V = 1, but two measurements at π/2 find the state decayed
    let sys = DecaySystem::two_level(1.0);
    let t = std::f64::consts::PI;
    assert!((survival_probability(&sys, t) - 1.0).abs() < 1e-12);
    assert!(repeated_measurement_survival(&sys, t, 2).unwrap() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn decoherence_composes(
        center in -2.0..2.0f64,
        width in 0.8..1.6f64,
        k in -1.5..1.5f64,
        a in 0.0..0.5f64,
        b in 0.0..0.5f64,
    ) {
        let rho = packet(center, width, k);
        let twice = apply_spatial_decoherence(
            &apply_spatial_decoherence(&rho, a, 1.0).unwrap(), b, 1.0).unwrap();
        let once = apply_spatial_decoherence(&rho, a + b, 1.0).unwrap();
        prop_assert!(max_diff(twice.elements(), once.elements()) < 1e-13);
    }

    #[test]
    fn decoherence_keeps_diagonal_and_shrinks_off_diagonal(
        center in -2.0..2.0f64,
        width in 0.8..1.6f64,
        lt in 0.0..3.0f64,
    ) {
        let rho = packet(center, width, 0.3);
        let out = apply_spatial_decoherence(&rho, lt, 1.0).unwrap();
        prop_assert_eq!(out.position_distribution(), rho.position_distribution());
        for (x, y) in out.elements().iter().zip(rho.elements().iter()) {
            prop_assert!(x.norm() <= y.norm() + 1e-15);
        }
        prop_assert!(out.purity() <= rho.purity() + 1e-12);
    }

    #[test]
    fn localization_rate_is_homogeneous(
        k in 1e-3..1e3f64,
        flux in 1e-3..1e3f64,
        sigma in 1e-3..1e3f64,
        s in 0.1..10.0f64,
    ) {
        let env = |k, f, sg| ScatteringEnvironment::new("x", k, f, sg, 1.0).unwrap();
        let base = localization_rate(&env(k, flux, sigma));
        prop_assert!((localization_rate(&env(s * k, flux, sigma)) / (s * s * base) - 1.0).abs() < 1e-12);
        prop_assert!((localization_rate(&env(k, s * flux, sigma)) / (s * base) - 1.0).abs() < 1e-12);
        prop_assert!((localization_rate(&env(k, flux, s * sigma)) / (s * base) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn wigner_is_linear_in_rho(
        c1 in -2.0..2.0f64,
        c2 in -2.0..2.0f64,
        w in 0.0..1.0f64,
    ) {
        let a = packet(c1, 1.0, 0.5);
        let b = packet(c2, 1.3, -0.4);
        let mix = DensityMatrix::spatial(
            grid(),
            a.elements() * Complex64::from(w) + b.elements() * Complex64::from(1.0 - w),
        ).unwrap();
        let (wa, wb, wm) = (
            wigner_transform(&a).unwrap(),
            wigner_transform(&b).unwrap(),
            wigner_transform(&mix).unwrap(),
        );
        let expected = wa.values() * w + wb.values() * (1.0 - w);
        prop_assert!((wm.values() - expected).amax() < 1e-12);
    }

    #[test]
    fn wigner_parity(center in -2.0..2.0f64, k in -1.5..1.5f64) {
        // x → -x, p → -p maps the packet at (c, k) onto the one at (-c, -k)
        let w1 = wigner_transform(&packet(center, 1.0, k)).unwrap();
        let w2 = wigner_transform(&packet(-center, 1.0, -k)).unwrap();
        let (nx, np) = w1.values().shape();
        // p grid is symmetric about index np/2
        for ix in 0..nx {
            for ip in 1..np {
                let mirrored = w2.value(nx - 1 - ix, np - ip);
                prop_assert!((w1.value(ix, ip) - mirrored).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn survival_probabilities_are_bounded(
        entries in prop::collection::vec(-2.0..2.0f64, 9),
        t in 0.0..20.0f64,
        n in 1u32..200,
    ) {
        let h = hermitian(&entries);
        let sys = DecaySystem::new(h, undecayed()).unwrap();
        let p = survival_probability(&sys, t);
        let pn = repeated_measurement_survival(&sys, t, n).unwrap();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!((0.0..=1.0).contains(&pn));
        prop_assert!((repeated_measurement_survival(&sys, t, 1).unwrap() - p).abs() < 1e-15);
    }

    #[test]
    fn zeno_inequality_at_short_times(
        entries in prop::collection::vec(-2.0..2.0f64, 9),
        s in 0.0..1.0f64,
        n in 1u32..200,
    ) {
        let h = hermitian(&entries);
        let ev = h.clone().symmetric_eigen().eigenvalues;
        let width = ev.max() - ev.min();
        prop_assume!(width > 1e-6);
        let t = s / width;
        let sys = DecaySystem::new(h, undecayed()).unwrap();
        let p = survival_probability(&sys, t);
        prop_assert!(repeated_measurement_survival(&sys, t, n).unwrap() >= p - 1e-12);
    }

    #[test]
    fn zeno_inequality_before_the_first_rabi_minimum(
        v in 0.01..10.0f64,
        s in 0.0..1.0f64,
        n in 1u32..500,
    ) {
        let sys = DecaySystem::two_level(v);
        let t = s * std::f64::consts::FRAC_PI_2 / v;
        prop_assert!(repeated_measurement_survival(&sys, t, n).unwrap() >= survival_probability(&sys, t) - 1e-12);
    }

    #[test]
    fn classical_decay_ignores_measurements(g in 0.0..5.0f64, t in 0.0..5.0f64, n in 1u32..1000) {
        prop_assert_eq!(classical_decay_survival(g, t, n).unwrap(), (-g * t).exp());
    }

    #[test]
    fn chiral_populations_are_probabilities(
        delta in 0.1..5.0f64,
        lambda in 0.0..200.0f64,
        t in 0.0..50.0f64,
        a in 0.0..1.0f64,
        re in -0.3..0.3f64,
        im in -0.3..0.3f64,
    ) {
        let off = Complex64::new(re, im) * (a * (1.0 - a)).sqrt();
        let rho0 = DensityMatrix::discrete(DMatrix::from_row_slice(2, 2, &[
            Complex64::new(a, 0.0), off, off.conj(), Complex64::new(1.0 - a, 0.0),
        ])).unwrap();
        let rho = evolve_chiral(&ChiralModel::new(delta, lambda).unwrap(), &rho0, t).unwrap();
        prop_assert!((0.0..=1.0).contains(&left_population(&rho)));
        prop_assert!(rho.purity() <= rho0.purity() + 1e-9);
    }

    #[test]
    fn measurement_keeps_populations(
        c in 0.0..1.0f64,
        a in 0.0..1.0f64,
    ) {
        let amp = [Complex64::new(a.sqrt(), 0.0), Complex64::new((1.0 - a).sqrt(), 0.0)];
        let rho = DensityMatrix::pure_discrete(&amp).unwrap();
        let out = ideal_measurement_entangle(&rho, &EnvironmentOverlapMatrix::uniform(2, c).unwrap()).unwrap();
        prop_assert_eq!(out.elements()[(0, 0)], rho.elements()[(0, 0)]);
        prop_assert_eq!(out.elements()[(1, 1)], rho.elements()[(1, 1)]);
        prop_assert!((out.elements()[(0, 1)].norm() - c * rho.elements()[(0, 1)].norm()).abs() < 1e-15);
    }

    #[test]
    fn config_echo_round_trips(lambda in 0.0..10.0f64, mass in 0.01..100.0f64, n in 16usize..600) {
        let text = format!(
            "experiment = evolve-free\n[evolve-free]\nlambda = {lambda}\nmass = {mass}\nn_points = {n}\n"
        );
        let cfg = parse_config(&text).unwrap();
        prop_assert_eq!(cfg.experiment, Experiment::EvolveFree);
        let again: ScenarioConfig = parse_config(&cfg.echo()).unwrap();
        prop_assert_eq!(again, cfg);
    }
}
