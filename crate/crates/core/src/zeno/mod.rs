//! Quantum Zeno analysis, the continuous pointer model and the chiral
//! two-level model.

mod analytic;
mod chiral;
mod pointer;

pub use analytic::{
    classical_decay_survival, energy_variance, repeated_measurement_survival, survival_probability,
    DecaySystem,
};
pub use chiral::{chiral_states, evolve_chiral, left_population, left_state_density, ChiralModel};
pub use pointer::{
    coupling_scan, evolve_pointer_model, PointerModel, PointerSample, PointerSeries,
};
