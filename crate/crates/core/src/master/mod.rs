//! Time integration of the free-particle decoherence master equation
//!
//! `∂ρ/∂t = (i/2m)(∂²_x - ∂²_x')ρ - Λ(x-x')²ρ`
//!
//! and of the Caldeira–Leggett equation, which adds the friction term
//! `γ(x-x')(∂_x' - ∂_x)ρ` with `Λ = mγk_BT`.

mod models;
mod propagator;
mod series;

pub use models::{
    decoherence_relaxation_ratio, reduced_thermal_wavelength, CaldeiraLeggettModel,
    FreeDecoherenceModel, IntegrationPlan, MasterModel, Scheme,
};
pub use propagator::{step_caldeira_leggett, step_free_decoherence, Propagator};
pub use series::{coherence_length_series, CoherenceSeries, SeriesSample};
