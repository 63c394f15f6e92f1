//! Closed-form decoherence rates and factors.

mod gravity;
mod qed;
mod scattering;
mod table1;

pub use gravity::{gravity_coherence_width, gravity_rate, GravityScenario};
pub use qed::{
    qed_dominance_ratio, qed_pair_exponent, qed_pair_factor, qed_vacuum_exponent,
    qed_vacuum_factor, qed_vacuum_limit, QedScenario,
};
pub(crate) use scattering::{apply_factors, spatial_decoherence_factors};
pub use scattering::{
    apply_spatial_decoherence, localization_rate, offdiag_decay_rate, DecayRate,
    ScatteringEnvironment,
};
pub use table1::{
    builtin_table1_presets, load_table1_presets, parse_table1_presets, table1_from_presets,
    table1_generate, Regime, Table1Preset, Table1Row,
};
