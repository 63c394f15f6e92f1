//! Wigner transform of spatial density matrices and oscillator eigenstates.

mod io;
mod oscillator;
mod transform;

pub use io::{read_wigner_binary, write_wigner_binary, write_wigner_csv, WignerDump, DUMP_MAGIC};
pub use oscillator::{decohered_oscillator_demo, oscillator_eigenstate};
pub use transform::{marginal_position, wigner_transform, WignerFunction};
