//! Finite-temperature Lifshitz theory for two parallel metal half-spaces.
//!
//! The crate evaluates the Casimir pressure and free energy per unit area as
//! Matsubara sums over imaginary frequencies, for Drude, plasma, ideal-metal
//! and tabulated permittivities, with an explicit choice of how the
//! zero-frequency TE mode is treated. Thermodynamic quantities (entropy,
//! classical and zero-temperature limits) live in [`thermo`].

pub mod dielectric;
pub mod engine;
pub mod error;
pub mod material;
pub mod optical;
pub mod physics;
pub mod quadrature;
pub mod reference;
pub mod summation;
pub mod thermo;

pub use dielectric::{DielectricModel, Permittivity, ZeroModePolicy};
pub use engine::{casimir_pressure, free_energy_per_area, Execution, NumericsSettings, PressureResult};
pub use error::{Error, Result};
pub use optical::{Extrapolation, PermittivityTable, TableAxis};
pub use physics::{matsubara_frequency, GapConfig};
