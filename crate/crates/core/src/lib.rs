//! Equilibrium thermodynamics of a damped harmonic oscillator coupled to a
//! harmonic reservoir, in the classical and quantum regimes.
//!
//! The crate is generic over the scalar type (`f32`/`f64`) via [`Float`];
//! `f64` aliases for the main types live at the crate root.

// `!(x > 0)` rejects NaN along with non-positive values; `x <= 0` does not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Quadrature node tables carry their full published precision.
#![allow(clippy::excessive_precision)]

pub mod bath_oracle;
pub mod field_modes;
pub mod float;
pub mod quadrature;
pub mod susceptibility;
pub mod thermo;

pub use float::Float;

/// `f64` aliases for the common types.
pub type QuadratureSpec64 = quadrature::QuadratureSpec<f64>;
pub type QuadratureResult64 = quadrature::QuadratureResult<f64>;
pub type Susceptibility64 = susceptibility::SusceptibilityModel<f64>;
pub type Ensemble64 = thermo::Ensemble<f64>;
pub type OscillatorParams64 = thermo::OscillatorParams<f64>;
pub type EnergyReport64 = thermo::EnergyReport<f64>;
pub type DiscreteBath64 = bath_oracle::DiscreteBath<f64>;
pub type NormalModes64 = bath_oracle::NormalModes<f64>;
pub type ScalarFieldModel64 = field_modes::ScalarFieldModel<f64>;
