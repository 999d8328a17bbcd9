//! Geometric frequency analysis of three-phase waveforms.
//!
//! The voltage vector `v(t)` is treated as the velocity of a space curve.
//! Its Frenet frame, curvature and torsion give the radial frequency `ρ`,
//! the azimuthal frequency vector `ω`, the torsional frequency `ξ` and a
//! split of `ω'` into a frequency-magnitude part and a torsional part.

pub mod analysis;
pub mod config;
pub mod error;
pub mod frenet;
pub mod geometry;
pub mod hilbert;
pub mod io;
pub mod numdiff;
pub mod park;
pub mod signals;
pub mod threephase;
pub mod validate;

pub use error::{Error, Result};
pub use frenet::{
    frame, invariants, omega_dot_direct, rho_prime, rocof, second_derivative_decomposition, speed,
    velocity_identity_residual, FrenetFrame, GeomInvariants, Jet2, RocofDecomposition,
    SecondDerivativeDecomposition, Thresholds,
};
pub use geometry::{cross, inner, triple_scalar, Vec3};
pub use numdiff::TimeSeries;
pub use park::{DqoJet, ParkConfig};
pub use signals::{make_scenario, ScenarioId, SignalModel};
pub use threephase::PhaseJet;
