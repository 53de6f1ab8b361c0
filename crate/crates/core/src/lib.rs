//! Simulation and verification toolkit for frequency estimation of a
//! dissipative optical mode enhanced by two-photon (parametric) driving.
//!
//! The crate evaluates the closed-form Heisenberg-picture dynamics of a
//! damped, parametrically driven bosonic mode, computes exact Gaussian
//! measurement statistics for photon counting and homodyne detection, and
//! propagates the full system-plus-discretized-bath model as a brute-force
//! oracle against which every closed form is checked.
//!
//! Module map:
//!
//! - [`params`] — system parameters, drive-regime classification, input
//!   states, and flat-band bath discretizations.
//! - [`coeffs`] — closed-form Bogoliubov coefficients of the mode and bath
//!   under the Markov approximation, plus long-time asymptotic operators.
//! - [`oracle`] — exact propagator for the discretized system+bath model
//!   (no Markov approximation).
//! - [`spectral`] — stationary spectral sums in closed form and by adaptive
//!   quadrature over the infinite band.
//! - [`measurement`] — Gaussian moments and measurement statistics.
//! - [`precision`] — frequency-estimation uncertainty by error propagation,
//!   published asymptotic formulas, and the PT-symmetry eigenvalue analysis.
//! - [`numerics`] — matrix exponential, adaptive Runge-Kutta, adaptive
//!   Gauss-Kronrod quadrature.
//! - [`sweep`], [`verify`] — parameter-sweep engine and verification suites
//!   backing the command-line interface.

pub mod coeffs;
pub mod measurement;
pub mod numerics;
pub mod oracle;
pub mod params;
pub mod precision;
pub mod spectral;
pub mod sweep;
pub mod verify;

pub use coeffs::{bath_coeffs, mode_coeffs, BathCoefficients, ModeCoefficients};
pub use measurement::{homodyne_stats, moments, photon_stats, Detector, MeasurementStats, MomentSet};
pub use params::{classify_regime, BathSpec, DriveRegime, InputState, Regime, SystemParams};
pub use precision::{delta_omega_asymptotic, delta_omega_full, pt_eigenvalues, UncertaintyResult};
pub use spectral::{spectral_sums_closed, spectral_sums_quadrature, SpectralSums};
