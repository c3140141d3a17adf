//! Free-particle Gaussian and two-packet ("cat") states in position,
//! momentum and phase space, pure and Maxwell-averaged.
//!
//! * [`model`]: parameters, derived width/velocity scales, grids.
//! * [`kernels`]: closed-form amplitudes, densities and Wigner functions.
//! * [`oracle`]: brute-force quadrature for every transform and average.
//! * [`decoherence`]: interference attenuation and decoherence times.
//! * [`certify`]: sweeps comparing the closed forms against the oracle.

pub mod certify;
pub mod decoherence;
pub mod error;
pub mod field;
pub mod kernels;
pub mod model;
pub mod oracle;

pub use error::{Error, Result, Violation, Violations};
pub use field::{Axes, DistributionField, Ensemble, Space, StateKind};
pub use kernels::{
    eval_density, eval_wavefunction, eval_wigner, sample_field, Amplitude, Probe, State, StateSpec,
};
pub use model::{cat_normalization, derive_scales, CatParams, DerivedScales, Grid1D, Grid2D, PacketParams};
