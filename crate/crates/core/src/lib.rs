//! Lower bounds on the absorption probability of a single-slab beam splitter.
//!
//! The crate is organised bottom-up:
//!
//! * [`dielectric`] evaluates a Drude–Lorentz susceptibility and the complex
//!   refractive index it implies, plus the low-frequency expansions and a
//!   numerical check of the refractive-index sum rule.
//! * [`slab`] gives the complex transmission and reflection amplitudes of a
//!   planar slab in vacuum at normal incidence.
//! * [`optimizer`] minimizes the absorption `1 - |T|^2 - |R|^2` subject to a
//!   fixed splitting ratio `|T|^2 / |R|^2` and extracts the coefficient
//!   `alpha(x) = p_min / (gamma * omega)` in scaled units.
//! * [`linewidth`] bounds the scaled line width by the real-cavity
//!   spontaneous-decay rate and combines it with `alpha(x)` into the final
//!   minimal absorption probability.
//!
//! All scaled quantities use the resonance frequency as unit: `omega_tilde =
//! omega / omega_T`, `gamma_tilde = gamma / omega_T` and the slab thickness
//! `d = omega_T * l / c`.

pub mod dielectric;
mod error;
pub mod linewidth;
pub mod numeric;
pub mod optimizer;
pub mod quad;
pub mod slab;

pub use error::{Error, Result};

pub use dielectric::{ComplexIndex, DrudeLorentzModel, Resonance};
pub use linewidth::{DecayContext, PhysicalDipoleInputs};
pub use optimizer::{
    AlphaEstimate, Branch, BranchPolicy, MinimizeConfig, MinimizeResult, SweepRow,
};
pub use slab::{ScaledSlabParams, SlabResponse};

/// Complex numbers used throughout the crate.
pub type Complex = num_complex::Complex64;
