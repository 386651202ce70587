//! Spontaneous-decay bound on the resonance line width and the resulting
//! minimal absorption probability.
//!
//! Only [`free_space_decay_rate`], [`dipole_sq_from_static_index`] and their
//! helpers use SI constants. The scaled bound [`scaled_linewidth_bound`] and
//! [`min_absorption_probability`] are constant-free; the two routes agree once
//! the atom count per cubic transition wavelength is identified with `n_vt`.

use std::f64::consts::PI;

use crate::{Error, Result};

/// CODATA 2018 values, SI units.
pub mod constants {
    /// Reduced Planck constant, J s.
    pub const HBAR: f64 = 1.054_571_817e-34;
    /// Vacuum permittivity, F/m.
    pub const EPSILON_0: f64 = 8.854_187_812_8e-12;
    /// Speed of light in vacuum, m/s (exact).
    pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
    /// One debye, C m.
    pub const DEBYE: f64 = 3.335_640_95e-30;
}

use constants::{EPSILON_0, HBAR, SPEED_OF_LIGHT};

/// Atom count per cubic transition wavelength used when nothing else is known
/// about the material (UV resonance).
pub const DEFAULT_N_VT: f64 = 1e9;

/// Input to the line-width bound: `n_vt` atoms per `lambda_T^3` and the static
/// refractive index `eta = sqrt(eps_s)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayContext {
    n_vt: f64,
    eta: f64,
}

impl DecayContext {
    pub fn new(n_vt: f64, eta: f64) -> Result<Self> {
        if !(n_vt.is_finite() && n_vt > 0.0) {
            return Err(Error::invalid("n_vt", format!("must be > 0, got {n_vt}")));
        }
        if !(eta.is_finite() && eta > 1.0) {
            return Err(Error::invalid("eta", format!("must be > 1, got {eta}")));
        }
        Ok(Self { n_vt, eta })
    }

    pub fn from_static_permittivity(n_vt: f64, eps_s: f64) -> Result<Self> {
        Self::new(n_vt, eps_s.sqrt())
    }

    pub fn n_vt(&self) -> f64 {
        self.n_vt
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

/// Unscaled description of the radiating dipoles.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalDipoleInputs {
    /// Transition angular frequency, rad/s.
    pub omega_t: f64,
    /// Atoms per m^3.
    pub number_density: f64,
    /// Squared dipole matrix element, C^2 m^2.
    pub dipole_sq: f64,
}

impl PhysicalDipoleInputs {
    pub fn new(omega_t: f64, number_density: f64, dipole_sq: f64) -> Result<Self> {
        for (name, v) in [
            ("omega_t", omega_t),
            ("number_density", number_density),
            ("dipole_sq", dipole_sq),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be > 0, got {v}")));
            }
        }
        Ok(Self { omega_t, number_density, dipole_sq })
    }

    /// Dipoles whose collective static response gives index `eta`.
    pub fn from_static_index(eta: f64, omega_t: f64, number_density: f64) -> Result<Self> {
        Self::new(omega_t, number_density, dipole_sq_from_static_index(eta, omega_t, number_density))
    }

    /// `chi(0) = 2 d^2 n / (3 hbar omega_t eps0)`.
    pub fn static_susceptibility(&self) -> f64 {
        2.0 * self.dipole_sq * self.number_density / (3.0 * HBAR * self.omega_t * EPSILON_0)
    }

    pub fn static_index(&self) -> f64 {
        (1.0 + self.static_susceptibility()).sqrt()
    }

    /// `n * lambda_T^3`.
    pub fn atoms_per_cubic_wavelength(&self) -> f64 {
        self.number_density * transition_volume(self.omega_t)
    }

    pub fn decay_context(&self) -> Result<DecayContext> {
        DecayContext::new(self.atoms_per_cubic_wavelength(), self.static_index())
    }
}

/// `lambda_T = 2 pi c / omega_t`, metres.
pub fn transition_wavelength(omega_t: f64) -> f64 {
    2.0 * PI * SPEED_OF_LIGHT / omega_t
}

/// `V_T = lambda_T^3`, cubic metres.
pub fn transition_volume(omega_t: f64) -> f64 {
    transition_wavelength(omega_t).powi(3)
}

/// `Gamma_0 = omega^3 d^2 / (3 pi hbar eps0 c^3)` in 1/s.
pub fn free_space_decay_rate(omega: f64, dipole_sq: f64) -> f64 {
    omega.powi(3) * dipole_sq / (3.0 * PI * HBAR * EPSILON_0 * SPEED_OF_LIGHT.powi(3))
}

/// `d^2 = 3 hbar omega_t eps0 (eta^2 - 1) / (2 n)`, with the ground state fully
/// populated.
pub fn dipole_sq_from_static_index(eta: f64, omega_t: f64, number_density: f64) -> f64 {
    3.0 * HBAR * omega_t * EPSILON_0 * (eta * eta - 1.0) / (2.0 * number_density)
}

/// Real-cavity enhancement `eta (3 eta^2 / (2 eta^2 + 1))^2` of the decay rate.
pub fn local_field_factor(eta: f64) -> f64 {
    let eps = eta * eta;
    eta * (3.0 * eps / (2.0 * eps + 1.0)).powi(2)
}

/// In-medium decay rate `Gamma / omega_T` at light frequency
/// `omega_tilde * omega_T`, constant-free form.
pub fn scaled_linewidth_bound(ctx: &DecayContext, omega_tilde: f64) -> f64 {
    let eta = ctx.eta;
    4.0 * PI * PI / ctx.n_vt * omega_tilde.powi(3) * (eta * eta - 1.0) * local_field_factor(eta)
}

/// The same quantity as [`scaled_linewidth_bound`], built from the SI
/// free-space rate, the dipole fixed by the static index and the local-field
/// factor.
pub fn scaled_linewidth_from_dipoles(dipoles: &PhysicalDipoleInputs, omega_tilde: f64) -> f64 {
    let eta = dipoles.static_index();
    free_space_decay_rate(omega_tilde * dipoles.omega_t, dipoles.dipole_sq) * local_field_factor(eta)
        / dipoles.omega_t
}

/// `p_min = alpha * omega_tilde * Gamma / omega_T`, i.e. the absorption of the
/// optimal slab when its line width sits at the spontaneous-decay bound.
pub fn min_absorption_probability(alpha: f64, ctx: &DecayContext, omega_tilde: f64) -> f64 {
    alpha * omega_tilde * scaled_linewidth_bound(ctx, omega_tilde)
}
