//! Transmission and reflection of a planar slab in vacuum at normal incidence.
//!
//! With `n` the complex index and `a = omega l / c` the vacuum phase across
//! the slab,
//!
//! ```text
//! T = 4 n e^{i(n-1)a} / [(1+n)^2 - (1-n)^2 e^{2ina}]
//! R = (n-1)/(n+1) e^{-ia} [1 - T e^{i(n+1)a}]
//! ```
//!
//! `T` is referenced to the vacuum propagation over the slab thickness and `R`
//! to the entrance face up to the constant factor `-e^{-ia}`. Neither choice
//! affects `|T|^2` or `|R|^2`.

use crate::dielectric::{ComplexIndex, DrudeLorentzModel};
use crate::{Complex, Error, Result};

/// Dimensionless working point of a single-resonance slab (`omega_t = 1`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledSlabParams {
    omega_tilde: f64,
    gamma_tilde: f64,
    d: f64,
    eps_s: f64,
}

impl ScaledSlabParams {
    /// `omega_tilde` and `gamma_tilde` must be positive, `d >= 0` and
    /// `eps_s > 1`.
    pub fn new(omega_tilde: f64, gamma_tilde: f64, d: f64, eps_s: f64) -> Result<Self> {
        if !(gamma_tilde.is_finite() && gamma_tilde > 0.0) {
            return Err(Error::invalid("gamma_tilde", format!("must be > 0, got {gamma_tilde}")));
        }
        Self::build(omega_tilde, gamma_tilde, d, eps_s)
    }

    /// Same as [`ScaledSlabParams::new`] with `gamma_tilde = 0`. Used to check
    /// identities that hold only without absorption.
    pub fn lossless(omega_tilde: f64, d: f64, eps_s: f64) -> Result<Self> {
        Self::build(omega_tilde, 0.0, d, eps_s)
    }

    fn build(omega_tilde: f64, gamma_tilde: f64, d: f64, eps_s: f64) -> Result<Self> {
        if !(omega_tilde.is_finite() && omega_tilde > 0.0) {
            return Err(Error::invalid("omega_tilde", format!("must be > 0, got {omega_tilde}")));
        }
        if !(d.is_finite() && d >= 0.0) {
            return Err(Error::invalid("d", format!("must be >= 0, got {d}")));
        }
        if !(eps_s.is_finite() && eps_s > 1.0) {
            return Err(Error::invalid("eps_s", format!("must be > 1, got {eps_s}")));
        }
        Ok(Self { omega_tilde, gamma_tilde, d, eps_s })
    }

    pub fn omega_tilde(&self) -> f64 {
        self.omega_tilde
    }

    pub fn gamma_tilde(&self) -> f64 {
        self.gamma_tilde
    }

    pub fn d(&self) -> f64 {
        self.d
    }

    pub fn eps_s(&self) -> f64 {
        self.eps_s
    }

    pub fn with_thickness(self, d: f64) -> Result<Self> {
        Self::build(self.omega_tilde, self.gamma_tilde, d, self.eps_s)
    }

    pub fn model(&self) -> Result<DrudeLorentzModel> {
        DrudeLorentzModel::scaled(self.eps_s, self.gamma_tilde)
    }

    pub fn index(&self) -> Result<ComplexIndex> {
        self.model()?.refractive_index(self.omega_tilde)
    }

    /// Vacuum phase `omega l / c = omega_tilde * d`.
    pub fn phase_arg(&self) -> f64 {
        self.omega_tilde * self.d
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabResponse {
    pub t: Complex,
    pub r: Complex,
    /// `1 - |t|^2 - |r|^2`.
    pub p: f64,
    /// `|t|^2 / |r|^2`, `+inf` when `|r|^2 = 0`.
    pub x: f64,
}

impl SlabResponse {
    pub fn from_index(n: ComplexIndex, phase_arg: f64) -> Result<Self> {
        let t = transmission(n, phase_arg)?;
        let r = reflection(n, phase_arg, t);
        Ok(Self::from_amplitudes(t, r))
    }

    pub fn from_amplitudes(t: Complex, r: Complex) -> Self {
        let t2 = t.norm_sqr();
        let r2 = r.norm_sqr();
        let x = if r2 == 0.0 { f64::INFINITY } else { t2 / r2 };
        Self { t, r, p: 1.0 - t2 - r2, x }
    }

    pub fn t_abs2(&self) -> f64 {
        self.t.norm_sqr()
    }

    pub fn r_abs2(&self) -> f64 {
        self.r.norm_sqr()
    }
}

/// Complex transmission amplitude.
pub fn transmission(n: ComplexIndex, phase_arg: f64) -> Result<Complex> {
    if !(phase_arg.is_finite() && phase_arg >= 0.0) {
        return Err(Error::invalid("phase_arg", format!("must be >= 0, got {phase_arg}")));
    }
    if phase_arg == 0.0 {
        // 4n / 4n, without the rounding
        return Ok(Complex::from(1.0));
    }
    let n = n.to_complex();
    let one = Complex::from(1.0);
    let i = Complex::i();
    let den = (one + n).powi(2) - (one - n).powi(2) * (i * 2.0 * n * phase_arg).exp();
    let den_abs = den.norm();
    if !den_abs.is_finite() || den_abs < f64::MIN_POSITIVE {
        return Err(Error::DegenerateDenominator(den_abs));
    }
    Ok(n * 4.0 * (i * (n - one) * phase_arg).exp() / den)
}

/// Complex reflection amplitude, given `t = transmission(n, phase_arg)`.
pub fn reflection(n: ComplexIndex, phase_arg: f64, t: Complex) -> Complex {
    let n = n.to_complex();
    let one = Complex::from(1.0);
    let i = Complex::i();
    (n - one) / (n + one) * (-i * phase_arg).exp() * (one - t * (i * (n + one) * phase_arg).exp())
}

/// Evaluates the slab at a scaled working point.
pub fn evaluate(params: &ScaledSlabParams) -> Result<SlabResponse> {
    SlabResponse::from_index(params.index()?, params.phase_arg())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const N: ComplexIndex = ComplexIndex { eta: 2.49, kappa: 0.001 };

    #[test]
    fn zero_thickness_is_transparent() {
        let t = transmission(N, 0.0).unwrap();
        assert!((t - Complex::from(1.0)).norm() < 1e-15);
        assert!(reflection(N, 0.0, t).norm() < 1e-15);

        let resp = evaluate(&ScaledSlabParams::new(1e-3, 1e-3, 0.0, 6.2).unwrap()).unwrap();
        assert_eq!(resp.p, 0.0);
        assert_eq!(resp.x, f64::INFINITY);
    }

    #[test]
    fn index_matched_slab_is_transparent() {
        let vac = ComplexIndex::real(1.0);
        for a in [0.0, 0.3, 17.0] {
            let t = transmission(vac, a).unwrap();
            assert!((t - Complex::from(1.0)).norm() < 1e-15);
            assert_eq!(reflection(vac, a, t), Complex::from(0.0));
        }
    }

    #[test]
    fn lossless_slab_conserves_energy() {
        let resp = evaluate(&ScaledSlabParams::lossless(1e-3, 100.0, 6.2).unwrap()).unwrap();
        assert!(resp.p.abs() < 1e-12);
    }

    #[test]
    fn lossless_symmetric_point_from_airy_formula() {
        // |R|^2/|T|^2 = ((eta^2-1)^2 / 4 eta^2) sin^2(phi) for a real index
        let eps: f64 = 6.2;
        let eta = eps.sqrt();
        let w = 1e-3;
        let phi = (2.0 * eta / (eps - 1.0)).asin();
        let d = phi / (eta * w);
        let resp = evaluate(&ScaledSlabParams::lossless(w, d, eps).unwrap()).unwrap();
        // eta(w) differs from the static index at O(w^2), which shifts phi
        assert!((resp.x - 1.0).abs() < 1e-4, "x = {}", resp.x);

        let direct = SlabResponse::from_index(ComplexIndex::real(eta), phi / eta).unwrap();
        assert!((direct.x - 1.0).abs() < 1e-12, "x = {}", direct.x);
    }

    #[test]
    fn half_wave_slab_does_not_reflect() {
        let eta = 2.49;
        let t = transmission(ComplexIndex::real(eta), PI / eta).unwrap();
        let r = reflection(ComplexIndex::real(eta), PI / eta, t);
        assert!(r.norm() < 1e-14);
        assert!((t.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn absorbing_slab_loses_energy() {
        let resp = SlabResponse::from_index(N, 0.5).unwrap();
        assert!(resp.p > 0.0 && resp.p < 1.0);
    }

    #[test]
    fn invalid_working_points() {
        assert!(ScaledSlabParams::new(1e-3, 0.0, 1.0, 6.2).is_err());
        assert!(ScaledSlabParams::new(0.0, 1e-3, 1.0, 6.2).is_err());
        assert!(ScaledSlabParams::new(1e-3, 1e-3, -1.0, 6.2).is_err());
        assert!(ScaledSlabParams::new(1e-3, 1e-3, 1.0, 1.0).is_err());
        assert!(transmission(N, -0.1).is_err());
    }
}
