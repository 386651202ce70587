//! Drude–Lorentz susceptibility and the complex refractive index.
//!
//! Frequencies carry whatever unit the caller picked, as long as it is the
//! same for every resonance and every evaluation point. The optimization
//! pipeline uses the scaled convention `omega_t = 1`.

use crate::quad::{self, QuadOptions};
use crate::{Complex, Error, Result};

/// One damped-oscillator term `omega_p^2 / (omega_t^2 - omega^2 - i gamma omega)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Resonance {
    omega_t: f64,
    omega_p: f64,
    gamma: f64,
}

impl Resonance {
    /// All three parameters must be strictly positive and finite.
    pub fn new(omega_t: f64, omega_p: f64, gamma: f64) -> Result<Self> {
        check_positive("omega_t", omega_t)?;
        check_positive("omega_p", omega_p)?;
        check_positive("gamma", gamma)?;
        Ok(Self { omega_t, omega_p, gamma })
    }

    /// Undamped resonance (`gamma = 0`).
    ///
    /// Only meant for checking lossless identities; the susceptibility of such
    /// a term diverges at `omega = omega_t` and is purely real elsewhere.
    pub fn lossless(omega_t: f64, omega_p: f64) -> Result<Self> {
        check_positive("omega_t", omega_t)?;
        check_positive("omega_p", omega_p)?;
        Ok(Self { omega_t, omega_p, gamma: 0.0 })
    }

    pub fn omega_t(&self) -> f64 {
        self.omega_t
    }

    pub fn omega_p(&self) -> f64 {
        self.omega_p
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `omega_p^2 / omega_t^2`, the static contribution to `chi(0)`.
    pub fn strength(&self) -> f64 {
        (self.omega_p / self.omega_t).powi(2)
    }

    fn susceptibility(&self, omega: f64) -> Complex {
        let den = Complex::new(
            self.omega_t * self.omega_t - omega * omega,
            -self.gamma * omega,
        );
        Complex::from(self.omega_p * self.omega_p) / den
    }
}

fn check_positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite and > 0, got {v}")))
    }
}

/// Complex refractive index `n = eta + i kappa`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexIndex {
    pub eta: f64,
    pub kappa: f64,
}

impl ComplexIndex {
    pub fn new(eta: f64, kappa: f64) -> Self {
        Self { eta, kappa }
    }

    /// Real index without absorption.
    pub fn real(eta: f64) -> Self {
        Self { eta, kappa: 0.0 }
    }

    pub fn to_complex(self) -> Complex {
        Complex::new(self.eta, self.kappa)
    }
}

impl From<ComplexIndex> for Complex {
    fn from(n: ComplexIndex) -> Self {
        n.to_complex()
    }
}

/// Susceptibility as a non-empty sum of Drude–Lorentz resonances.
#[derive(Debug, Clone, PartialEq)]
pub struct DrudeLorentzModel {
    resonances: Vec<Resonance>,
}

impl DrudeLorentzModel {
    pub fn new(resonances: Vec<Resonance>) -> Result<Self> {
        if resonances.is_empty() {
            return Err(Error::invalid("resonances", "model needs at least one resonance"));
        }
        Ok(Self { resonances })
    }

    pub fn single(omega_t: f64, omega_p: f64, gamma: f64) -> Result<Self> {
        Ok(Self { resonances: vec![Resonance::new(omega_t, omega_p, gamma)?] })
    }

    /// Single resonance at `omega_t = 1` with static permittivity `eps_s` and
    /// scaled line width `gamma_tilde` (zero allowed for the lossless case).
    pub fn scaled(eps_s: f64, gamma_tilde: f64) -> Result<Self> {
        if !(eps_s.is_finite() && eps_s > 1.0) {
            return Err(Error::invalid("eps_s", format!("must be > 1, got {eps_s}")));
        }
        let omega_p = (eps_s - 1.0).sqrt();
        let res = if gamma_tilde == 0.0 {
            Resonance::lossless(1.0, omega_p)?
        } else {
            Resonance::new(1.0, omega_p, gamma_tilde)?
        };
        Ok(Self { resonances: vec![res] })
    }

    pub fn resonances(&self) -> &[Resonance] {
        &self.resonances
    }

    /// `chi(0) = sum omega_p^2 / omega_t^2`.
    pub fn static_susceptibility(&self) -> f64 {
        self.resonances.iter().map(Resonance::strength).sum()
    }

    /// `eps_s = 1 + chi(0)`.
    pub fn static_permittivity(&self) -> f64 {
        1.0 + self.static_susceptibility()
    }

    /// `chi(omega)`; the imaginary part is positive for `omega > 0` and
    /// exactly zero at `omega = 0`.
    pub fn susceptibility(&self, omega: f64) -> Complex {
        self.resonances
            .iter()
            .map(|r| r.susceptibility(omega))
            .sum()
    }

    /// `n = sqrt(1 + chi)` on the principal branch, so `eta > 0` and
    /// `kappa >= 0` whenever `Im chi >= 0`.
    pub fn refractive_index(&self, omega: f64) -> Result<ComplexIndex> {
        if !(omega.is_finite() && omega >= 0.0) {
            return Err(Error::invalid("omega", format!("must be finite and >= 0, got {omega}")));
        }
        if omega == 0.0 {
            return Ok(ComplexIndex::real(self.static_permittivity().sqrt()));
        }
        let eps = Complex::from(1.0) + self.susceptibility(omega);
        if !(eps.re.is_finite() && eps.im.is_finite()) || (eps.im == 0.0 && eps.re <= 0.0) {
            return Err(Error::BranchCut { re: eps.re, im: eps.im });
        }
        let n = eps.sqrt();
        Ok(ComplexIndex { eta: n.re, kappa: n.im })
    }

    /// Lowest-order expansion of `eta` and `kappa` for `omega` well below every
    /// resonance. No check is made that `omega` is actually small.
    pub fn low_frequency_approx(&self, omega: f64) -> ComplexIndex {
        let eta = self.static_permittivity().sqrt();
        let sum: f64 = self
            .resonances
            .iter()
            .map(|r| (r.gamma / r.omega_t) * r.strength() / r.omega_t)
            .sum();
        ComplexIndex { eta, kappa: omega / (2.0 * eta) * sum }
    }

    /// Numerical check of `int_0^inf (eta(omega) - 1) d omega = 0`.
    ///
    /// The integral is taken up to `omega_max` and the remainder is replaced
    /// by the asymptote `eta - 1 ~ -sum omega_p^2 / (2 omega^2)`. The quadrature
    /// is run at two tolerances; if they disagree by more than `opts.rel_tol`
    /// (relative to `int |eta - 1|`), the result is reported as unconverged.
    pub fn superconvergence_residual(&self, omega_max: f64, opts: SumRuleOptions) -> Result<SumRuleResidual> {
        let top = self
            .resonances
            .iter()
            .map(|r| r.omega_t)
            .fold(0.0, f64::max);
        if !(omega_max.is_finite() && omega_max > top) {
            return Err(Error::invalid(
                "omega_max",
                format!("must exceed every resonance frequency ({top}), got {omega_max}"),
            ));
        }

        let breaks = self.quadrature_breakpoints(omega_max);
        let deviation = |w: f64| match self.refractive_index(w) {
            Ok(n) => n.eta - 1.0,
            Err(_) => f64::NAN,
        };

        let abs_opts = QuadOptions { abs_tol: 0.0, rel_tol: opts.rel_tol.max(1e-10), max_panels: opts.max_panels };
        let abs_integral = quad::integrate(|w| deviation(w).abs(), 0.0, omega_max, &breaks, abs_opts)?.value;
        let scale = abs_integral.max(f64::MIN_POSITIVE);

        let coarse_opts = QuadOptions { abs_tol: opts.rel_tol * scale, rel_tol: 0.0, max_panels: opts.max_panels };
        let fine_opts = QuadOptions { abs_tol: 0.1 * opts.rel_tol * scale, ..coarse_opts };
        let coarse = quad::integrate(deviation, 0.0, omega_max, &breaks, coarse_opts)?;
        let fine = quad::integrate(deviation, 0.0, omega_max, &breaks, fine_opts)?;
        let refinement_gap = (fine.value - coarse.value).abs();
        if refinement_gap > opts.rel_tol * scale || !fine.value.is_finite() {
            return Err(Error::QuadratureNotConverged { estimate: fine.value, error: refinement_gap });
        }

        let plasma_sq: f64 = self.resonances.iter().map(|r| r.omega_p * r.omega_p).sum();
        let tail = -plasma_sq / (2.0 * omega_max);
        Ok(SumRuleResidual {
            residual: fine.value + tail,
            integral: fine.value,
            tail,
            abs_integral,
            refinement_gap,
            panels: fine.panels,
        })
    }

    /// Panel edges at `omega_t ± 10 gamma` for every resonance, plus a
    /// geometric ladder above the highest resonance for the slowly decaying tail.
    fn quadrature_breakpoints(&self, omega_max: f64) -> Vec<f64> {
        let mut pts = Vec::new();
        let mut top: f64 = 0.0;
        for r in &self.resonances {
            pts.push(r.omega_t);
            pts.push((r.omega_t - 10.0 * r.gamma).max(0.0));
            pts.push(r.omega_t + 10.0 * r.gamma);
            top = top.max(r.omega_t + 10.0 * r.gamma);
        }
        let mut edge = 2.0 * top;
        while edge < omega_max {
            pts.push(edge);
            edge *= 2.0;
        }
        pts
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SumRuleOptions {
    /// Tolerance relative to `int_0^omega_max |eta - 1|`.
    pub rel_tol: f64,
    pub max_panels: usize,
}

impl Default for SumRuleOptions {
    fn default() -> Self {
        Self { rel_tol: 1e-11, max_panels: 20_000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumRuleResidual {
    /// `integral + tail`; tends to zero as `omega_max` grows.
    pub residual: f64,
    /// `int_0^omega_max (eta - 1)`.
    pub integral: f64,
    /// Analytic estimate of the integral beyond `omega_max`.
    pub tail: f64,
    /// `int_0^omega_max |eta - 1|`, the natural scale for `residual`.
    pub abs_integral: f64,
    /// Difference between the two quadrature levels.
    pub refinement_gap: f64,
    pub panels: usize,
}
