//! Minimal absorption at a fixed splitting ratio.
//!
//! For a target ratio `x = |T|^2 / |R|^2` the slab thickness is tied to the
//! permittivity: within the first Fabry–Pérot period `phi = eta * omega * d`
//! in `(0, pi)` the ratio falls from `+inf` to its minimum near `phi = pi/2`
//! and rises again, so each feasible `eps_s` has one root below the turning
//! point ([`Branch::Lower`]) and one above it ([`Branch::Upper`]). The outer
//! problem is one-dimensional in `eps_s`: a logarithmic scan in `eps_s - 1`
//! followed by golden-section refinement around the best scan point, done
//! separately per branch.
//!
//! Later periods (`phi + k pi`, `k >= 1`) reach the same ratio with a thicker
//! slab and are never searched.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::numeric::{brent_root, golden_section_min, RootOptions};
use crate::slab::SlabResponse;
use crate::{DrudeLorentzModel, Error, Result};

/// Which of the two first-period roots of the ratio constraint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    /// Phase below the turning point (`phi < pi/2` without loss).
    Lower,
    /// Phase above the turning point (`phi > pi/2` without loss).
    Upper,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Lower => "lower",
            Branch::Upper => "upper",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BranchPolicy {
    #[default]
    Both,
    LowerOnly,
    UpperOnly,
}

impl BranchPolicy {
    fn branches(self) -> &'static [Branch] {
        match self {
            BranchPolicy::Both => &[Branch::Lower, Branch::Upper],
            BranchPolicy::LowerOnly => &[Branch::Lower],
            BranchPolicy::UpperOnly => &[Branch::Upper],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeConfig {
    pub x_target: f64,
    pub gamma_tilde: f64,
    pub omega_tilde: f64,
    pub eps_s_min: f64,
    pub eps_s_max: f64,
    pub branch_policy: BranchPolicy,
    /// Bound on `|x - x_target| / x_target` at the returned thickness.
    pub constraint_tol: f64,
    /// Width of the final golden-section bracket in `ln(eps_s - 1)`.
    pub objective_tol: f64,
    /// Largest acceptable relative drift of alpha between refinement levels.
    pub extrapolation_tol: f64,
    /// Number of log-spaced permittivities in the coarse scan.
    pub scan_points: usize,
}

impl MinimizeConfig {
    pub const DEFAULT_GAMMA_TILDE: f64 = 1e-3;
    pub const DEFAULT_OMEGA_TILDE: f64 = 1e-3;
    pub const DEFAULT_EPS_S_MIN: f64 = 1.0 + 1e-6;
    pub const DEFAULT_EPS_S_MAX: f64 = 1e3;

    pub fn new(x_target: f64) -> Self {
        Self {
            x_target,
            gamma_tilde: Self::DEFAULT_GAMMA_TILDE,
            omega_tilde: Self::DEFAULT_OMEGA_TILDE,
            eps_s_min: Self::DEFAULT_EPS_S_MIN,
            eps_s_max: Self::DEFAULT_EPS_S_MAX,
            branch_policy: BranchPolicy::Both,
            constraint_tol: 1e-10,
            objective_tol: 1e-8,
            extrapolation_tol: 0.01,
            scan_points: 400,
        }
    }

    pub fn with_target(&self, x_target: f64) -> Self {
        Self { x_target, ..self.clone() }
    }

    pub fn with_small_parameters(&self, gamma_tilde: f64, omega_tilde: f64) -> Self {
        Self { gamma_tilde, omega_tilde, ..self.clone() }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, format!("must be finite and > 0, got {v}")))
            }
        };
        positive("x_target", self.x_target)?;
        positive("gamma_tilde", self.gamma_tilde)?;
        positive("omega_tilde", self.omega_tilde)?;
        positive("constraint_tol", self.constraint_tol)?;
        positive("objective_tol", self.objective_tol)?;
        positive("extrapolation_tol", self.extrapolation_tol)?;
        if self.omega_tilde >= 1.0 || self.gamma_tilde >= 1.0 {
            return Err(Error::invalid(
                "small parameters",
                "gamma_tilde and omega_tilde must be below the resonance (< 1)",
            ));
        }
        if !(self.eps_s_min > 1.0 && self.eps_s_max > self.eps_s_min && self.eps_s_max.is_finite()) {
            return Err(Error::invalid(
                "eps_s_range",
                format!("need 1 < min < max, got ({}, {}]", self.eps_s_min, self.eps_s_max),
            ));
        }
        if self.scan_points < 3 {
            return Err(Error::invalid("scan_points", "need at least 3"));
        }
        Ok(())
    }
}

/// A thickness meeting the ratio constraint at fixed permittivity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThicknessSolution {
    pub d: f64,
    /// `Re n(omega) * omega * d`.
    pub phi: f64,
    pub response: SlabResponse,
    /// `|x - x_target| / x_target`.
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Diagnostics {
    pub scan_points: usize,
    /// Golden-section iterations of the outer search, summed over branches.
    pub outer_iterations: usize,
    /// Root-finder iterations of the final thickness solve.
    pub inner_iterations: usize,
    pub constraint_residual: f64,
    /// Optimal absorption on the branch that was not selected, if feasible.
    pub rejected_branch_p: Option<f64>,
    /// Relative drift of alpha between the last two refinement levels.
    pub extrapolation_drift: Option<f64>,
}

/// Outcome of [`minimize_absorption`].
///
/// When `feasible` is false the numeric fields are NaN and `branch` is `None`.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimizeResult {
    pub x_target: f64,
    pub gamma_tilde: f64,
    pub omega_tilde: f64,
    /// `p_min / (gamma_tilde * omega_tilde)`.
    pub alpha: f64,
    pub eps_s_star: f64,
    pub d_star: f64,
    pub p_min: f64,
    pub phi_star: f64,
    pub branch: Option<Branch>,
    pub feasible: bool,
    pub diagnostics: Diagnostics,
}

impl MinimizeResult {
    fn infeasible(cfg: &MinimizeConfig, diagnostics: Diagnostics) -> Self {
        Self {
            x_target: cfg.x_target,
            gamma_tilde: cfg.gamma_tilde,
            omega_tilde: cfg.omega_tilde,
            alpha: f64::NAN,
            eps_s_star: f64::NAN,
            d_star: f64::NAN,
            p_min: f64::NAN,
            phi_star: f64::NAN,
            branch: None,
            feasible: false,
            diagnostics,
        }
    }
}

/// Ratio the slab reaches with a lossless index at the turning point,
/// `4 eta^2 / (eps - 1)^2`. A target below this is out of reach.
pub fn lossless_min_ratio(eps_s: f64) -> f64 {
    4.0 * eps_s / (eps_s - 1.0).powi(2)
}

/// Smallest permittivity at which a lossless slab reaches ratio `x`:
/// `eta = (1 + sqrt(1 + x)) / sqrt(x)`.
pub fn lossless_feasibility_bound(x: f64) -> f64 {
    ((1.0 + (1.0 + x).sqrt()) / x.sqrt()).powi(2)
}

struct RatioProblem {
    n: crate::ComplexIndex,
    omega: f64,
    ln_target: f64,
}

impl RatioProblem {
    fn response(&self, d: f64) -> Result<SlabResponse> {
        SlabResponse::from_index(self.n, self.omega * d)
    }

    /// `ln x(d) - ln x_target`, clamped to a large finite value where `|R| = 0`.
    fn gap(&self, d: f64) -> f64 {
        match self.response(d) {
            Ok(r) if r.x.is_finite() => r.x.ln() - self.ln_target,
            _ => f64::MAX.ln(),
        }
    }
}

/// Finds the thickness at which the slab reaches `x_target` on the given
/// first-period branch. `Ok(None)` means the ratio is out of reach for this
/// permittivity, which is a normal outcome.
pub fn solve_thickness_for_ratio(
    eps_s: f64,
    x_target: f64,
    gamma_tilde: f64,
    omega_tilde: f64,
    branch: Branch,
    constraint_tol: f64,
) -> Result<Option<ThicknessSolution>> {
    if !(x_target.is_finite() && x_target > 0.0) {
        return Err(Error::invalid("x_target", format!("must be > 0, got {x_target}")));
    }
    if !(omega_tilde.is_finite() && omega_tilde > 0.0) {
        return Err(Error::invalid("omega_tilde", format!("must be > 0, got {omega_tilde}")));
    }
    let n = DrudeLorentzModel::scaled(eps_s, gamma_tilde)?.refractive_index(omega_tilde)?;
    let prob = RatioProblem { n, omega: omega_tilde, ln_target: x_target.ln() };
    let half_period = PI / (n.eta * omega_tilde);

    let turn = golden_section_min(|d| prob.gap(d), 0.02 * half_period, 0.98 * half_period, 1e-9, 0.0, 200)?;
    if turn.fx > 0.0 {
        return Ok(None);
    }

    // lossless seed for the lower root
    let s = (4.0 * eps_s / (x_target * (eps_s - 1.0).powi(2))).min(1.0);
    let seed = s.sqrt().asin() / (n.eta * omega_tilde);

    let (lo, hi) = match branch {
        Branch::Lower => {
            let mut lo = (0.5 * seed).min(0.5 * turn.x);
            let mut tries = 0;
            while prob.gap(lo) <= 0.0 {
                lo *= 0.5;
                tries += 1;
                if tries > 2000 || lo == 0.0 {
                    return Ok(None);
                }
            }
            (lo, turn.x)
        }
        Branch::Upper => {
            if prob.gap(half_period) <= 0.0 {
                return Ok(None);
            }
            (turn.x, half_period)
        }
    };
    if turn.fx == 0.0 {
        return finish(&prob, turn.x, 0, x_target, constraint_tol).map(Some);
    }

    let opts = RootOptions {
        xtol: 0.0,
        rtol: 2.0 * f64::EPSILON,
        ftol: 1e-3 * constraint_tol,
        max_iter: 300,
    };
    let root = brent_root(|d| prob.gap(d), lo, hi, opts)?;
    finish(&prob, root.x, root.iterations, x_target, constraint_tol).map(Some)
}

fn finish(prob: &RatioProblem, d: f64, iterations: usize, x_target: f64, tol: f64) -> Result<ThicknessSolution> {
    let response = prob.response(d)?;
    let residual = ((response.x - x_target) / x_target).abs();
    if !(residual <= tol) {
        return Err(Error::RootNotConverged { iterations, residual });
    }
    Ok(ThicknessSolution {
        d,
        phi: prob.n.eta * prob.omega * d,
        response,
        residual,
        iterations,
    })
}

struct BranchOptimum {
    branch: Branch,
    eps_s: f64,
    solution: ThicknessSolution,
    outer_iterations: usize,
}

fn optimize_branch(cfg: &MinimizeConfig, branch: Branch) -> Result<Option<BranchOptimum>> {
    let u_min = (cfg.eps_s_min - 1.0).ln();
    let u_max = (cfg.eps_s_max - 1.0).ln();
    let solve_at = |u: f64| -> Result<Option<ThicknessSolution>> {
        let eps = if u == u_max { cfg.eps_s_max } else { 1.0 + u.exp() };
        solve_thickness_for_ratio(eps, cfg.x_target, cfg.gamma_tilde, cfg.omega_tilde, branch, cfg.constraint_tol)
    };

    let m = cfg.scan_points;
    let grid: Vec<f64> = (0..m)
        .map(|i| {
            if i == m - 1 {
                u_max
            } else {
                u_min + (u_max - u_min) * i as f64 / (m - 1) as f64
            }
        })
        .collect();

    let mut best: Option<(usize, f64)> = None;
    for (i, &u) in grid.iter().enumerate() {
        if let Some(sol) = solve_at(u)? {
            if best.is_none_or(|(_, p)| sol.response.p < p) {
                best = Some((i, sol.response.p));
            }
        }
    }
    let Some((i_best, p_scan)) = best else {
        return Ok(None);
    };

    let lo = grid[i_best.saturating_sub(1)];
    let hi = grid[(i_best + 1).min(m - 1)];
    let mut failure = None;
    let objective = |u: f64| match solve_at(u) {
        Ok(Some(sol)) => sol.response.p,
        Ok(None) => f64::INFINITY,
        Err(e) => {
            failure.get_or_insert(e);
            f64::INFINITY
        }
    };
    let refined = golden_section_min(objective, lo, hi, 0.0, cfg.objective_tol, 500)?;
    if let Some(e) = failure {
        return Err(e);
    }

    let u_star = if refined.fx <= p_scan { refined.x } else { grid[i_best] };
    let solution = solve_at(u_star)?.ok_or(Error::MinimizerNotConverged { iterations: refined.iterations })?;
    let eps_s = if u_star == u_max { cfg.eps_s_max } else { 1.0 + u_star.exp() };
    Ok(Some(BranchOptimum {
        branch,
        eps_s,
        solution,
        outer_iterations: refined.iterations,
    }))
}

/// Minimizes `p = 1 - |T|^2 - |R|^2` over permittivity and thickness subject
/// to `|T|^2 / |R|^2 = x_target`.
///
/// An unreachable target is reported through `feasible = false`, not as an
/// error.
pub fn minimize_absorption(cfg: &MinimizeConfig) -> Result<MinimizeResult> {
    cfg.validate()?;
    let mut optima = Vec::new();
    for &branch in cfg.branch_policy.branches() {
        if let Some(opt) = optimize_branch(cfg, branch)? {
            optima.push(opt);
        }
    }
    let outer_iterations = optima.iter().map(|o| o.outer_iterations).sum();

    let mut diagnostics = Diagnostics {
        scan_points: cfg.scan_points,
        outer_iterations,
        ..Default::default()
    };

    let chosen = match optima.len() {
        0 => return Ok(MinimizeResult::infeasible(cfg, diagnostics)),
        1 => 0,
        _ => {
            let (a, b) = (&optima[0], &optima[1]);
            let (pa, pb) = (a.solution.response.p, b.solution.response.p);
            if (pa - pb).abs() <= cfg.objective_tol * pa.min(pb) {
                if a.solution.d <= b.solution.d { 0 } else { 1 }
            } else if pa < pb {
                0
            } else {
                1
            }
        }
    };
    diagnostics.rejected_branch_p = optima
        .iter()
        .enumerate()
        .find(|(i, _)| *i != chosen)
        .map(|(_, o)| o.solution.response.p);

    let best = &optima[chosen];
    let sol = best.solution;
    diagnostics.inner_iterations = sol.iterations;
    diagnostics.constraint_residual = sol.residual;

    Ok(MinimizeResult {
        x_target: cfg.x_target,
        gamma_tilde: cfg.gamma_tilde,
        omega_tilde: cfg.omega_tilde,
        alpha: sol.response.p / (cfg.gamma_tilde * cfg.omega_tilde),
        eps_s_star: best.eps_s,
        d_star: sol.d,
        p_min: sol.response.p,
        phi_star: sol.phi,
        branch: Some(best.branch),
        feasible: true,
        diagnostics,
    })
}

/// `count` levels starting at `(gamma_tilde, omega_tilde)`, each a factor of
/// ten below the previous one.
pub fn refinement_levels(gamma_tilde: f64, omega_tilde: f64, count: usize) -> Vec<(f64, f64)> {
    (0..count)
        .map(|k| {
            let s = 10f64.powi(-(k as i32));
            (gamma_tilde * s, omega_tilde * s)
        })
        .collect()
}

/// Alpha from the finest of several `(gamma_tilde, omega_tilde)` levels.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaEstimate {
    pub alpha: f64,
    /// Relative change of alpha between the last two levels.
    pub drift: f64,
    /// `drift <= extrapolation_tol`, i.e. `p_min` scales linearly in
    /// `gamma_tilde * omega_tilde`.
    pub linear: bool,
    pub feasible: bool,
    /// One result per level, coarsest first.
    pub levels: Vec<MinimizeResult>,
}

impl AlphaEstimate {
    /// Result at the finest level, with the drift recorded in its diagnostics.
    pub fn finest(&self) -> &MinimizeResult {
        self.levels.last().expect("at least two levels")
    }
}

/// Runs [`minimize_absorption`] at each `(gamma_tilde, omega_tilde)` level and
/// reports the final alpha with the inter-level drift as error estimate.
pub fn extract_alpha(template: &MinimizeConfig, levels: &[(f64, f64)]) -> Result<AlphaEstimate> {
    if levels.len() < 2 {
        return Err(Error::invalid("refinement", "need at least two levels"));
    }
    let mut results = Vec::with_capacity(levels.len());
    for &(g, w) in levels {
        let res = minimize_absorption(&template.with_small_parameters(g, w))?;
        let feasible = res.feasible;
        results.push(res);
        if !feasible {
            return Ok(AlphaEstimate {
                alpha: f64::NAN,
                drift: f64::NAN,
                linear: false,
                feasible: false,
                levels: results,
            });
        }
    }
    let k = results.len();
    let alpha = results[k - 1].alpha;
    let drift = ((alpha - results[k - 2].alpha) / alpha).abs();
    results[k - 1].diagnostics.extrapolation_drift = Some(drift);
    Ok(AlphaEstimate {
        alpha,
        drift,
        linear: drift <= template.extrapolation_tol,
        feasible: true,
        levels: results,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub x: f64,
    pub alpha: f64,
    pub eps_s_star: f64,
    pub d_star: f64,
    pub p_min: f64,
    pub feasible: bool,
}

impl From<&MinimizeResult> for SweepRow {
    fn from(r: &MinimizeResult) -> Self {
        Self {
            x: r.x_target,
            alpha: r.alpha,
            eps_s_star: r.eps_s_star,
            d_star: r.d_star,
            p_min: r.p_min,
            feasible: r.feasible,
        }
    }
}

/// `points` values from `min` to `max` inclusive, geometric when `log`.
pub fn grid(min: f64, max: f64, points: usize, log: bool) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(Error::invalid("points", format!("need at least 2, got {points}")));
    }
    if !(min.is_finite() && max.is_finite() && min < max) {
        return Err(Error::invalid("range", format!("need min < max, got [{min}, {max}]")));
    }
    if log && min <= 0.0 {
        return Err(Error::invalid("range", "log grid needs min > 0"));
    }
    let last = points - 1;
    Ok((0..points)
        .map(|i| {
            if i == 0 {
                min
            } else if i == last {
                max
            } else {
                let (a, b) = ((last - i) as f64, i as f64);
                if log {
                    10f64.powf((a * min.log10() + b * max.log10()) / last as f64)
                } else {
                    (a * min + b * max) / last as f64
                }
            }
        })
        .collect())
}

/// One [`minimize_absorption`] per ratio on up to `jobs` threads. Rows come
/// back in the order of `x_values`.
pub fn sweep(x_values: &[f64], template: &MinimizeConfig, jobs: usize) -> Result<Vec<SweepRow>> {
    if x_values.is_empty() {
        return Err(Error::invalid("x_values", "grid is empty"));
    }
    if let Some(bad) = x_values.iter().find(|x| !(x.is_finite() && **x > 0.0)) {
        return Err(Error::invalid("x_values", format!("ratios must be > 0, got {bad}")));
    }
    let run = || {
        x_values
            .par_iter()
            .map(|&x| minimize_absorption(&template.with_target(x)).map(|r| SweepRow::from(&r)))
            .collect::<Result<Vec<_>>>()
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::invalid("jobs", e.to_string()))?;
    pool.install(run)
}
