use bsbound_core::linewidth::{min_absorption_probability, scaled_linewidth_bound, DecayContext};
use bsbound_core::optimizer::{self, extract_alpha, minimize_absorption, refinement_levels, MinimizeConfig};
use bsbound_core::slab::{evaluate, ScaledSlabParams};

use crate::record::OutputRecord;
use crate::{Failure, Outcome};

pub fn eval(eps_s: f64, gamma: f64, omega: f64, thickness: f64) -> Result<Outcome, Failure> {
    let params = if gamma == 0.0 {
        ScaledSlabParams::lossless(omega, thickness, eps_s)?
    } else {
        ScaledSlabParams::new(omega, gamma, thickness, eps_s)?
    };
    let resp = evaluate(&params)?;
    let rec = OutputRecord::new()
        .push("eps_s", eps_s)
        .push("gamma", gamma)
        .push("omega", omega)
        .push("thickness", thickness)
        .push("t_re", resp.t.re)
        .push("t_im", resp.t.im)
        .push("t_abs2", resp.t_abs2())
        .push("r_re", resp.r.re)
        .push("r_im", resp.r.im)
        .push("r_abs2", resp.r_abs2())
        .push("p", resp.p)
        .push("x", resp.x);
    Ok(Outcome { records: vec![rec], infeasible: false })
}

pub fn minimize(x: f64, gamma: f64, omega: f64, eps_s_max: f64, refine_levels: u32) -> Result<Outcome, Failure> {
    let cfg = MinimizeConfig { eps_s_max, ..MinimizeConfig::new(x).with_small_parameters(gamma, omega) };
    let (res, drift) = if refine_levels == 0 {
        (minimize_absorption(&cfg)?, f64::NAN)
    } else {
        let est = extract_alpha(&cfg, &refinement_levels(gamma, omega, refine_levels as usize + 1))?;
        if est.feasible && !est.linear {
            eprintln!(
                "warning: alpha drifts by {:.3}% between the last two levels",
                100.0 * est.drift
            );
        }
        (est.finest().clone(), est.drift)
    };
    let rec = OutputRecord::new()
        .push("x", x)
        .push("gamma", gamma)
        .push("omega", omega)
        .push("eps_s_max", eps_s_max)
        .push("refine_levels", u64::from(refine_levels))
        .push("feasible", res.feasible)
        .push("alpha", res.alpha)
        .push("alpha_drift", drift)
        .push("eps_s", res.eps_s_star)
        .push("d", res.d_star)
        .push("phi", res.phi_star)
        .push("p_min", res.p_min)
        .push("branch", res.branch.map_or("none", |b| b.as_str()))
        .push("gamma_final", res.gamma_tilde)
        .push("omega_final", res.omega_tilde)
        .push("constraint_residual", if res.feasible { res.diagnostics.constraint_residual } else { f64::NAN });
    Ok(Outcome { records: vec![rec], infeasible: !res.feasible })
}

pub struct SweepGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub log: bool,
}

pub fn sweep(grid: SweepGrid, gamma: f64, omega: f64, eps_s_max: f64, jobs: usize) -> Result<Outcome, Failure> {
    let xs = optimizer::grid(grid.x_min, grid.x_max, grid.points, grid.log)?;
    let template = MinimizeConfig { eps_s_max, ..MinimizeConfig::new(1.0).with_small_parameters(gamma, omega) };
    let rows = optimizer::sweep(&xs, &template, jobs)?;
    let records = rows
        .iter()
        .map(|r| {
            OutputRecord::new()
                .push("x", r.x)
                .push("alpha", r.alpha)
                .push("eps_s", r.eps_s_star)
                .push("d", r.d_star)
                .push("p_min", r.p_min)
                .push("feasible", r.feasible)
        })
        .collect();
    // infeasible rows are data here
    Ok(Outcome { records, infeasible: false })
}

pub fn bound(x: f64, omega: f64, nvt: f64) -> Result<Outcome, Failure> {
    let cfg = MinimizeConfig::new(x);
    let res = minimize_absorption(&cfg)?;
    let (eta, linewidth, p_min) = if res.feasible {
        let ctx = DecayContext::from_static_permittivity(nvt, res.eps_s_star)?;
        (
            ctx.eta(),
            scaled_linewidth_bound(&ctx, omega),
            min_absorption_probability(res.alpha, &ctx, omega),
        )
    } else {
        (f64::NAN, f64::NAN, f64::NAN)
    };
    let rec = OutputRecord::new()
        .push("x", x)
        .push("omega", omega)
        .push("nvt", nvt)
        .push("alpha_gamma", cfg.gamma_tilde)
        .push("alpha_omega", cfg.omega_tilde)
        .push("feasible", res.feasible)
        .push("alpha", res.alpha)
        .push("eps_s", res.eps_s_star)
        .push("eta", eta)
        .push("linewidth", linewidth)
        .push("p_min", p_min)
        .push("prefactor", p_min / omega.powi(4));
    Ok(Outcome { records: vec![rec], infeasible: !res.feasible })
}
