use std::f64::consts::PI;

use bsbound_core::optimizer::{
    extract_alpha, grid, lossless_feasibility_bound, minimize_absorption, refinement_levels, solve_thickness_for_ratio,
    sweep, Branch, BranchPolicy, MinimizeConfig, SweepRow,
};
use bsbound_core::slab::{evaluate, ScaledSlabParams, SlabResponse};
use bsbound_core::DrudeLorentzModel;

/// Least absorption among all constrained points found by scanning `d` over
/// two Fabry–Pérot periods at every permittivity in `eps_grid`. Sign changes
/// of `ln x(d) - ln x_target` are bisected to full precision.
fn grid_search(x_target: f64, g: f64, w: f64, eps_grid: &[f64], d_points: usize) -> (f64, f64) {
    let mut best = (f64::INFINITY, f64::NAN);
    for &eps in eps_grid {
        let n = DrudeLorentzModel::scaled(eps, g).unwrap().refractive_index(w).unwrap();
        let span = 2.0 * PI / (n.eta * w);
        let gap = |d: f64| SlabResponse::from_index(n, w * d).unwrap().x.ln() - x_target.ln();
        let step = span / d_points as f64;
        let mut d_prev = 0.5 * step;
        let mut f_prev = gap(d_prev);
        for k in 1..d_points {
            let d = (k as f64 + 0.5) * step;
            let f = gap(d);
            if f.signum() != f_prev.signum() {
                let (mut lo, mut hi, f_lo) = (d_prev, d, f_prev);
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if gap(mid).signum() == f_lo.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                let p = SlabResponse::from_index(n, w * 0.5 * (lo + hi)).unwrap().p;
                if p < best.0 {
                    best = (p, eps);
                }
            }
            d_prev = d;
            f_prev = f;
        }
    }
    best
}

fn brute_force(x_target: f64, g: f64, w: f64) -> (f64, f64) {
    let (lo, hi): (f64, f64) = (1.0 + 1e-3, 1e3);
    let coarse: Vec<f64> = (0..500)
        .map(|i| lo * (hi / lo).powf(i as f64 / 499.0))
        .collect();
    let (_, eps0) = grid_search(x_target, g, w, &coarse, 5000);
    let ratio = (hi / lo).powf(1.0 / 499.0);
    let fine: Vec<f64> = (0..=200)
        .map(|i| eps0 / ratio + (eps0 * ratio - eps0 / ratio) * i as f64 / 200.0)
        .collect();
    grid_search(x_target, g, w, &fine, 5000)
}

#[test]
fn matches_brute_force_grid_search() {
    for x in [0.5, 1.0, 2.0] {
        let res = minimize_absorption(&MinimizeConfig::new(x)).unwrap();
        let (p_grid, eps_grid) = brute_force(x, 1e-3, 1e-3);
        let rel = (res.p_min - p_grid).abs() / p_grid;
        assert!(rel < 5e-3, "x = {x}: optimizer {} at eps {}, grid {p_grid} at eps {eps_grid}", res.p_min, res.eps_s_star);
        // the optimizer must not be beaten by the grid
        assert!(res.p_min <= p_grid * (1.0 + 1e-9));
    }
}

#[test]
fn symmetric_splitter() {
    let res = minimize_absorption(&MinimizeConfig::new(1.0)).unwrap();
    assert!(res.feasible);
    assert!((0.85..=0.95).contains(&res.alpha), "alpha = {}", res.alpha);
    assert!((6.0..=6.4).contains(&res.eps_s_star), "eps_s = {}", res.eps_s_star);
    assert!(res.eps_s_star > lossless_feasibility_bound(1.0));
    assert_eq!(res.branch, Some(Branch::Lower));
}

#[test]
fn results_reproduce_target_ratio() {
    for x in [0.01, 0.3, 1.0, 7.0, 300.0] {
        let res = minimize_absorption(&MinimizeConfig::new(x)).unwrap();
        let params = ScaledSlabParams::new(res.omega_tilde, res.gamma_tilde, res.d_star, res.eps_s_star).unwrap();
        let resp = evaluate(&params).unwrap();
        assert!(((resp.x - x) / x).abs() <= 1e-10, "x = {x}: got {}", resp.x);
        assert_eq!(resp.p, res.p_min);
        assert!(res.diagnostics.constraint_residual <= 1e-10);
        assert!(res.p_min > 0.0 && res.alpha > 0.0);
    }
}

#[test]
fn selected_branch_dominates() {
    for x in grid(0.01, 100.0, 9, true).unwrap() {
        let res = minimize_absorption(&MinimizeConfig::new(x)).unwrap();
        if let Some(other) = res.diagnostics.rejected_branch_p {
            assert!(res.p_min <= other, "x = {x}");
        }
        let lower = minimize_absorption(&MinimizeConfig { branch_policy: BranchPolicy::LowerOnly, ..MinimizeConfig::new(x) }).unwrap();
        let upper = minimize_absorption(&MinimizeConfig { branch_policy: BranchPolicy::UpperOnly, ..MinimizeConfig::new(x) }).unwrap();
        assert_eq!(res.p_min, lower.p_min.min(upper.p_min));
    }
}

#[test]
fn alpha_is_stable_under_halving() {
    for x in [0.5, 1.0, 2.0] {
        let base = minimize_absorption(&MinimizeConfig::new(x)).unwrap().alpha;
        for (g, w) in [(5e-4, 1e-3), (1e-3, 5e-4), (5e-4, 5e-4)] {
            let a = minimize_absorption(&MinimizeConfig::new(x).with_small_parameters(g, w)).unwrap().alpha;
            assert!(((a - base) / base).abs() < 0.01, "x = {x} at ({g}, {w}): {a} vs {base}");
        }
    }
}

#[test]
fn absorption_is_linear_in_line_width() {
    for x in [0.2, 1.0, 5.0] {
        let p1 = minimize_absorption(&MinimizeConfig::new(x)).unwrap().p_min;
        let p2 = minimize_absorption(&MinimizeConfig::new(x).with_small_parameters(2e-3, 1e-3)).unwrap().p_min;
        assert!((p2 / p1 - 2.0).abs() < 0.02, "x = {x}: ratio {}", p2 / p1);
    }
}

#[test]
fn extract_alpha_symmetric() {
    let est = extract_alpha(&MinimizeConfig::new(1.0), &refinement_levels(1e-3, 1e-3, 2)).unwrap();
    assert!(est.feasible && est.linear);
    assert!(est.drift < 0.01);
    assert!((0.85..=0.95).contains(&est.alpha));
    assert_eq!(est.levels.len(), 2);
    assert_eq!(est.finest().gamma_tilde, 1e-4);
    assert_eq!(est.finest().diagnostics.extrapolation_drift, Some(est.drift));
}

#[test]
fn extract_alpha_propagates_infeasibility() {
    let cfg = MinimizeConfig { eps_s_max: 5.0, ..MinimizeConfig::new(1.0) };
    let est = extract_alpha(&cfg, &refinement_levels(1e-3, 1e-3, 2)).unwrap();
    assert!(!est.feasible);
    assert!(est.alpha.is_nan());
}

#[test]
fn large_ratio_drives_alpha_to_zero() {
    let res = minimize_absorption(&MinimizeConfig::new(1e4)).unwrap();
    assert!(res.alpha < 0.05, "alpha = {}", res.alpha);
    let res = minimize_absorption(&MinimizeConfig::new(1e6)).unwrap();
    assert!(res.alpha < 0.05);
    assert!(res.phi_star < 1e-3);
}

#[test]
fn sweep_is_unimodal_and_peaks_near_one() {
    let xs = grid(1e-2, 1e2, 41, true).unwrap();
    let rows = sweep(&xs, &MinimizeConfig::new(1.0), 4).unwrap();
    assert!(rows.iter().all(|r| r.feasible));
    let peak = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.alpha.total_cmp(&b.1.alpha))
        .unwrap()
        .0;
    assert!(rows[..peak].windows(2).all(|w| w[0].alpha < w[1].alpha));
    assert!(rows[peak..].windows(2).all(|w| w[0].alpha > w[1].alpha));
    assert!((0.5..=2.0).contains(&rows[peak].x));
    // permittivity keeps growing as the splitter becomes more reflective
    assert!(rows[..=peak].windows(2).all(|w| w[0].eps_s_star > w[1].eps_s_star));
}

#[test]
fn small_ratio_needs_large_permittivity() {
    let res = minimize_absorption(&MinimizeConfig::new(0.05)).unwrap();
    let bound = lossless_feasibility_bound(0.05);
    assert!(res.eps_s_star >= bound && res.eps_s_star > 6.2 * 5.0);

    // brute force confirms it
    let (_, eps_grid) = brute_force(0.05, 1e-3, 1e-3);
    assert!(((eps_grid - res.eps_s_star) / res.eps_s_star).abs() < 0.02, "{eps_grid} vs {}", res.eps_s_star);
}

#[test]
fn sweep_rows_match_standalone_runs() {
    let template = MinimizeConfig::new(1.0);
    let xs = [0.05, 0.2, 1.0, 5.0, 20.0];
    let rows = sweep(&xs, &template, 3).unwrap();
    let alone = SweepRow::from(&minimize_absorption(&template).unwrap());
    assert_eq!(rows[2], alone);
    let peak = rows.iter().max_by(|a, b| a.alpha.total_cmp(&b.alpha)).unwrap();
    assert_eq!(peak.x, 1.0);

    let serial = sweep(&xs, &template, 1).unwrap();
    assert_eq!(serial, rows);
}

#[test]
fn sweep_reports_infeasible_rows() {
    let template = MinimizeConfig { eps_s_max: 8.0, ..MinimizeConfig::new(1.0) };
    let rows = sweep(&[0.1, 1.0], &template, 2).unwrap();
    assert!(!rows[0].feasible && rows[0].alpha.is_nan());
    assert!(rows[1].feasible);
}

#[test]
fn minimization_is_deterministic() {
    let cfg = MinimizeConfig::new(0.7);
    let a = minimize_absorption(&cfg).unwrap();
    let b = minimize_absorption(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.alpha.to_bits(), b.alpha.to_bits());
}

#[test]
fn thickness_feasibility_matches_lossless_scan() {
    // brute-force the smallest reachable ratio over d for a few permittivities
    for eps in [3.0, 5.0, 5.8, 5.9, 8.0] {
        let n = DrudeLorentzModel::scaled(eps, 1e-3).unwrap().refractive_index(1e-3).unwrap();
        let half = PI / (n.eta * 1e-3);
        let x_min = (1..10_000)
            .map(|k| SlabResponse::from_index(n, 1e-3 * half * k as f64 / 10_000.0).unwrap().x)
            .fold(f64::INFINITY, f64::min);
        let reachable = solve_thickness_for_ratio(eps, 1.0, 1e-3, 1e-3, Branch::Lower, 1e-10)
            .unwrap()
            .is_some();
        assert_eq!(reachable, x_min <= 1.0, "eps {eps}: x_min {x_min}");
        assert_eq!(reachable, eps >= lossless_feasibility_bound(1.0));
    }
}
