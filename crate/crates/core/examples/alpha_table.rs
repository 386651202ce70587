//! Prints alpha(x) and eps_s*(x) for a few splitting ratios.

use bsbound_core::optimizer::{minimize_absorption, MinimizeConfig};

fn main() -> Result<(), bsbound_core::Error> {
    for x in [0.01, 0.05, 0.2, 0.5, 1.0, 2.0, 5.0, 100.0, 1e4, 1e6] {
        let r = minimize_absorption(&MinimizeConfig::new(x))?;
        println!(
            "x = {x:>8e}  alpha = {:.6}  eps_s = {:.4}  d = {:.3}  phi = {:.4}  branch = {:?}  rejected p = {:?}",
            r.alpha, r.eps_s_star, r.d_star, r.phi_star, r.branch, r.diagnostics.rejected_branch_p
        );
    }
    Ok(())
}
