//! Locate the anticrossings used for adiabatic state transfer and follow the
//! |15⟩ and |13⟩ levels through them.

use donorqc::constants::PhysicalConstants;
use donorqc::spin::{
    adiabatic_transfer_trace, default_grid, find_anticrossings, refine_grid, sweep_spectrum, MuMode,
    SweepTemplate,
};

fn main() -> Result<(), donorqc::spin::SpinError> {
    let t = SweepTemplate {
        alpha_a: 0.3,
        alpha_b: 0.4,
        mu: MuMode::physical(&PhysicalConstants::default()),
    };
    let coarse = sweep_spectrum(&t, &default_grid())?;
    let centres: Vec<f64> = find_anticrossings(&coarse)?.iter().map(|e| e.beta_star).collect();
    let sweep = sweep_spectrum(&t, &refine_grid(&coarse.betas, &centres, 0.05, 10))?;
    for e in find_anticrossings(&sweep)? {
        println!(
            "M+m = {:+}: |{}⟩ → |{}⟩, β½ = {:.4}, β* = {:.4}, gap/J = {:.4}{}",
            e.block,
            e.pair.0,
            e.pair.1,
            e.beta_half,
            e.beta_star,
            e.min_gap,
            if e.lowest { ", lowest level" } else { "" }
        );
    }
    for label in [15, 13] {
        let tr = adiabatic_transfer_trace(&sweep, label);
        println!(
            "|{label}⟩ at β = {:.1} ends as |{}⟩ (weight {:.2}) at β = {:.1}; sector {} → {}",
            sweep.betas.last().unwrap(),
            tr.exit.0,
            tr.exit.1,
            sweep.betas[0],
            tr.entry_sector.0,
            tr.exit_sector.0
        );
    }
    Ok(())
}
