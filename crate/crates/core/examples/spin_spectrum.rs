//! Sixteen-level spectrum of two coupled donors against β = 2μ_B B/J,
//! written as CSV to stdout.

use donorqc::constants::PhysicalConstants;
use donorqc::spin::export::write_sweep_csv;
use donorqc::spin::sweep::linear_grid;
use donorqc::spin::{sweep_spectrum, MuMode, SweepTemplate};

fn main() {
    let t = SweepTemplate {
        alpha_a: 0.3,
        alpha_b: 0.4,
        mu: MuMode::physical(&PhysicalConstants::default()),
    };
    let sweep = sweep_spectrum(&t, &linear_grid(0.2, 3.0, 57)).expect("eigensolver converges");
    eprintln!("{} levels, {} grid points", sweep.tracks.len(), sweep.betas.len());
    write_sweep_csv(&sweep, std::io::stdout().lock()).expect("stdout");
}
