//! Splitting of the two lowest M+m = −1 levels at strong field: closed form
//! against diagonalization, and the corresponding frequency for physical
//! parameters.

use donorqc::constants::{hyperfine_constant, MaterialParams, PhysicalConstants};
use donorqc::spin::{strong_field_gap, strong_field_gap_reduced, numerical_strong_field_gap, PhysicalSpinParams, SpinParams};

fn main() -> Result<(), donorqc::spin::SpinError> {
    let alpha = 0.05;
    println!("   β      closed form    numerical     rel. diff");
    for beta in [3.0, 4.0, 5.0, 7.0, 10.0, 20.0] {
        let closed = strong_field_gap_reduced(beta, alpha)?;
        let num = numerical_strong_field_gap(&SpinParams::new(beta, 0.0, alpha, alpha))?;
        println!("{beta:5.1}  {closed:.6e}  {num:.6e}  {:.2e}", (num - closed).abs() / closed);
    }

    let pc = PhysicalConstants::default();
    let a = hyperfine_constant(&MaterialParams::default(), &pc).joule;
    let j = a / alpha;
    let b = 5.0 * j / (2.0 * pc.mu_b);
    let gap = strong_field_gap(&PhysicalSpinParams { b, j, a_a: a, a_b: a }, &pc)?;
    println!("\nB = {b:.3} T, J/h = {:.3} GHz: splitting {:.4} MHz", pc.joule_to_hz(j) * 1e-9, gap.frequency * 1e-6);
    Ok(())
}
