//! Hyperfine shift ΔA/A of a donor 10 nm below a 5 nm disc gate, split into
//! its second-order and first-order (2s admixture) parts.

use donorqc::constants::{hyperfine_constant, MaterialParams, PhysicalConstants};
use donorqc::electrostatics::{Convention, GateGeometry};
use donorqc::hyperfine::{gate_shift, shift_polynomial};

fn main() {
    let (mat, pc) = (MaterialParams::default(), PhysicalConstants::default());
    let gate = GateGeometry::disc(5e-9, 10e-9).expect("valid geometry");
    let a0 = hyperfine_constant(&mat, &pc).hertz;
    println!("A/h = {a0:.4e} Hz");
    for conv in [Convention::Published, Convention::Harmonic] {
        let p = shift_polynomial(&gate, &mat, &pc, conv);
        println!(
            "{conv:?}: ΔA/A = {:.4}·V {:+.4}·V²  (second order {:+.4}, squared admixture {:+.4})",
            p.linear, p.quadratic, p.quadratic_second_order, p.quadratic_first_order
        );
    }
    println!("\n   V     2ΔF₂/F     2ΔF₁/F    (ΔF₁/F)²     total      Δν (MHz)");
    for i in 0..=10 {
        let v = 0.1 * i as f64;
        let s = gate_shift(&gate, v, &mat, &pc, Convention::Published);
        println!(
            "{v:5.2} {:+.3e} {:+.3e} {:+.3e} {:+.3e} {:9.3}",
            s.second_order,
            s.first_order_linear,
            s.first_order_squared,
            s.total,
            s.total * a0 * 1e-6
        );
    }
}
