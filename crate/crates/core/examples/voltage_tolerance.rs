//! Admissible gate-voltage noise: the δV that shifts the hyperfine frequency
//! by one ESR line width.

use donorqc::constants::hyperfine_constant;
use donorqc::electrostatics::GateGeometry;
use donorqc::error_budget::BudgetContext;

fn main() {
    let ctx = BudgetContext::default();
    let a0 = hyperfine_constant(&ctx.mat, &ctx.pc).hertz;
    let gates = [
        GateGeometry::disc(5e-9, 10e-9).unwrap(),
        GateGeometry::strip(5e-9, 10e-9, 500e-9).unwrap(),
    ];
    for line_width in [1e3, 1e4, 1e5] {
        println!("line width {line_width:.0e} Hz");
        for gate in &gates {
            for v in [0.25, 0.5, 1.0, 2.0] {
                let t = ctx.admissible_voltage_error(gate, v, line_width, a0);
                println!(
                    "  {:5} V = {v:4.2}: δV = {:.3e} V ({:?} limit, slope {:+.4}/V)",
                    gate.kind_name(),
                    t.dv,
                    t.limit,
                    t.slope
                );
            }
        }
    }
}
