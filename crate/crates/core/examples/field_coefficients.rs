//! Local field expansion at the donor for disc and strip gates, checked
//! against the exact potential through the Taylor residual.

use donorqc::electrostatics::{taylor_check, Convention, GateGeometry};

fn main() {
    let gates = [
        GateGeometry::disc(5e-9, 10e-9).unwrap(),
        GateGeometry::strip(5e-9, 10e-9, 500e-9).unwrap(),
    ];
    for gate in &gates {
        println!("{} gate, V = 1:", gate.kind_name());
        for conv in [Convention::Published, Convention::Harmonic] {
            let fc = gate.field_coeffs(1.0, conv);
            println!(
                "  {conv:?}: φ₀ = {:.4} V, E = {:.4e} V/m, E'_z = {:.4e} V/m², E''_t = {:.4e} V/m²",
                fc.phi0, fc.e_c, fc.e1_c, fc.e2_c
            );
            for probe in [0.5e-9, 1e-9, 2e-9] {
                match taylor_check(gate, 1.0, 2, probe, conv) {
                    Ok(r) => println!("    residual at {:.1} nm: {r:.3e} V", probe * 1e9),
                    Err(e) => println!("    residual at {:.1} nm: {e}", probe * 1e9),
                }
            }
        }
    }
}
