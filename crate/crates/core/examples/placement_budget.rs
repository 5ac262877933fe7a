//! Placement error budget for a strip gate: how δA/A depends on lateral (δx)
//! and depth (δz) errors, the voltage nulling the δx² term, and a search for
//! geometries where that voltage also meets a depth tolerance.

use donorqc::constants::{MaterialParams, PhysicalConstants};
use donorqc::error_budget::{
    depth_tolerance, find_nulling_parameters, relative_hic_error, Interval, NullingSearch,
    PlacementError,
};
use donorqc::electrostatics::GateGeometry;

fn main() {
    let gate = GateGeometry::strip(5e-9, 10e-9, 500e-9).unwrap();
    let err = PlacementError::new(1e-9, 0.5e-9);
    println!("   V      δz term     δx² term     δA/A    δz for 1%");
    for i in 1..=10 {
        let v = 0.1 * i as f64;
        let r = relative_hic_error(&gate, v, &err).unwrap();
        let dz = depth_tolerance(&gate, v, 0.01).unwrap();
        println!(
            "{v:5.2} {:+.3e} {:+.3e} {:+.3e} {:6.2} nm",
            r.dz_term,
            r.dx2_term,
            r.da_over_a,
            dz * 1e9
        );
    }
    let r = relative_hic_error(&gate, 0.5, &err).unwrap();
    println!("δx² nulling voltage: {:?} V", r.nulling_v);

    let search = NullingSearch::new(
        0.01,
        1.5e-9,
        Interval::new(4e-9, 6e-9),
        Interval::new(9e-9, 12e-9),
        Interval::new(0.1, 1.5),
    );
    let search = NullingSearch { points: 21, ..search };
    let found = find_nulling_parameters(&search, &MaterialParams::default(), &PhysicalConstants::default())
        .unwrap();
    println!("\n{} nulling geometries with δz = 1.5 nm within 1%; first five:", found.len());
    for t in found.iter().take(5) {
        println!(
            "  a = {:.2} nm, c = {:.2} nm, V = {:.4} V, δz term = {:.2e}",
            t.a * 1e9,
            t.c * 1e9,
            t.v,
            t.dz_term
        );
    }
}
