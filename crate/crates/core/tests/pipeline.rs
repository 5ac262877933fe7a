use donorqc::constants::{hyperfine_constant, MaterialParams, PhysicalConstants};
use donorqc::electrostatics::{Convention, GateGeometry};
use donorqc::error_budget::{BudgetContext, PlacementError};
use donorqc::hyperfine::{gate_shift, shift_polynomial};
use donorqc::spin::sweep::linear_grid;
use donorqc::spin::{
    adiabatic_transfer_trace, find_anticrossings, sweep_spectrum, MuMode, SweepTemplate,
};

const NM: f64 = 1e-9;

#[test]
fn polynomial_reproduces_direct_evaluation_for_both_gates() {
    let (mat, pc) = (MaterialParams::default(), PhysicalConstants::default());
    let gates = [
        GateGeometry::disc(5.0 * NM, 10.0 * NM).unwrap(),
        GateGeometry::strip(5.0 * NM, 10.0 * NM, 500.0 * NM).unwrap(),
    ];
    for gate in &gates {
        for conv in [Convention::Published, Convention::Harmonic] {
            let poly = shift_polynomial(gate, &mat, &pc, conv);
            for v in [0.1, 0.5, 1.3] {
                let direct = gate_shift(gate, v, &mat, &pc, conv).total;
                assert!((poly.eval(v) - direct).abs() < 1e-12 * direct.abs().max(1.0));
            }
        }
    }
}

#[test]
fn budget_report_is_consistent_with_its_terms() {
    let ctx = BudgetContext::default();
    let gate = GateGeometry::strip(5.0 * NM, 10.0 * NM, 500.0 * NM).unwrap();
    let err = PlacementError::new(1.0 * NM, 0.5 * NM);
    let a0 = hyperfine_constant(&ctx.mat, &ctx.pc).hertz;
    let r = ctx.report(&gate, 0.8, &err, Some((1e4, a0))).unwrap();
    assert!((r.da_over_a - (r.dz_term + r.dx2_term)).abs() < 1e-15);
    let nulled = ctx.report(&gate, r.nulling_v.unwrap(), &err, None).unwrap();
    assert!(nulled.dx2_term.abs() < 1e-12);
    assert!(r.admissible_dv.unwrap() > 0.0);
}

#[test]
fn events_do_not_depend_on_grid_resolution() {
    let t = SweepTemplate {
        alpha_a: 0.3,
        alpha_b: 0.4,
        mu: MuMode::physical(&PhysicalConstants::default()),
    };
    let coarse = find_anticrossings(&sweep_spectrum(&t, &linear_grid(0.2, 3.0, 141)).unwrap()).unwrap();
    let fine = find_anticrossings(&sweep_spectrum(&t, &linear_grid(0.2, 3.0, 801)).unwrap()).unwrap();
    assert_eq!(coarse.len(), fine.len());
    for (a, b) in coarse.iter().zip(&fine) {
        assert_eq!((a.block, a.pair, a.lowest), (b.block, b.pair, b.lowest));
        assert!((a.beta_star - b.beta_star).abs() < 1e-3, "{} vs {}", a.beta_star, b.beta_star);
        assert!((a.min_gap - b.min_gap).abs() < 1e-6 * b.min_gap);
    }
}

#[test]
fn transfer_traces_connect_the_exchanged_pairs() {
    let t = SweepTemplate {
        alpha_a: 0.3,
        alpha_b: 0.4,
        mu: MuMode::physical(&PhysicalConstants::default()),
    };
    let sweep = sweep_spectrum(&t, &donorqc::spin::default_grid()).unwrap();
    assert!(adiabatic_transfer_trace(&sweep, 15).certifies(12));
    assert!(adiabatic_transfer_trace(&sweep, 13).certifies(10));
    // fully polarized states sit in one-dimensional blocks
    for label in [1, 16] {
        assert!(!adiabatic_transfer_trace(&sweep, label).exchanged);
    }
}
