//! One test per reproduction criterion. Each prints a PASS/FAIL line with the
//! computed values before asserting.

use donorqc::validation::{self, CriterionResult};
use std::io::Write;

fn check(r: CriterionResult) {
    // the raw handle bypasses libtest's output capture, so passing criteria are reported too
    writeln!(std::io::stdout().lock(), "{r}").unwrap();
    assert!(r.passed, "criterion {} failed: {}", r.id, r.detail);
}

macro_rules! criteria {
    ($($name:ident => $f:path),* $(,)?) => {
        $(#[test] fn $name() { check($f()); })*
    };
}

criteria! {
    c01_hyperfine_constant => validation::criterion_1,
    c02_energy_residual => validation::criterion_2,
    c03_disc_second_order => validation::criterion_3,
    c04_disc_linear_and_aggregate => validation::criterion_4,
    c05_strip_shift => validation::criterion_5,
    c06_matrix_element_quadrature => validation::criterion_6,
    c07_placement_error => validation::criterion_7,
    c08_voltage_error => validation::criterion_8,
    c09_hamiltonian_entries => validation::criterion_9,
    c10_block_structure => validation::criterion_10,
    c11_singlet_triplet_crossing => validation::criterion_11,
    c12_anticrossings => validation::criterion_12,
    c13_strong_field_gap => validation::criterion_13,
}
