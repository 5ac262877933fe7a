//! Reproduction checks. Each criterion recomputes a quantity through the public
//! API and compares it with a reference value or an independent numerical
//! oracle (quadrature, inertia-count bisection, least-squares fits).

use crate::constants::{hyperfine_constant, residual_delta_e, MaterialParams, PhysicalConstants};
use crate::electrostatics::{Convention, FieldCoefficients, GateGeometry, Transverse};
use crate::error_budget::{admissible_voltage_error, depth_tolerance, VoltageLimit};
use crate::hyperfine::{gate_shift, matrix_element_2s1s, shift_polynomial};
use crate::oracle::{eigenvalues_by_bisection, fit_quadratic, matrix_element_quadrature};
use crate::spin::basis::{block_indices, DIM};
use crate::spin::hamiltonian::{symbolic_hamiltonian, LinearForm, Param};
use crate::spin::sweep::{default_grid, linear_grid, refine_grid};
use crate::spin::{
    adiabatic_transfer_trace, block_decompose, build_hamiltonian, eigensolve_block, strong_field_gap_reduced,
    find_anticrossings, lowest_level_crossing, numerical_strong_field_gap, sweep_spectrum, MuMode,
    SpinParams, SweepTemplate,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::fmt;

const NM: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

fn result(id: u32, name: &'static str, passed: bool, detail: String) -> CriterionResult {
    CriterionResult {
        id,
        name,
        passed,
        detail,
    }
}

fn within(x: f64, target: f64, rel: f64) -> bool {
    ((x - target) / target).abs() <= rel
}

fn within_factor(x: f64, target: f64, factor: f64) -> bool {
    let r = x / target;
    r > 0.0 && r <= factor && r >= 1.0 / factor
}

fn reference_disc() -> GateGeometry {
    GateGeometry::Disc {
        radius: 5.0 * NM,
        depth: 10.0 * NM,
    }
}

fn reference_strip() -> GateGeometry {
    GateGeometry::Strip {
        half_width: 5.0 * NM,
        depth: 10.0 * NM,
        substrate_distance: 500.0 * NM,
    }
}

fn defaults() -> (MaterialParams, PhysicalConstants) {
    (MaterialParams::default(), PhysicalConstants::default())
}

/// Sample ΔA/A(V) on a voltage grid and fit c₀ + c₁V + c₂V².
fn fitted_polynomial(gate: &GateGeometry, conv: Convention) -> [f64; 3] {
    let (mat, pc) = defaults();
    let vs = linear_grid(0.0, 1.2, 13);
    let ys: Vec<f64> = vs
        .iter()
        .map(|&v| gate_shift(gate, v, &mat, &pc, conv).total)
        .collect();
    fit_quadratic(&vs, &ys)
}

pub fn criterion_1() -> CriterionResult {
    let (mat, pc) = defaults();
    let a = hyperfine_constant(&mat, &pc).hertz;
    // (8π/3)|Ψ₀|² · 2μ_B · g_N μ_N · (μ₀/4π) / h, evaluated separately
    let hand = 8.0 * std::f64::consts::PI / 3.0 * 0.43e30 * 2.0 * 9.27e-24 * 2.26 * 5.05e-27 * 1e-7
        / 6.62e-34;
    let ok = within(a, 1.15e8, 0.05) && within(a, hand, 1e-12);
    result(1, "Hyperfine constant", ok, format!("A/h = {a:.6e} Hz (hand {hand:.6e}, target 1.15e8 ± 5%)"))
}

pub fn criterion_2() -> CriterionResult {
    let (mat, pc) = defaults();
    let de = pc.joule_to_ev(residual_delta_e(&mat, &pc));
    result(2, "1s-2s energy residual", within(de, -0.023, 0.05), format!("δE = {de:.5} eV (target -0.023 ± 5%)"))
}

pub fn criterion_3() -> CriterionResult {
    let poly = shift_polynomial(&reference_disc(), &defaults().0, &defaults().1, Convention::Published);
    let c = poly.quadratic_second_order;
    result(3, "Disc second-order term", within(c, -0.19, 0.10), format!("V² coefficient {c:.5} (target -0.19 ± 10%)"))
}

pub fn criterion_4() -> CriterionResult {
    let [c0, lin, quad] = fitted_polynomial(&reference_disc(), Convention::Published);
    let ok = within(lin, 0.55, 0.10) && within_factor(quad, -0.09, 2.0) && c0.abs() < 1e-12;
    result(
        4,
        "Disc linear term",
        ok,
        format!(
            "fit of ΔA/A(V): linear {lin:.5} (target 0.55 ± 10%), quadratic {quad:.5} \
             (target -0.09 within ×2; deviation: second-order -0.203 plus squared first-order +0.070 \
             give -0.133, so the reference -0.09 is not reproduced by the model)"
        ),
    )
}

pub fn criterion_5() -> CriterionResult {
    let [_, lin, quad] = fitted_polynomial(&reference_strip(), Convention::Published);
    result(
        5,
        "Strip total shift",
        within_factor(quad, -0.063, 2.0),
        format!(
            "quadratic {quad:.5} (target -0.063 within ×2), linear {lin:.5}; \
             strip potential modelled as a line charge V ln(2D/r)/ln(2D/a), D = 100a"
        ),
    )
}

/// Random local-field coefficient sets for the matrix-element check.
fn random_field_sets(n: usize) -> Vec<FieldCoefficients> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    (0..n)
        .map(|_| FieldCoefficients {
            e_c: rng.gen_range(1e6..5e7),
            e1_c: rng.gen_range(1e14..1e16),
            e2_c: rng.gen_range(1e14..1e16),
            phi0: rng.gen_range(0.0..1.0),
            transverse: Transverse::Radial,
        })
        .collect()
}

fn worst_matrix_element_error(conv: Convention, sets: &[FieldCoefficients]) -> f64 {
    let (mat, pc) = defaults();
    sets.iter()
        .map(|fc| {
            let closed = matrix_element_2s1s(fc, &mat, &pc, conv);
            let numeric = matrix_element_quadrature(fc, &mat, &pc);
            ((closed - numeric) / numeric).abs()
        })
        .fold(0.0, f64::max)
}

pub fn criterion_6() -> CriterionResult {
    let sets = random_field_sets(10);
    let published = worst_matrix_element_error(Convention::Published, &sets);
    let harmonic = worst_matrix_element_error(Convention::Harmonic, &sets);
    result(
        6,
        "2s-1s matrix element vs quadrature",
        published < 1e-6,
        format!(
            "published closed form: worst relative error {published:.3e} over 10 seeded sets (limit 1e-6); \
             its ρ² coefficient 7²·2⁵/(3⁶√2) = 1.5211 differs from the integrated 2⁹√2/3⁶ = 0.9933. \
             Harmonic convention (exact coefficient): worst {harmonic:.3e}"
        ),
    )
}

pub fn criterion_7() -> CriterionResult {
    let gate = reference_strip();
    let band: Vec<(f64, f64)> = linear_grid(0.1, 1.0, 91)
        .into_iter()
        .map(|v| (v, depth_tolerance(&gate, v, 0.01).expect("strip gate") / NM))
        .filter(|&(_, dz)| (1.5..=3.5).contains(&dz))
        .collect();
    let detail = match (band.first(), band.last()) {
        (Some(lo), Some(hi)) => format!(
            "δz for δA/A = 1% lies in [2, 3] ± 0.5 nm for V ∈ [{:.2}, {:.2}] V ({:.2}–{:.2} nm)",
            lo.0, hi.0, hi.1, lo.1
        ),
        _ => "no voltage in [0.1, 1] V gives δz in [1.5, 3.5] nm".to_string(),
    };
    result(7, "Placement error", !band.is_empty(), detail)
}

pub fn criterion_8() -> CriterionResult {
    let (mat, pc) = defaults();
    let poly = shift_polynomial(&reference_disc(), &mat, &pc, Convention::Published);
    let tol = admissible_voltage_error(&poly, 1.0, 1e4, 1.15e8);
    let strip = admissible_voltage_error(
        &shift_polynomial(&reference_strip(), &mat, &pc, Convention::Published),
        1.0,
        1e4,
        1.15e8,
    );
    let ok = (1e-4..=1e-3).contains(&tol.dv) && tol.limit == VoltageLimit::Linear;
    result(
        8,
        "Voltage error",
        ok,
        format!(
            "disc at 1 V: δV = {:.3e} V (slope {:.4}/V); strip at 1 V: δV = {:.3e} V; target [1e-4, 1e-3] V",
            tol.dv, tol.slope, strip.dv
        ),
    )
}

/// (row, column), 1-based.
type Entry = (usize, usize);

/// The sixteen diagonal entries of ΔH/J and its eight upper flip-flop entries,
/// transcribed by hand.
fn reference_delta_h() -> (Vec<LinearForm>, Vec<(Entry, LinearForm)>) {
    use Param::*;
    let q = |mu: i64, a: i64, b: i64| LinearForm::from_terms(&[(Mu, mu, 1), (AlphaA, a, 4), (AlphaB, b, 4)]);
    let diagonal = vec![
        q(-1, 1, 1),
        q(0, 1, -1),
        q(0, -1, 1),
        q(1, -1, -1),
        q(-1, 1, -1),
        q(0, 1, 1),
        q(0, -1, -1),
        q(1, -1, 1),
        q(-1, -1, 1),
        q(0, -1, -1),
        q(0, 1, 1),
        q(1, 1, -1),
        q(-1, -1, -1),
        q(0, -1, 1),
        q(0, 1, -1),
        q(1, 1, 1),
    ];
    let half_b = LinearForm::from_terms(&[(AlphaB, 1, 2)]);
    let half_a = LinearForm::from_terms(&[(AlphaA, 1, 2)]);
    let off = vec![
        ((5, 2), half_b),
        ((7, 4), half_b),
        ((13, 10), half_b),
        ((15, 12), half_b),
        ((9, 3), half_a),
        ((10, 4), half_a),
        ((13, 7), half_a),
        ((14, 8), half_a),
    ];
    (diagonal, off)
}

pub fn criterion_9() -> CriterionResult {
    let dh = symbolic_hamiltonian().hyperfine_part();
    let (diagonal, off) = reference_delta_h();
    let mut bad = Vec::new();
    for (i, f) in diagonal.iter().enumerate() {
        if dh.entry(i + 1, i + 1) != *f {
            bad.push(format!("({0},{0}) = {1}", i + 1, dh.entry(i + 1, i + 1)));
        }
    }
    for ((r, c), f) in &off {
        if dh.entry(*r, *c) != *f || dh.entry(*c, *r) != *f {
            bad.push(format!("({r},{c}) = {}", dh.entry(*r, *c)));
        }
    }
    let mut extra = 0;
    for r in 1..=DIM {
        for c in r + 1..=DIM {
            let listed = off.iter().any(|((a, b), _)| (a.min(b), a.max(b)) == (&r, &c));
            if !listed && !dh.entry(r, c).is_zero() {
                extra += 1;
            }
        }
    }
    let ok = bad.is_empty() && extra == 0 && dh.is_symmetric();
    let detail = if ok {
        "16 diagonal and 8 flip-flop entries of ΔH/J match exactly (rational arithmetic); no other off-diagonal terms".to_string()
    } else {
        format!("mismatches: {bad:?}; unlisted off-diagonal terms: {extra}")
    };
    result(9, "Spin Hamiltonian entries", ok, detail)
}

pub fn criterion_10() -> CriterionResult {
    let ratio = PhysicalConstants::default().nuclear_to_electron_zeeman();
    let mut worst_trace = 0.0f64;
    let mut worst_ortho = 0.0f64;
    let mut worst_resid = 0.0f64;
    let mut worst_oracle = 0.0f64;
    let mut sizes = Vec::new();
    let mut errors = Vec::new();
    for beta in [0.3, 1.0, 2.5] {
        let p = SpinParams::new(beta, ratio * beta, 0.3, 0.4);
        let h = build_hamiltonian(&p);
        let blocks = match block_decompose(&h) {
            Ok(b) => b,
            Err(e) => {
                errors.push(e.to_string());
                continue;
            }
        };
        sizes = blocks.iter().map(|b| b.indices.len()).collect();
        let mut all = Vec::new();
        for b in &blocks {
            let e = match eigensolve_block(&b.matrix, 1e-14) {
                Ok(e) => e,
                Err(err) => {
                    errors.push(err.to_string());
                    continue;
                }
            };
            let tr: f64 = (0..b.matrix.len()).map(|i| b.matrix[i][i]).sum();
            let sum: f64 = e.values.iter().sum();
            worst_trace = worst_trace.max((sum - tr).abs() / tr.abs().max(1.0));
            worst_ortho = worst_ortho.max(e.orthonormality_defect());
            worst_resid = worst_resid.max(e.max_residual(&b.matrix) / h.frobenius());
            let oracle = eigenvalues_by_bisection(&b.matrix, 1e-13);
            for (x, y) in e.values.iter().zip(&oracle) {
                worst_oracle = worst_oracle.max((x - y).abs());
            }
            all.extend(e.values);
        }
        let global: f64 = all.iter().sum();
        worst_trace = worst_trace.max((global - h.trace()).abs() / h.trace().abs().max(1.0));
    }
    let ok = errors.is_empty()
        && sizes == vec![6, 4, 4, 1, 1]
        && [block_indices(0), block_indices(1), block_indices(-1), block_indices(2), block_indices(-2)]
            == [vec![4, 6, 7, 10, 11, 13], vec![2, 3, 5, 9], vec![8, 12, 14, 15], vec![1], vec![16]]
        && worst_trace < 1e-10
        && worst_ortho < 1e-10
        && worst_resid < 1e-10
        && worst_oracle < 1e-10;
    result(
        10,
        "Block structure",
        ok,
        format!(
            "block sizes {sizes:?}, cross-block entries exactly zero; trace defect {worst_trace:.1e}, \
             orthonormality {worst_ortho:.1e}, residual {worst_resid:.1e}, vs bisection oracle {worst_oracle:.1e}{}",
            if errors.is_empty() { String::new() } else { format!("; errors: {errors:?}") }
        ),
    )
}

/// Distinct values (clustered within `tol`) with their multiplicities.
fn clusters(values: &[f64], tol: f64) -> Vec<(f64, usize)> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = Vec::new();
    for x in v {
        match out.last_mut() {
            Some((y, n)) if (x - *y).abs() <= tol => *n += 1,
            _ => out.push((x, 1)),
        }
    }
    out
}

pub fn criterion_11() -> CriterionResult {
    let t = SweepTemplate {
        alpha_a: 0.0,
        alpha_b: 0.0,
        mu: MuMode::Fixed { mu: 0.0 },
    };
    let sweep = match sweep_spectrum(&t, &default_grid()) {
        Ok(s) => s,
        Err(e) => return result(11, "Singlet-triplet crossing", false, e.to_string()),
    };
    let c = lowest_level_crossing(&sweep);
    let crossing_ok = (c.beta - 1.0).abs() <= c.grid_step + 1e-12;
    let mut pattern_ok = true;
    let mut patterns = Vec::new();
    for beta in [0.5, 1.7, 2.6] {
        let levels = sweep_spectrum(&t, &[beta]).map(|s| s.levels_at(0)).unwrap_or_default();
        let mult: Vec<usize> = clusters(&levels, 1e-9).iter().map(|c| c.1).collect();
        pattern_ok &= mult == vec![4, 4, 4, 4];
        patterns.push(format!("β={beta}: {mult:?}"));
    }
    result(
        11,
        "Singlet-triplet crossing",
        crossing_ok && pattern_ok,
        format!(
            "lowest-two-level gap minimum {:.2e} at β = {:.4} (grid step {:.4}); degeneracy {}",
            c.gap,
            c.beta,
            c.grid_step,
            patterns.join(", ")
        ),
    )
}

pub fn criterion_12() -> CriterionResult {
    let t = SweepTemplate {
        alpha_a: 0.3,
        alpha_b: 0.4,
        mu: MuMode::physical(&PhysicalConstants::default()),
    };
    let run = || -> Result<CriterionResult, crate::spin::SpinError> {
        let first = sweep_spectrum(&t, &default_grid())?;
        let centres: Vec<f64> = find_anticrossings(&first)?.iter().map(|e| e.beta_star).collect();
        let sweep = sweep_spectrum(&t, &refine_grid(&first.betas, &centres, 0.05, 10))?;
        let events = find_anticrossings(&sweep)?;
        let lowest: Vec<_> = events.iter().filter(|e| e.lowest).collect();
        let find = |block: i8, pair: (usize, usize)| {
            lowest
                .iter()
                .find(|e| e.block == block && e.pair == pair)
                .filter(|e| e.min_gap > 0.0 && e.beta_star > 0.8 && e.beta_star < 1.2)
        };
        let a = find(-1, (15, 12));
        let b = find(0, (13, 10));
        let t15 = adiabatic_transfer_trace(&sweep, 15);
        let t13 = adiabatic_transfer_trace(&sweep, 13);
        let ok = lowest.len() == 2
            && a.is_some()
            && b.is_some()
            && t15.certifies(12)
            && t13.certifies(10)
            && t15.exit.0 == 12
            && t13.exit.0 == 10;
        let describe = |e: Option<&&&crate::spin::AnticrossingReport>| match e {
            Some(e) => format!("β* = {:.4}, gap = {:.4}", e.beta_star, e.min_gap),
            None => "missing".to_string(),
        };
        Ok(result(
            12,
            "Anticrossings",
            ok,
            format!(
                "(|15⟩,|12⟩) in M+m=-1: {}; (|13⟩,|10⟩) in M+m=0: {}; lowest-level events {}; \
                 |15⟩ track exits as |{}⟩ (w {:.2}), |13⟩ track exits as |{}⟩ (w {:.2})",
                describe(a.as_ref()),
                describe(b.as_ref()),
                lowest.len(),
                t15.exit.0,
                t15.exit.1,
                t13.exit.0,
                t13.exit.1
            ),
        ))
    };
    run().unwrap_or_else(|e| result(12, "Anticrossings", false, e.to_string()))
}

pub fn criterion_13() -> CriterionResult {
    let rel = |beta: f64| -> Result<f64, crate::spin::SpinError> {
        let num = numerical_strong_field_gap(&SpinParams::new(beta, 0.0, 0.05, 0.05))?;
        let closed = strong_field_gap_reduced(beta, 0.05)?;
        Ok(((num - closed) / closed).abs())
    };
    match (rel(5.0), rel(10.0)) {
        (Ok(r5), Ok(r10)) => result(
            13,
            "Strong-field splitting",
            r5 < 0.05 && r10 < r5,
            format!("relative deviation from closed form: {r5:.3e} at β=5, {r10:.3e} at β=10 (α = 0.05)"),
        ),
        (Err(e), _) | (_, Err(e)) => result(13, "Strong-field splitting", false, e.to_string()),
    }
}

/// Run every criterion in order.
pub fn run_all() -> Vec<CriterionResult> {
    vec![
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
        criterion_11(),
        criterion_12(),
        criterion_13(),
    ]
}
