//! Hyperfine-constant errors from donor misplacement under a strip gate and from
//! gate-voltage noise.
//!
//! For a donor displaced by (δx, δz) from its nominal site (0, c) the relative
//! error is
//!
//! ```text
//! δA/A = δz · K_z(V) + δx² · K_x(V)
//! K_z = q V² · 2c/(a²+c²)
//! K_x = q V² (2c²−a²)/(a²+c²)² − l V (2c⁴−a⁴)/(2c²(a²+c²)²)
//! ```
//!
//! with the published calibration q = 0.063, l = 0.085 (c = 2a = 10 nm, D = 100a).
//! [`BudgetMode::Recomputed`] instead differentiates the full strip-gate shift
//! numerically, so the same budget can be evaluated for any geometry.

use crate::constants::{MaterialParams, PhysicalConstants};
use crate::electrostatics::{strip_field_coeffs_at, Convention, GateGeometry};
use crate::hyperfine::{shift_polynomial, shift_polynomial_from, ShiftPolynomial};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BudgetError {
    #[error("placement budget is defined for strip gates only, got a {0} gate")]
    NotAStrip(&'static str),
    #[error("gate voltage must be non-negative, got {0}")]
    NegativeVoltage(f64),
    #[error("invalid search: {0}")]
    InvalidSearch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlacementError {
    /// Lateral offset δx, m.
    pub dx: f64,
    /// Depth offset δz, m (positive = deeper).
    pub dz: f64,
}

impl PlacementError {
    pub fn new(dx: f64, dz: f64) -> Self {
        Self { dx, dz }
    }

    /// The expansion keeps δz and δx² but drops δz² and δz·δx², which assumes
    /// δz/c is of the same order as (δx/c)². Returns a warning when the two
    /// differ by more than a factor of ten.
    pub fn ordering_warning(&self, depth: f64) -> Option<String> {
        let z = (self.dz / depth).abs();
        let x2 = (self.dx / depth).powi(2);
        if z == 0.0 || x2 == 0.0 {
            return None;
        }
        let ratio = z / x2;
        (!(0.1..=10.0).contains(&ratio)).then(|| {
            format!(
                "placement offsets violate the dz ~ dx^2 ordering (|dz|/c = {z:.3e}, (dx/c)^2 = {x2:.3e})"
            )
        })
    }
}

/// Correction factors in braces multiplying −Ē_c, Ē'_c and −Ē''_c/2 when the
/// potential derivatives are taken at the displaced donor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BracketFactors {
    pub field: f64,
    pub axial_gradient: f64,
    pub transverse_gradient: f64,
}

pub fn strip_sensitivity_derivatives(
    gate: &GateGeometry,
    err: &PlacementError,
) -> Result<BracketFactors, BudgetError> {
    let (a, c) = strip_dims(gate)?;
    let (a2, c2) = (a * a, c * c);
    let s = a2 + c2;
    let (dx2, dz) = (err.dx * err.dx, err.dz);
    Ok(BracketFactors {
        field: 1.0 - dz / (c * (1.0 + a2 / c2)) - dx2 * (2.0 * c2 - a2) / (2.0 * s * s),
        axial_gradient: 1.0
            - dz * (2.0 * c2 - a2) / (c * s)
            - dx2 * (4.0 * c2 * c2 + a2 * c2 - a2 * a2) / (2.0 * c2 * s * s),
        transverse_gradient: 1.0
            - dz * (2.0 * c2 - a2) / (c * s)
            - dx2 * (2.0 * c2 + a2) / (2.0 * s * s),
    })
}

fn strip_dims(gate: &GateGeometry) -> Result<(f64, f64), BudgetError> {
    match *gate {
        GateGeometry::Strip {
            half_width, depth, ..
        } => Ok((half_width, depth)),
        GateGeometry::Disc { .. } => Err(BudgetError::NotAStrip(gate.kind_name())),
    }
}

/// Numeric prefactors (q, l) of the placement formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlacementCoefficients {
    pub quadratic: f64,
    pub linear: f64,
}

impl PlacementCoefficients {
    /// Calibration quoted for c = 2a = 10 nm, D/a = 100.
    pub const PUBLISHED: Self = Self {
        quadratic: 0.063,
        linear: 0.085,
    };

    /// K_z(V), the coefficient of δz.
    pub fn dz_coefficient(&self, a: f64, c: f64, v: f64) -> f64 {
        self.quadratic * v * v * 2.0 * c / (a * a + c * c)
    }

    /// K_x(V), the coefficient of δx².
    pub fn dx2_bracket(&self, a: f64, c: f64, v: f64) -> f64 {
        let s = a * a + c * c;
        self.quadratic * v * v * (2.0 * c * c - a * a) / (s * s)
            - self.linear * v * (2.0 * c.powi(4) - a.powi(4)) / (2.0 * c * c * s * s)
    }

    /// Non-zero voltage at which K_x vanishes, if it is positive and finite.
    pub fn nulling_voltage(&self, a: f64, c: f64) -> Option<f64> {
        let num = self.linear * (2.0 * c.powi(4) - a.powi(4));
        let den = 2.0 * c * c * self.quadratic * (2.0 * c * c - a * a);
        let v = num / den;
        (v.is_finite() && v > 0.0).then_some(v)
    }
}

/// δA/A = dz_coeff·δz + dx2_coeff·δx² at one voltage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sensitivity {
    pub dz_coeff: f64,
    pub dx2_coeff: f64,
}

/// Voltage dependence of the two placement coefficients:
/// K(V) = linear·V + quadratic·V².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SensitivityPolynomial {
    pub dz: ShiftPolynomial,
    pub dx2: ShiftPolynomial,
}

impl SensitivityPolynomial {
    pub fn at(&self, v: f64) -> Sensitivity {
        Sensitivity {
            dz_coeff: self.dz.eval(v),
            dx2_coeff: self.dx2.eval(v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", content = "convention", rename_all = "lowercase")]
pub enum BudgetMode {
    /// Placement formula with the published (0.063, 0.085) prefactors.
    Published,
    /// Numerical derivatives of the strip-model shift at the displaced donor.
    Recomputed(Convention),
}

/// Differentiates ΔA/A of the line-charge strip model with respect to δz and δx²
/// at the nominal donor site. The result is exact in V (each coefficient is a
/// polynomial of degree two) and approximate only in the finite-difference step.
pub fn recomputed_sensitivity(
    gate: &GateGeometry,
    mat: &MaterialParams,
    pc: &PhysicalConstants,
    convention: Convention,
) -> Result<SensitivityPolynomial, BudgetError> {
    let (a, c) = strip_dims(gate)?;
    let d = match *gate {
        GateGeometry::Strip {
            substrate_distance, ..
        } => substrate_distance,
        GateGeometry::Disc { .. } => unreachable!(),
    };
    let poly_at = |dx: f64, dz: f64| {
        let fc = strip_field_coeffs_at(1.0, a, d, dx, c + dz);
        let p = shift_polynomial_from(&fc, mat, pc, convention);
        [p.linear, p.quadratic]
    };
    let h = 1e-2 * c;
    let nominal = poly_at(0.0, 0.0);
    let dz_slope = |h: f64| {
        let (p, m) = (poly_at(0.0, h), poly_at(0.0, -h));
        [(p[0] - m[0]) / (2.0 * h), (p[1] - m[1]) / (2.0 * h)]
    };
    let dx2_slope = |h: f64| {
        let p = poly_at(h, 0.0);
        [(p[0] - nominal[0]) / (h * h), (p[1] - nominal[1]) / (h * h)]
    };
    let dz = extrapolate(dz_slope, h);
    let dx2 = extrapolate(dx2_slope, h);
    let poly = |k: [f64; 2]| ShiftPolynomial {
        linear: k[0],
        quadratic: k[1],
        quadratic_second_order: f64::NAN,
        quadratic_first_order: f64::NAN,
    };
    Ok(SensitivityPolynomial {
        dz: poly(dz),
        dx2: poly(dx2),
    })
}

/// Two-level Richardson extrapolation for an O(h²) difference quotient.
fn extrapolate<F: Fn(f64) -> [f64; 2]>(f: F, h: f64) -> [f64; 2] {
    let (d1, d2, d4) = (f(h), f(h / 2.0), f(h / 4.0));
    let mut out = [0.0; 2];
    for k in 0..2 {
        let r1 = (4.0 * d2[k] - d1[k]) / 3.0;
        let r2 = (4.0 * d4[k] - d2[k]) / 3.0;
        out[k] = (16.0 * r2 - r1) / 15.0;
    }
    out
}

/// Sensitivity polynomial for either mode.
pub fn sensitivity_polynomial(
    gate: &GateGeometry,
    mode: BudgetMode,
    mat: &MaterialParams,
    pc: &PhysicalConstants,
) -> Result<SensitivityPolynomial, BudgetError> {
    let (a, c) = strip_dims(gate)?;
    match mode {
        BudgetMode::Published => {
            let k = PlacementCoefficients::PUBLISHED;
            let s = a * a + c * c;
            Ok(SensitivityPolynomial {
                dz: ShiftPolynomial {
                    linear: 0.0,
                    quadratic: k.quadratic * 2.0 * c / s,
                    quadratic_second_order: f64::NAN,
                    quadratic_first_order: f64::NAN,
                },
                dx2: ShiftPolynomial {
                    linear: -k.linear * (2.0 * c.powi(4) - a.powi(4)) / (2.0 * c * c * s * s),
                    quadratic: k.quadratic * (2.0 * c * c - a * a) / (s * s),
                    quadratic_second_order: f64::NAN,
                    quadratic_first_order: f64::NAN,
                },
            })
        }
        BudgetMode::Recomputed(conv) => recomputed_sensitivity(gate, mat, pc, conv),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetTerms {
    pub dz_term: f64,
    pub dx2_term: f64,
    pub da_over_a: f64,
}

impl BudgetTerms {
    fn new(s: Sensitivity, err: &PlacementError) -> Self {
        let dz_term = s.dz_coeff * err.dz;
        let dx2_term = s.dx2_coeff * err.dx * err.dx;
        Self {
            dz_term,
            dx2_term,
            da_over_a: dz_term + dx2_term,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorBudgetReport {
    pub voltage: f64,
    pub dx: f64,
    pub dz: f64,
    pub da_over_a: f64,
    pub dz_term: f64,
    pub dx2_term: f64,
    /// Voltage nulling the δx² term, if one exists.
    pub nulling_v: Option<f64>,
    pub admissible_dv: Option<f64>,
    /// The same budget from the numerically differentiated strip model.
    pub recomputed: Option<BudgetTerms>,
    pub recomputed_nulling_v: Option<f64>,
    pub warnings: Vec<String>,
}

/// Placement error from the published formula.
pub fn relative_hic_error(
    gate: &GateGeometry,
    v: f64,
    err: &PlacementError,
) -> Result<ErrorBudgetReport, BudgetError> {
    let (a, c) = strip_dims(gate)?;
    if v < 0.0 {
        return Err(BudgetError::NegativeVoltage(v));
    }
    let k = PlacementCoefficients::PUBLISHED;
    let terms = BudgetTerms::new(
        Sensitivity {
            dz_coeff: k.dz_coefficient(a, c, v),
            dx2_coeff: k.dx2_bracket(a, c, v),
        },
        err,
    );
    Ok(ErrorBudgetReport {
        voltage: v,
        dx: err.dx,
        dz: err.dz,
        da_over_a: terms.da_over_a,
        dz_term: terms.dz_term,
        dx2_term: terms.dx2_term,
        nulling_v: k.nulling_voltage(a, c),
        admissible_dv: None,
        recomputed: None,
        recomputed_nulling_v: None,
        warnings: err.ordering_warning(c).into_iter().collect(),
    })
}

/// Depth offset that produces a given relative error through the δz term alone.
pub fn depth_tolerance(gate: &GateGeometry, v: f64, target: f64) -> Result<f64, BudgetError> {
    let (a, c) = strip_dims(gate)?;
    Ok(target / PlacementCoefficients::PUBLISHED.dz_coefficient(a, c, v))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VoltageLimit {
    /// Set by the slope of ΔA/A(V).
    Linear,
    /// Set by the curvature, at or near the stationary ("distinguished") voltage.
    Quadratic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VoltageTolerance {
    /// Admissible gate-voltage error, V.
    pub dv: f64,
    /// d(ΔA/A)/dV at the working voltage, 1/V.
    pub slope: f64,
    pub limit: VoltageLimit,
    pub stationary_voltage: Option<f64>,
}

/// Largest voltage excursion keeping the hyperfine frequency within
/// `line_width` (Hz) of its value at `v`, given A₀/h = `a0_hz`.
///
/// Solves |s·δV + q·δV²| = line_width/A₀ in both directions and keeps the
/// smallest positive root, so the bound stays finite at a stationary point.
pub fn admissible_voltage_error(
    poly: &ShiftPolynomial,
    v: f64,
    line_width: f64,
    a0_hz: f64,
) -> VoltageTolerance {
    let s = poly.slope(v);
    let q = poly.quadratic;
    let t = line_width / a0_hz;
    let mut dv = f64::INFINITY;
    if t == 0.0 {
        dv = 0.0;
    } else {
        for sign in [1.0, -1.0] {
            for rhs in [t, -t] {
                for root in positive_roots(q, sign * s, -rhs) {
                    dv = dv.min(root);
                }
            }
        }
    }
    let limit = if q.abs() * dv > s.abs() {
        VoltageLimit::Quadratic
    } else {
        VoltageLimit::Linear
    };
    VoltageTolerance {
        dv,
        slope: s,
        limit,
        stationary_voltage: poly.stationary_voltage(),
    }
}

/// Positive real roots of a x² + b x + c = 0.
fn positive_roots(a: f64, b: f64, c: f64) -> Vec<f64> {
    let mut roots = Vec::new();
    if a == 0.0 {
        if b != 0.0 {
            roots.push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc >= 0.0 {
            let sq = disc.sqrt();
            let qq = -0.5 * (b + b.signum() * sq);
            if qq != 0.0 {
                roots.push(qq / a);
                roots.push(c / qq);
            } else {
                roots.push(0.0);
            }
        }
    }
    roots.into_iter().filter(|r| *r > 0.0 && r.is_finite()).collect()
}

/// Shared physical context for budget evaluations that need the hyperfine model.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BudgetContext {
    pub mat: MaterialParams,
    pub pc: PhysicalConstants,
    pub convention: Convention,
}

impl BudgetContext {
    /// Full report: published terms, recomputed terms, nulling voltages and,
    /// when a line width is supplied, the admissible voltage error.
    pub fn report(
        &self,
        gate: &GateGeometry,
        v: f64,
        err: &PlacementError,
        line_width_and_a0: Option<(f64, f64)>,
    ) -> Result<ErrorBudgetReport, BudgetError> {
        let mut report = relative_hic_error(gate, v, err)?;
        let recomputed = recomputed_sensitivity(gate, &self.mat, &self.pc, self.convention)?;
        report.recomputed = Some(BudgetTerms::new(recomputed.at(v), err));
        report.recomputed_nulling_v = recomputed.dx2_nulling_voltage();
        if let Some((lw, a0)) = line_width_and_a0 {
            report.admissible_dv = Some(self.admissible_voltage_error(gate, v, lw, a0).dv);
        }
        Ok(report)
    }

    pub fn admissible_voltage_error(
        &self,
        gate: &GateGeometry,
        v: f64,
        line_width: f64,
        a0_hz: f64,
    ) -> VoltageTolerance {
        let poly = shift_polynomial(gate, &self.mat, &self.pc, self.convention);
        admissible_voltage_error(&poly, v, line_width, a0_hz)
    }
}

impl SensitivityPolynomial {
    /// Non-zero root of K_x(V) = V(linear + quadratic·V), if positive.
    pub fn dx2_nulling_voltage(&self) -> Option<f64> {
        let v = -self.dx2.linear / self.dx2.quadratic;
        (v.is_finite() && v > 0.0).then_some(v)
    }
}

/// Closed interval searched by [`find_nulling_parameters`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    fn grid(&self, n: usize) -> Vec<f64> {
        if self.hi == self.lo || n < 2 {
            return vec![self.lo];
        }
        (0..n)
            .map(|i| self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullingSearch {
    /// Admissible |δA/A| from the depth term.
    pub target: f64,
    /// Expected depth inaccuracy δz, m.
    pub dz: f64,
    pub a: Interval,
    pub c: Interval,
    pub v: Interval,
    /// Grid points per axis.
    pub points: usize,
    /// D/a, held fixed while a varies.
    pub substrate_ratio: f64,
    pub mode: BudgetMode,
}

impl NullingSearch {
    pub fn new(target: f64, dz: f64, a: Interval, c: Interval, v: Interval) -> Self {
        Self {
            target,
            dz,
            a,
            c,
            v,
            points: 101,
            substrate_ratio: 100.0,
            mode: BudgetMode::Published,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NullingTriple {
    pub a: f64,
    pub c: f64,
    pub v: f64,
    /// K_x at the returned voltage.
    pub bracket: f64,
    /// max |K_x| over the voltage grid, for judging `bracket`.
    pub bracket_scale: f64,
    /// K_z·δz at the returned voltage.
    pub dz_term: f64,
    /// Depth inaccuracy allowed by `target` at this point.
    pub admissible_dz: f64,
}

/// Grid scan over (a, c, V) for voltages where the δx² coefficient changes
/// sign, refined by bisection, keeping points whose δz term meets the target.
///
/// Results are ordered by |K_x| at the root, ties by grid order. An empty result
/// means no sign change inside the ranges.
pub fn find_nulling_parameters(
    search: &NullingSearch,
    mat: &MaterialParams,
    pc: &PhysicalConstants,
) -> Result<Vec<NullingTriple>, BudgetError> {
    for (name, r) in [("a", search.a), ("c", search.c), ("v", search.v)] {
        if !(r.lo.is_finite() && r.hi.is_finite()) || r.hi < r.lo {
            return Err(BudgetError::InvalidSearch(format!("range {name} is empty or not finite")));
        }
    }
    if search.a.lo <= 0.0 || search.c.lo <= 0.0 {
        return Err(BudgetError::InvalidSearch("a and c must be positive".into()));
    }
    let n = search.points.max(1);
    let vs = search.v.grid(n);
    let mut found = Vec::new();
    for &a in &search.a.grid(n) {
        for &c in &search.c.grid(n) {
            let gate = GateGeometry::Strip {
                half_width: a,
                depth: c,
                substrate_distance: search.substrate_ratio * a,
            };
            let sens = sensitivity_polynomial(&gate, search.mode, mat, pc)?;
            let kx = |v: f64| sens.dx2.eval(v);
            let values: Vec<f64> = vs.iter().map(|&v| kx(v)).collect();
            let scale = values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            for i in 0..vs.len() {
                let root = if values[i] == 0.0 && vs[i] != 0.0 {
                    Some(vs[i])
                } else if i + 1 < vs.len() && values[i] * values[i + 1] < 0.0 {
                    Some(bisect(&kx, vs[i], vs[i + 1]))
                } else {
                    None
                };
                let Some(v) = root else { continue };
                let kz = sens.dz.eval(v);
                let dz_term = kz * search.dz;
                if dz_term.abs() <= search.target {
                    found.push(NullingTriple {
                        a,
                        c,
                        v,
                        bracket: kx(v),
                        bracket_scale: scale,
                        dz_term,
                        admissible_dz: search.target / kz.abs(),
                    });
                }
            }
        }
    }
    found.sort_by(|x, y| x.bracket.abs().total_cmp(&y.bracket.abs()));
    Ok(found)
}

/// Bisection to 1e-12 relative width on an interval with a sign change.
fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * mid.abs().max(f64::MIN_POSITIVE) {
            break;
        }
    }
    0.5 * (lo + hi)
}
