//! Gate potentials and their local Taylor coefficients at the donor site.
//!
//! The donor sits at depth `c` on the symmetry axis of the gate. Near it the
//! potential is expanded as
//!
//! ```text
//! φ ≈ φ₀ − E_c (z − c) + (E'_c / 2)(z − c)² − (E''_c / 2) T
//! ```
//!
//! where `T` is ρ² for a disc gate and x² for a strip gate.
//!
//! Two gate models are provided:
//!
//! * **Disc**: exact potential of a thin conducting disc of radius `a` held at `V`.
//! * **Strip**: a long strip of half-width `a` at height `D` above a grounded
//!   substrate, approximated by a line charge normalised to `V` on the strip edge:
//!   `φ(r) = V ln(2D/r) / ln(2D/a)`. This is an approximation; the field
//!   coefficients are exact derivatives of that model.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ElectrostaticsError {
    #[error("potential is singular on the disc edge (rho = a, z = 0)")]
    EdgeSingularity,
    #[error("invalid gate geometry: {0}")]
    InvalidGeometry(String),
    #[error("unsupported Taylor order {0} (expected 1 or 2)")]
    UnsupportedOrder(u32),
}

/// How the transverse curvature coefficient E''_c is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// The closed forms exactly as published, including the printed E''_c of the
    /// disc and the printed ρ² coefficient of the 2s–1s matrix element.
    #[default]
    Published,
    /// Coefficients consistent with Laplace's equation and with exact
    /// integration of the hydrogenic matrix element.
    Harmonic,
}

/// Shape of the transverse quadratic term in the local expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Transverse {
    /// ρ² = x² + y² (disc gate).
    Radial,
    /// x² only (strip gate along y).
    Planar,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GateGeometry {
    Disc {
        /// Disc radius a, m.
        radius: f64,
        /// Donor depth c, m.
        depth: f64,
    },
    Strip {
        /// Strip half-width a, m.
        half_width: f64,
        /// Donor depth c, m.
        depth: f64,
        /// Gate-to-substrate distance D, m.
        substrate_distance: f64,
    },
}

impl GateGeometry {
    pub fn disc(radius: f64, depth: f64) -> Result<Self, ElectrostaticsError> {
        let g = GateGeometry::Disc { radius, depth };
        g.validate()?;
        Ok(g)
    }

    pub fn strip(
        half_width: f64,
        depth: f64,
        substrate_distance: f64,
    ) -> Result<Self, ElectrostaticsError> {
        let g = GateGeometry::Strip {
            half_width,
            depth,
            substrate_distance,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<(), ElectrostaticsError> {
        let bad = |m: &str| Err(ElectrostaticsError::InvalidGeometry(m.to_string()));
        let (a, c) = (self.half_width(), self.depth());
        if !(a.is_finite() && a > 0.0) {
            return bad("gate size a must be positive");
        }
        if !(c.is_finite() && c > 0.0) {
            return bad("donor depth c must be positive");
        }
        if let GateGeometry::Strip {
            substrate_distance, ..
        } = self
        {
            if !(substrate_distance.is_finite() && *substrate_distance > a) {
                return bad("substrate distance D must exceed the strip half-width");
            }
        }
        Ok(())
    }

    /// Disc radius or strip half-width.
    pub fn half_width(&self) -> f64 {
        match *self {
            GateGeometry::Disc { radius, .. } => radius,
            GateGeometry::Strip { half_width, .. } => half_width,
        }
    }

    pub fn depth(&self) -> f64 {
        match *self {
            GateGeometry::Disc { depth, .. } | GateGeometry::Strip { depth, .. } => depth,
        }
    }

    pub fn with_depth(&self, depth: f64) -> Self {
        let mut g = *self;
        match &mut g {
            GateGeometry::Disc { depth: d, .. } | GateGeometry::Strip { depth: d, .. } => {
                *d = depth
            }
        }
        g
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            GateGeometry::Disc { .. } => "disc",
            GateGeometry::Strip { .. } => "strip",
        }
    }

    /// Potential at a point, in the gate's own coordinates: `transverse` is ρ for
    /// the disc and x for the strip, `z` is depth below the gate plane.
    pub fn potential(&self, transverse: f64, z: f64, v: f64) -> Result<f64, ElectrostaticsError> {
        match *self {
            GateGeometry::Disc { radius, .. } => disc_potential(transverse, z, v, radius),
            GateGeometry::Strip {
                half_width,
                substrate_distance,
                ..
            } => Ok(strip_potential(transverse, z, v, half_width, substrate_distance)),
        }
    }

    pub fn field_coeffs(&self, v: f64, convention: Convention) -> FieldCoefficients {
        match *self {
            GateGeometry::Disc { radius, depth } => match convention {
                Convention::Published => disc_field_coeffs(v, radius, depth),
                Convention::Harmonic => disc_field_coeffs_harmonic(v, radius, depth),
            },
            GateGeometry::Strip {
                half_width,
                depth,
                substrate_distance,
            } => strip_field_coeffs(v, half_width, depth, substrate_distance),
        }
    }
}

/// Local expansion coefficients of the gate potential at the donor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldCoefficients {
    /// Axial field E_c, V/m.
    pub e_c: f64,
    /// Axial gradient E'_c, V/m².
    pub e1_c: f64,
    /// Transverse curvature coefficient E''_c, V/m².
    pub e2_c: f64,
    /// Potential at the donor φ₀, V.
    pub phi0: f64,
    pub transverse: Transverse,
}

impl FieldCoefficients {
    pub fn zero(transverse: Transverse) -> Self {
        Self {
            e_c: 0.0,
            e1_c: 0.0,
            e2_c: 0.0,
            phi0: 0.0,
            transverse,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            e_c: self.e_c * k,
            e1_c: self.e1_c * k,
            e2_c: self.e2_c * k,
            phi0: self.phi0 * k,
            transverse: self.transverse,
        }
    }

    /// Evaluate the second-order local expansion at an offset (dt, dz) from the donor.
    pub fn taylor(&self, dt: f64, dz: f64) -> f64 {
        self.phi0 - self.e_c * dz + 0.5 * self.e1_c * dz * dz - 0.5 * self.e2_c * dt * dt
    }
}

/// Potential of a conducting disc of radius `a` at potential `v`, at cylindrical
/// coordinates (ρ, z) measured from the disc centre.
pub fn disc_potential(rho: f64, z: f64, v: f64, a: f64) -> Result<f64, ElectrostaticsError> {
    let rho = rho.abs();
    if z == 0.0 {
        if rho == a {
            return Err(ElectrostaticsError::EdgeSingularity);
        }
        if rho < a {
            return Ok(v);
        }
    }
    let s = rho * rho + z * z - a * a;
    let q = 4.0 * a * a * z * z;
    let root = (s * s + q).sqrt();
    // s + sqrt(s² + q), rewritten to avoid cancellation when s < 0
    let denom = if s >= 0.0 { s + root } else { q / (root - s) };
    Ok(2.0 * v / PI * (2.0 * a * a / denom).sqrt().atan())
}

/// Disc-gate coefficients as published: E_c = (2V/π) a/(a²+c²),
/// E'_c = (4V/π) ac/(a²+c²)², E''_c = (4V/π) √2 ac⁴/(a²+c²)^{7/2}.
pub fn disc_field_coeffs(v: f64, a: f64, c: f64) -> FieldCoefficients {
    let s = a * a + c * c;
    FieldCoefficients {
        e_c: 2.0 * v / PI * a / s,
        e1_c: 4.0 * v / PI * a * c / (s * s),
        e2_c: 4.0 * v / PI * 2f64.sqrt() * a * c.powi(4) / s.powf(3.5),
        phi0: 2.0 * v / PI * (a / c).atan(),
        transverse: Transverse::Radial,
    }
}

/// Disc-gate coefficients with the radial curvature fixed by Laplace's equation
/// on the axis (E''_c = E'_c / 2).
pub fn disc_field_coeffs_harmonic(v: f64, a: f64, c: f64) -> FieldCoefficients {
    let mut fc = disc_field_coeffs(v, a, c);
    fc.e2_c = 0.5 * fc.e1_c;
    fc
}

/// Line-charge strip model φ = V ln(2D/r) / ln(2D/a), r measured from the strip axis.
pub fn strip_potential(x: f64, z: f64, v: f64, a: f64, d: f64) -> f64 {
    let r = x.hypot(z);
    v * (2.0 * d / r).ln() / (2.0 * d / a).ln()
}

/// Strip-gate coefficients on the axis below the strip.
pub fn strip_field_coeffs(v: f64, a: f64, c: f64, d: f64) -> FieldCoefficients {
    strip_field_coeffs_at(v, a, d, 0.0, c)
}

/// Strip-gate coefficients at an arbitrary point (x, z), in the fixed (x, z)
/// frame: E_c = −∂φ/∂z, E'_c = ∂²φ/∂z², E''_c = −∂²φ/∂x².
pub fn strip_field_coeffs_at(v: f64, a: f64, d: f64, x: f64, z: f64) -> FieldCoefficients {
    let k = v / (2.0 * d / a).ln();
    let r2 = x * x + z * z;
    let curvature = k * (z * z - x * x) / (r2 * r2);
    FieldCoefficients {
        e_c: k * z / r2,
        e1_c: curvature,
        e2_c: curvature,
        phi0: k * (2.0 * d / r2.sqrt()).ln(),
        transverse: Transverse::Planar,
    }
}

/// Largest deviation between the exact gate potential and its local expansion of
/// the given order, over a ring of probe points at distance `probe` from the donor.
pub fn taylor_check(
    gate: &GateGeometry,
    v: f64,
    order: u32,
    probe: f64,
    convention: Convention,
) -> Result<f64, ElectrostaticsError> {
    if !(1..=2).contains(&order) {
        return Err(ElectrostaticsError::UnsupportedOrder(order));
    }
    let c = gate.depth();
    let fc = gate.field_coeffs(v, convention);
    let n = 64;
    let mut worst = 0.0f64;
    for k in 0..=n {
        let theta = PI * k as f64 / n as f64;
        let dt = probe * theta.sin();
        let dz = probe * theta.cos();
        let exact = gate.potential(dt, c + dz, v)?;
        let approx = if order == 1 {
            fc.phi0 - fc.e_c * dz
        } else {
            fc.taylor(dt, dz)
        };
        worst = worst.max((exact - approx).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{richardson_first, richardson_second};
    use proptest::prelude::*;

    const A: f64 = 5e-9;
    const C: f64 = 10e-9;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn disc_potential_limits() {
        assert_eq!(disc_potential(0.0, 0.0, 1.0, A).unwrap(), 1.0);
        assert!((disc_potential(0.0, 1e-18, 1.0, A).unwrap() - 1.0).abs() < 1e-8);
        let on_axis = disc_potential(0.0, C, 1.0, A).unwrap();
        assert!((on_axis - 2.0 / PI * 0.5f64.atan()).abs() < 1e-15);
        assert!((on_axis - 0.2952).abs() < 1e-4);
        assert!(disc_potential(0.0, 1e3, 1.0, A).unwrap() < 1e-11);
        assert_eq!(
            disc_potential(A, 0.0, 1.0, A),
            Err(ElectrostaticsError::EdgeSingularity)
        );
    }

    #[test]
    fn disc_potential_is_harmonic() {
        let h = 1e-10;
        for &(rho, z) in &[(2e-9, 8e-9), (7e-9, 3e-9), (1e-9, 12e-9)] {
            let f = |r: f64, z: f64| disc_potential(r, z, 1.0, A).unwrap();
            let d2r = richardson_second(&|r| f(r, z), rho, h);
            let d1r = richardson_first(&|r| f(r, z), rho, h);
            let d2z = richardson_second(&|z| f(rho, z), z, h);
            let lap = d2r + d1r / rho + d2z;
            assert!(lap.abs() < 1e-6 * d2z.abs(), "laplacian {lap} at ({rho},{z})");
        }
    }

    #[test]
    fn disc_coefficients_hand_values() {
        let fc = disc_field_coeffs(1.0, A, C);
        assert!(rel(fc.e_c, 2.546_479e7) < 1e-6);
        assert!(rel(fc.e1_c, 4.074_366_5e15) < 1e-7);
        assert!((fc.e2_c / fc.e1_c - 1.0119).abs() < 1e-4);
        let bracket = 1.0 - 49.0 * fc.e2_c / (16.0 * fc.e1_c);
        assert!((bracket + 2.099).abs() < 1e-3);
        let zero = disc_field_coeffs(0.0, A, C);
        assert_eq!((zero.e_c, zero.e1_c, zero.e2_c, zero.phi0), (0.0, 0.0, 0.0, 0.0));
    }

    #[test]
    fn disc_axial_coefficients_match_finite_differences() {
        let fc = disc_field_coeffs(1.0, A, C);
        let h = C * 1e-3;
        let along_z = |z: f64| disc_potential(0.0, z, 1.0, A).unwrap();
        let e_c = -richardson_first(&along_z, C, h);
        let e1_c = richardson_second(&along_z, C, h);
        assert!(rel(e_c, fc.e_c) < 1e-8, "{e_c} vs {}", fc.e_c);
        assert!(rel(e1_c, fc.e1_c) < 1e-8, "{e1_c} vs {}", fc.e1_c);
    }

    #[test]
    fn disc_radial_curvature_is_half_the_axial_gradient() {
        // φ is even in ρ, so the second difference straddles the axis
        let h = C * 1e-2;
        let along_rho = |r: f64| disc_potential(r, C, 1.0, A).unwrap();
        let curvature = -richardson_second(&along_rho, 0.0, h);
        let harmonic = disc_field_coeffs_harmonic(1.0, A, C);
        assert!(rel(curvature, harmonic.e2_c) < 1e-8);

        // the published E''_c differs from the true curvature by a closed-form factor
        let published = disc_field_coeffs(1.0, A, C);
        let factor = 2f64.sqrt() * 2.0 * C.powi(3) / (A * A + C * C).powf(1.5);
        assert!(rel(published.e2_c / curvature, factor) < 1e-8);
    }

    #[test]
    fn strip_coefficients() {
        let d = 100.0 * A;
        let fc = strip_field_coeffs(1.0, A, C, d);
        let l = 200f64.ln();
        assert!(rel(fc.e_c, 1.0 / (C * l)) < 1e-14);
        // within a factor of two of 1.7e7 V/m
        assert!(fc.e_c > 0.85e7 && fc.e_c < 3.4e7);
        assert!(rel(fc.e1_c, 1.0 / (C * C * l)) < 1e-14);
        assert_eq!(fc.e1_c, fc.e2_c);

        // 1/ln(2D/a) scaling at two substrate distances
        let far = strip_field_coeffs(1.0, A, C, 1000.0 * A);
        let ratio = (2000f64).ln() / l;
        assert!(rel(fc.e_c / far.e_c, ratio) < 1e-14);
        assert!(rel(fc.e1_c / far.e1_c, ratio) < 1e-14);

        let zero = strip_field_coeffs(0.0, A, C, d);
        assert_eq!((zero.e_c, zero.e1_c, zero.e2_c), (0.0, 0.0, 0.0));
    }

    #[test]
    fn strip_coefficients_match_finite_differences() {
        let d = 100.0 * A;
        let (x0, z0) = (1.5e-9, 11e-9);
        let fc = strip_field_coeffs_at(0.7, A, d, x0, z0);
        let h = z0 * 1e-3;
        let along_z = |z: f64| strip_potential(x0, z, 0.7, A, d);
        let along_x = |x: f64| strip_potential(x, z0, 0.7, A, d);
        assert!(rel(-richardson_first(&along_z, z0, h), fc.e_c) < 1e-8);
        assert!(rel(richardson_second(&along_z, z0, h), fc.e1_c) < 1e-7);
        assert!(rel(-richardson_second(&along_x, x0, h), fc.e2_c) < 1e-7);
    }

    #[test]
    fn taylor_residual_orders() {
        let gate = GateGeometry::disc(A, C).unwrap();
        assert_eq!(taylor_check(&gate, 1.0, 2, 0.0, Convention::Harmonic).unwrap(), 0.0);

        let r1 = taylor_check(&gate, 1.0, 2, 1e-9, Convention::Harmonic).unwrap();
        let r2 = taylor_check(&gate, 1.0, 2, 0.5e-9, Convention::Harmonic).unwrap();
        assert!(r1 < 1e-3, "{r1}");
        let slope = (r1 / r2).log2();
        assert!((slope - 3.0).abs() < 0.2, "residual order {slope}");

        // published E''_c leaves an O(h²) radial error: 1.06e-3 V at 1 nm
        let p1 = taylor_check(&gate, 1.0, 2, 1e-9, Convention::Published).unwrap();
        let p2 = taylor_check(&gate, 1.0, 2, 0.5e-9, Convention::Published).unwrap();
        assert!((p1 - 1.0577e-3).abs() < 1e-6, "{p1}");
        assert!(((p1 / p2).log2() - 2.0).abs() < 0.1);

        let o1 = taylor_check(&gate, 1.0, 1, 1e-9, Convention::Harmonic).unwrap();
        let o2 = taylor_check(&gate, 1.0, 1, 0.5e-9, Convention::Harmonic).unwrap();
        assert!(((o1 / o2).log2() - 2.0).abs() < 0.2);

        assert!(matches!(
            taylor_check(&gate, 1.0, 3, 1e-9, Convention::Harmonic),
            Err(ElectrostaticsError::UnsupportedOrder(3))
        ));
    }

    #[test]
    fn strip_taylor_residual_is_third_order() {
        let gate = GateGeometry::strip(A, C, 100.0 * A).unwrap();
        let r1 = taylor_check(&gate, 1.0, 2, 1e-9, Convention::Published).unwrap();
        let r2 = taylor_check(&gate, 1.0, 2, 0.5e-9, Convention::Published).unwrap();
        assert!(((r1 / r2).log2() - 3.0).abs() < 0.2);
    }

    #[test]
    fn geometry_validation() {
        assert!(GateGeometry::disc(0.0, C).is_err());
        assert!(GateGeometry::disc(A, -1.0).is_err());
        assert!(GateGeometry::strip(A, C, A / 2.0).is_err());
        assert!(GateGeometry::strip(A, C, 100.0 * A).is_ok());
    }

    proptest! {
        #[test]
        fn coefficients_are_linear_in_voltage(v in -5.0f64..5.0, a in 1e-9f64..2e-8, c in 1e-9f64..2e-8) {
            for gate in [GateGeometry::disc(a, c).unwrap(), GateGeometry::strip(a, c, 100.0 * a).unwrap()] {
                for conv in [Convention::Published, Convention::Harmonic] {
                    let unit = gate.field_coeffs(1.0, conv);
                    let fc = gate.field_coeffs(v, conv);
                    let s = unit.scaled(v);
                    for (x, y) in [(fc.e_c, s.e_c), (fc.e1_c, s.e1_c), (fc.e2_c, s.e2_c), (fc.phi0, s.phi0)] {
                        prop_assert!((x - y).abs() <= 1e-14 * y.abs().max(1e-300));
                    }
                }
            }
        }
    }
}
