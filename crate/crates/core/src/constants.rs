//! Physical constants and silicon/phosphorus material parameters.
//!
//! Everything is stored in SI. The default values are the rounded figures
//! used throughout the donor-qubit literature this crate reproduces (not
//! CODATA), so that published numbers come out exactly.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Fundamental constants used by every formula in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConstants {
    /// Bohr magneton, J/T.
    pub mu_b: f64,
    /// Nuclear magneton, J/T.
    pub mu_n: f64,
    /// Landé factor of the ³¹P nucleus.
    pub g_n: f64,
    /// Elementary charge, C.
    pub e: f64,
    /// Vacuum permittivity, F/m.
    pub eps0: f64,
    /// Vacuum permeability, T·m/A.
    pub mu0: f64,
    /// Planck constant, J·s. The source quotes 6.62e-34 under the symbol ħ;
    /// numerically that is `h`, and `h` is what frequency conversions use.
    pub h: f64,
    /// Electron mass, kg.
    pub m_e: f64,
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self {
            mu_b: 9.27e-24,
            mu_n: 5.05e-27,
            g_n: 2.26,
            e: 1.6e-19,
            eps0: 8.85e-12,
            mu0: 4.0 * PI * 1e-7,
            h: 6.62e-34,
            m_e: 9.1e-31,
        }
    }
}

impl PhysicalConstants {
    /// Reduced Planck constant h/2π.
    pub fn hbar(&self) -> f64 {
        self.h / (2.0 * PI)
    }

    pub fn ev_to_joule(&self, ev: f64) -> f64 {
        ev * self.e
    }

    pub fn joule_to_ev(&self, joule: f64) -> f64 {
        joule / self.e
    }

    pub fn joule_to_hz(&self, joule: f64) -> f64 {
        joule / self.h
    }

    pub fn hz_to_joule(&self, hz: f64) -> f64 {
        hz * self.h
    }

    pub fn joule_to_mhz(&self, joule: f64) -> f64 {
        self.joule_to_hz(joule) * 1e-6
    }

    pub fn mhz_to_joule(&self, mhz: f64) -> f64 {
        self.hz_to_joule(mhz * 1e6)
    }

    /// Ratio g_N μ_N / (2 μ_B) linking the nuclear Zeeman parameter to the
    /// electron Zeeman parameter when a single field B is swept.
    pub fn nuclear_to_electron_zeeman(&self) -> f64 {
        self.g_n * self.mu_n / (2.0 * self.mu_b)
    }
}

/// Donor and host-crystal parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaterialParams {
    /// Effective Bohr radius a*, m.
    pub a_star: f64,
    /// Relative dielectric constant of silicon.
    pub eps_r: f64,
    /// Electron density at the nucleus |Ψ₀(0)|² at zero gate bias, m⁻³.
    pub psi0_sq: f64,
    /// Mean excitation energy ΔE entering the second-order sum, J (positive).
    pub delta_e_mean: f64,
    /// Override for the 1s–2s residual δE = E_1s − E_2s, J (negative).
    /// `None` uses the hydrogenic estimate from [`residual_delta_e`].
    pub delta_e_residual: Option<f64>,
    /// Effective mass in units of the electron mass.
    pub m_star_ratio: f64,
}

impl Default for MaterialParams {
    fn default() -> Self {
        let pc = PhysicalConstants::default();
        Self {
            a_star: 2.0e-9,
            eps_r: 11.9,
            psi0_sq: 0.43e30,
            delta_e_mean: pc.ev_to_joule(0.04),
            delta_e_residual: None,
            m_star_ratio: 0.31,
        }
    }
}

impl MaterialParams {
    /// δE in joules: the override if one is set, otherwise the hydrogenic estimate.
    pub fn delta_e(&self, pc: &PhysicalConstants) -> f64 {
        self.delta_e_residual
            .unwrap_or_else(|| residual_delta_e(self, pc))
    }

    /// Effective mass m* in kg.
    pub fn m_star(&self, pc: &PhysicalConstants) -> f64 {
        self.m_star_ratio * pc.m_e
    }
}

/// Contact hyperfine constant, as an energy and as a frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperfineConstant {
    pub joule: f64,
    pub hertz: f64,
}

/// Fermi contact constant A = (2/3) μ₀ (2μ_B)(g_N μ_N) |Ψ₀(0)|².
///
/// This is the SI form of (8π/3)|Ψ₀(0)|² 2μ_B g_N μ_N (μ₀/4π).
pub fn hyperfine_constant(mat: &MaterialParams, pc: &PhysicalConstants) -> HyperfineConstant {
    let joule = 2.0 / 3.0 * pc.mu0 * (2.0 * pc.mu_b) * (pc.g_n * pc.mu_n) * mat.psi0_sq;
    HyperfineConstant {
        joule,
        hertz: pc.joule_to_hz(joule),
    }
}

/// Hydrogenic 1s–2s residual δE = −(3/8) e² / (4π ε ε₀ a*), in joules.
pub fn residual_delta_e(mat: &MaterialParams, pc: &PhysicalConstants) -> f64 {
    -0.375 * pc.e * pc.e / (4.0 * PI * mat.eps_r * pc.eps0 * mat.a_star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn hyperfine_constant_near_115_mhz() {
        // hand evaluation: (2/3)(4π·1e-7)(2·9.27e-24)(2.26·5.05e-27)(0.43e30) / 6.62e-34
        let a = hyperfine_constant(&MaterialParams::default(), &PhysicalConstants::default());
        assert!((a.hertz - 1.151_432_857e8).abs() / 1.15e8 < 1e-8, "{}", a.hertz);
    }

    #[test]
    fn hyperfine_constant_is_linear_in_density() {
        let pc = PhysicalConstants::default();
        let mut mat = MaterialParams::default();
        let a1 = hyperfine_constant(&mat, &pc).joule;
        mat.psi0_sq *= 2.0;
        assert_eq!(hyperfine_constant(&mat, &pc).joule, 2.0 * a1);
        mat.psi0_sq = 0.0;
        assert_eq!(hyperfine_constant(&mat, &pc).joule, 0.0);
    }

    #[test]
    fn residual_matches_quoted_silicon_value() {
        let pc = PhysicalConstants::default();
        let de = pc.joule_to_ev(residual_delta_e(&MaterialParams::default(), &pc));
        assert!((de + 0.023).abs() / 0.023 < 0.05, "{de}");
    }

    #[test]
    fn residual_scaling() {
        let pc = PhysicalConstants::default();
        let mut mat = MaterialParams::default();
        let base = residual_delta_e(&mat, &pc);
        mat.eps_r /= 2.0;
        let halved = residual_delta_e(&mat, &pc);
        assert!((halved / base - 2.0).abs() < 1e-14);
        mat.a_star = 1e6;
        let far = residual_delta_e(&mat, &pc);
        assert!(far < 0.0 && far.abs() < 1e-30);
    }

    #[test]
    fn delta_e_override_wins() {
        let pc = PhysicalConstants::default();
        let mat = MaterialParams {
            delta_e_residual: Some(-1.0e-21),
            ..Default::default()
        };
        assert_eq!(mat.delta_e(&pc), -1.0e-21);
    }

    proptest! {
        #[test]
        fn unit_round_trips(x in -1.0e3f64..1.0e3) {
            let pc = PhysicalConstants::default();
            let ev = pc.joule_to_ev(pc.ev_to_joule(x));
            let hz = pc.joule_to_hz(pc.hz_to_joule(x));
            let mhz = pc.joule_to_mhz(pc.mhz_to_joule(x));
            // eV -> J -> MHz -> J -> eV
            let chain = pc.joule_to_ev(pc.mhz_to_joule(pc.joule_to_mhz(pc.ev_to_joule(x))));
            for y in [ev, hz, mhz, chain] {
                prop_assert!((y - x).abs() <= 1e-12 * x.abs().max(1e-300));
            }
        }

        #[test]
        fn residual_is_negative(a in 1e-10f64..1e-6, eps in 1.0f64..50.0) {
            let pc = PhysicalConstants::default();
            let mat = MaterialParams { a_star: a, eps_r: eps, ..Default::default() };
            prop_assert!(residual_delta_e(&mat, &pc) < 0.0);
        }
    }
}
