//! Two-donor electron–nuclear spin spectrum.
//!
//! Energies are in units of the exchange coupling J. The reduced parameters are
//!
//! * β = 2μ_B B / J, so the singlet and the lowest triplet cross at β = 1,
//! * μ = g_N μ_N B / J,
//! * α_a = A_a / J, α_b = A_b / J.
//!
//! When a single field is swept, μ is tied to β by the fixed ratio
//! g_N μ_N / (2μ_B) ≈ 6.16e-4 ([`MuMode::Slaved`]).

pub mod basis;
pub mod eigen;
pub mod events;
pub mod export;
pub mod hamiltonian;
pub mod sweep;

pub use basis::{BasisState, Sector};
pub use eigen::{eigensolve_block, Eigen};
pub use events::{
    adiabatic_transfer_trace, strong_field_gap, strong_field_gap_reduced, find_anticrossings, find_level_events,
    lowest_level_crossing, numerical_strong_field_gap, AnticrossingReport, CrossingReport,
    StrongFieldGap, EventKind, TransferTrace,
};
pub use hamiltonian::{block_decompose, build_hamiltonian, symbolic_hamiltonian, Block, SpinMatrix};
pub use sweep::{default_grid, refine_grid, sweep_spectrum, SpectrumSweep, SweepTemplate, Track};

use crate::constants::PhysicalConstants;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpinError {
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("Hamiltonian entry ({row},{col}) couples different M+m blocks")]
    BlockLeak { row: usize, col: usize },
    #[error("invalid spin parameters: {0}")]
    InvalidParams(String),
    #[error("strong-field gap formula not applicable: {0}")]
    Domain(String),
}

/// Reduced parameters of H/J.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinParams {
    pub beta: f64,
    pub mu: f64,
    pub alpha_a: f64,
    pub alpha_b: f64,
}

impl SpinParams {
    pub fn new(beta: f64, mu: f64, alpha_a: f64, alpha_b: f64) -> Self {
        Self {
            beta,
            mu,
            alpha_a,
            alpha_b,
        }
    }

    /// From field B (T), exchange J (J) and hyperfine constants A_a, A_b (J).
    pub fn from_physical(p: &PhysicalSpinParams, pc: &PhysicalConstants) -> Result<Self, SpinError> {
        if !(p.j > 0.0 && p.j.is_finite()) {
            return Err(SpinError::InvalidParams(format!("J must be positive, got {}", p.j)));
        }
        Ok(Self {
            beta: 2.0 * pc.mu_b * p.b / p.j,
            mu: pc.g_n * pc.mu_n * p.b / p.j,
            alpha_a: p.a_a / p.j,
            alpha_b: p.a_b / p.j,
        })
    }

    /// The same system with donors a and b exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            alpha_a: self.alpha_b,
            alpha_b: self.alpha_a,
            ..*self
        }
    }

    pub fn is_finite(&self) -> bool {
        [self.beta, self.mu, self.alpha_a, self.alpha_b]
            .iter()
            .all(|x| x.is_finite())
    }
}

/// Physical inputs: field (T), exchange and hyperfine energies (J).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalSpinParams {
    pub b: f64,
    pub j: f64,
    pub a_a: f64,
    pub a_b: f64,
}

/// How μ follows β across a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum MuMode {
    Fixed { mu: f64 },
    /// μ = ratio·β.
    Slaved { ratio: f64 },
}

impl MuMode {
    /// Slaved with the physical ratio g_N μ_N / (2μ_B).
    pub fn physical(pc: &PhysicalConstants) -> Self {
        MuMode::Slaved {
            ratio: pc.nuclear_to_electron_zeeman(),
        }
    }

    pub fn mu(&self, beta: f64) -> f64 {
        match *self {
            MuMode::Fixed { mu } => mu,
            MuMode::Slaved { ratio } => ratio * beta,
        }
    }
}
