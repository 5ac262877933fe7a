//! Level crossings, anticrossings and adiabatic state transfer.
//!
//! An anticrossing is detected from the character of a continued level rather
//! than from gap minima alone: a track whose dominant (M_a+M_b, m_a+m_b) sector
//! differs between the two ends of the sweep has exchanged its character with
//! a neighbour. The exchange point β½ is where the two sector weights are equal;
//! the partner is the adjacent level of the same block with the smaller gap
//! there, and the minimum gap is refined by golden-section search around the
//! smallest sampled gap inside the mixing window (25%–75%).

use super::basis::{BasisState, Sector};
use super::sweep::{sector_weight, SpectrumSweep};
use super::{PhysicalSpinParams, SpinError, SpinParams};
use crate::constants::PhysicalConstants;
use serde::{Deserialize, Serialize};

/// Gaps below this (units of J) are reported as true crossings.
pub const CROSSING_GAP: f64 = 1e-9;

/// Sector weight needed at both ends for a conclusive transfer label.
pub const CONCLUSIVE_WEIGHT: f64 = 0.6;

/// Basis-state weights closer than this are treated as a tie when choosing
/// which level a label enters on.
pub const LABEL_TIE: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EventKind {
    Anticrossing,
    Crossing,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnticrossingReport {
    pub kind: EventKind,
    /// M+m.
    pub block: i8,
    pub track: usize,
    pub partner: usize,
    /// Dominant basis state of the track at the high-β end and at the low-β end.
    pub pair: (usize, usize),
    pub sectors: (Sector, Sector),
    /// Where the two sector weights are equal.
    pub beta_half: f64,
    /// Location of the minimum gap.
    pub beta_star: f64,
    /// Units of J.
    pub min_gap: f64,
    /// The lower of the two levels is the lowest level of its block.
    pub lowest: bool,
    /// Strong-field closed form at β*, where it applies (α_a = α_b, β* ≥ 3).
    pub strong_field_gap: Option<f64>,
}

/// Every character exchange in the sweep, crossings included.
pub fn find_level_events(sweep: &SpectrumSweep) -> Result<Vec<AnticrossingReport>, SpinError> {
    let n = sweep.betas.len();
    let mut out: Vec<AnticrossingReport> = Vec::new();
    if n < 2 {
        return Ok(out);
    }
    for track in &sweep.tracks {
        let (s_hi, _) = track.dominant_sector(n - 1);
        let (s_lo, _) = track.dominant_sector(0);
        if s_hi == s_lo {
            continue;
        }
        if let Some(report) = analyse_exchange(sweep, track.id, s_hi, s_lo)? {
            let key = |r: &AnticrossingReport| (r.track.min(r.partner), r.track.max(r.partner));
            match out.iter_mut().find(|r| key(r) == key(&report)) {
                Some(existing) => {
                    let lower = |r: &AnticrossingReport| sweep.tracks[r.track].ranks[0];
                    if lower(&report) < lower(existing) {
                        *existing = report;
                    }
                }
                None => out.push(report),
            }
        }
    }
    out.sort_by(|a, b| {
        a.block
            .cmp(&b.block)
            .then(a.beta_star.total_cmp(&b.beta_star))
            .then(a.track.cmp(&b.track))
    });
    Ok(out)
}

/// Anticrossings only (events with a non-vanishing gap).
pub fn find_anticrossings(sweep: &SpectrumSweep) -> Result<Vec<AnticrossingReport>, SpinError> {
    Ok(find_level_events(sweep)?
        .into_iter()
        .filter(|r| r.kind == EventKind::Anticrossing)
        .collect())
}

fn analyse_exchange(
    sweep: &SpectrumSweep,
    id: usize,
    s_hi: Sector,
    s_lo: Sector,
) -> Result<Option<AnticrossingReport>, SpinError> {
    let track = &sweep.tracks[id];
    let betas = &sweep.betas;
    let n = betas.len();
    let frac = |v: &[f64]| {
        let (h, l) = (
            sector_weight(&track.indices, v, s_hi),
            sector_weight(&track.indices, v, s_lo),
        );
        if h + l == 0.0 {
            0.5
        } else {
            h / (h + l)
        }
    };
    let on_grid: Vec<f64> = track.vectors.iter().map(|v| frac(v)).collect();

    // last grid interval (scanning down from high β) where the fraction passes ½
    let Some(k) = (0..n - 1).rev().find(|&k| on_grid[k] <= 0.5 && on_grid[k + 1] > 0.5) else {
        return Ok(None);
    };
    let (mut lo, mut hi) = (betas[k], betas[k + 1]);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (_, _, v) = sweep.follow(id, mid)?;
        if frac(&v) > 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let beta_half = 0.5 * (lo + hi);

    // mixing window on the grid
    let w_lo = (0..=k).rev().find(|&i| on_grid[i] <= 0.25).unwrap_or(0);
    let w_hi = (k + 1..n).find(|&i| on_grid[i] >= 0.75).unwrap_or(n - 1);

    let (rank, e_track, _) = sweep.follow(id, beta_half)?;

    // partner: the level exchanging in the opposite direction, else the nearer neighbour
    let mut partner: Option<(usize, usize, f64)> = None;
    for t in sweep.block_tracks(track.block) {
        if t.id == id || t.dominant_sector(n - 1).0 != s_lo || t.dominant_sector(0).0 != s_hi {
            continue;
        }
        let (r, e, _) = sweep.follow(t.id, beta_half)?;
        if partner.is_none_or(|(_, _, best)| (e - e_track).abs() < (best - e_track).abs()) {
            partner = Some((t.id, r, e));
        }
    }
    let (partner, partner_rank) = match partner {
        Some((p, r, _)) => (p, r),
        None => {
            let e = sweep.solve_block(track.block, beta_half)?;
            let below = rank.checked_sub(1);
            let above = (rank + 1 < e.values.len()).then_some(rank + 1);
            let r = match (below, above) {
                (Some(a), Some(b)) if e.values[rank] - e.values[a] <= e.values[b] - e.values[rank] => a,
                (_, Some(b)) => b,
                (Some(a), None) => a,
                (None, None) => return Ok(None),
            };
            let mut p = id;
            for t in sweep.block_tracks(track.block) {
                if t.id != id && sweep.follow(t.id, beta_half)?.0 == r {
                    p = t.id;
                    break;
                }
            }
            if p == id {
                return Ok(None);
            }
            (p, r)
        }
    };
    let gap_at = |beta: f64| -> Result<f64, SpinError> {
        Ok((sweep.follow(id, beta)?.1 - sweep.follow(partner, beta)?.1).abs())
    };
    let grid_gap = |i: usize| (track.values[i] - sweep.tracks[partner].values[i]).abs();

    let mut best = (beta_half, gap_at(beta_half)?);
    let mut best_i = None;
    for i in w_lo..=w_hi {
        let g = grid_gap(i);
        if g < best.1 {
            best = (betas[i], g);
            best_i = Some(i);
        }
    }
    let (a, b) = match best_i {
        Some(i) => (betas[i.saturating_sub(1).max(w_lo)], betas[(i + 1).min(w_hi)]),
        None => (betas[k], betas[k + 1]),
    };
    let (beta_star, min_gap) = golden_min(&gap_at, a, b, best)?;

    let closed_form = (sweep.template.alpha_a == sweep.template.alpha_b && beta_star >= 3.0)
        .then(|| strong_field_gap_reduced(beta_star, sweep.template.alpha_a).ok())
        .flatten();

    Ok(Some(AnticrossingReport {
        kind: if min_gap < CROSSING_GAP {
            EventKind::Crossing
        } else {
            EventKind::Anticrossing
        },
        block: track.block,
        track: id,
        partner,
        pair: (track.dominant(n - 1).0, track.dominant(0).0),
        sectors: (s_hi, s_lo),
        beta_half,
        beta_star,
        min_gap,
        lowest: rank.min(partner_rank) == 0,
        strong_field_gap: closed_form,
    }))
}

/// Golden-section minimization on [a, b], seeded with a known point.
fn golden_min<F>(f: &F, mut a: f64, mut b: f64, seed: (f64, f64)) -> Result<(f64, f64), SpinError>
where
    F: Fn(f64) -> Result<f64, SpinError>,
{
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut best = seed;
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..200 {
        if (b - a) <= 1e-12 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2)?;
        }
    }
    for (x, y) in [(x1, f1), (x2, f2)] {
        if y < best.1 {
            best = (x, y);
        }
    }
    Ok(best)
}

/// Composition of one continued level at both ends of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransferTrace {
    /// Requested basis state at the high-β end.
    pub entry_label: usize,
    pub track: usize,
    /// Dominant basis state and weight at the high-β end.
    pub entry: (usize, f64),
    /// Dominant basis state and weight at the low-β end.
    pub exit: (usize, f64),
    pub entry_sector: (Sector, f64),
    pub exit_sector: (Sector, f64),
    /// The dominant sector differs between the two ends.
    pub exchanged: bool,
    /// Both dominant sector weights reach [`CONCLUSIVE_WEIGHT`].
    pub conclusive: bool,
}

impl TransferTrace {
    /// True when the trace conclusively carries `entry_label`'s sector into
    /// the sector of `exit_label`.
    pub fn certifies(&self, exit_label: usize) -> bool {
        self.conclusive
            && self.entry_sector.0 == BasisState::from_index(self.entry_label).sector()
            && self.exit_sector.0 == BasisState::from_index(exit_label).sector()
    }
}

/// Follow the level that carries the most weight on `entry_label` at the
/// high-β end of the sweep down to the low-β end. Weights within
/// [`LABEL_TIE`] of each other count as tied (as for |14⟩ and |15⟩ when
/// α_a = α_b), and ties go to the lower level.
pub fn adiabatic_transfer_trace(sweep: &SpectrumSweep, entry_label: usize) -> TransferTrace {
    let n = sweep.betas.len();
    let block = BasisState::from_index(entry_label).block();
    let track = sweep
        .block_tracks(block)
        .fold(None, |best: Option<(usize, f64, f64)>, t| {
            let w = t.weight_of(n - 1, entry_label);
            let e = t.values[n - 1];
            match best {
                Some((_, bw, be)) if bw > w + LABEL_TIE || ((bw - w).abs() <= LABEL_TIE && be <= e) => best,
                _ => Some((t.id, w, e)),
            }
        })
        .expect("every block has a track")
        .0;
    let t = &sweep.tracks[track];
    let entry_sector = t.dominant_sector(n - 1);
    let exit_sector = t.dominant_sector(0);
    TransferTrace {
        entry_label,
        track,
        entry: t.dominant(n - 1),
        exit: t.dominant(0),
        entry_sector,
        exit_sector,
        exchanged: entry_sector.0 != exit_sector.0,
        conclusive: entry_sector.1 >= CONCLUSIVE_WEIGHT && exit_sector.1 >= CONCLUSIVE_WEIGHT,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StrongFieldGap {
    /// E₁₄ − E₁₅, J.
    pub energy: f64,
    /// ν_J = (E₁₄ − E₁₅)/h, Hz.
    pub frequency: f64,
}

/// Strong-field splitting of the two M = −1, m = 0 levels,
/// (A/2)²/(2μ_B B − J) − (A/2)²/(2μ_B B), for equal hyperfine constants.
pub fn strong_field_gap(p: &PhysicalSpinParams, pc: &PhysicalConstants) -> Result<StrongFieldGap, SpinError> {
    if p.a_a != p.a_b {
        return Err(SpinError::Domain("requires A_a = A_b".into()));
    }
    if p.j < 0.0 || !p.j.is_finite() {
        return Err(SpinError::InvalidParams(format!("J must be non-negative, got {}", p.j)));
    }
    let zeeman = 2.0 * pc.mu_b * p.b;
    if zeeman == p.j {
        return Err(SpinError::Domain("pole at 2μ_B B = J (anticrossing region)".into()));
    }
    if p.j > 0.0 && zeeman / p.j < 3.0 {
        return Err(SpinError::Domain(format!(
            "strong-field form needs β ≥ 3, got β = {:.4}",
            zeeman / p.j
        )));
    }
    let q = (p.a_a / 2.0).powi(2);
    let energy = q / (zeeman - p.j) - q / zeeman;
    Ok(StrongFieldGap {
        energy,
        frequency: pc.joule_to_hz(energy),
    })
}

/// The same splitting in units of J: (α/2)²/(β − 1) − (α/2)²/β.
pub fn strong_field_gap_reduced(beta: f64, alpha: f64) -> Result<f64, SpinError> {
    if beta == 1.0 {
        return Err(SpinError::Domain("pole at β = 1".into()));
    }
    if beta < 3.0 {
        return Err(SpinError::Domain(format!("strong-field form needs β ≥ 3, got β = {beta}")));
    }
    let q = (alpha / 2.0).powi(2);
    Ok(q / (beta - 1.0) - q / beta)
}

/// E₁₄ − E₁₅ from diagonalization: the splitting of the two lowest M+m = −1
/// levels, in units of J.
pub fn numerical_strong_field_gap(p: &SpinParams) -> Result<f64, SpinError> {
    let b = super::hamiltonian::block(p, -1);
    let e = super::eigen::eigensolve_block(&b.matrix, super::sweep::JACOBI_TOL)?;
    Ok(e.values[1] - e.values[0])
}

/// Closest approach of the two lowest electron levels, each taken as the mean
/// of a quartet of hyperfine sublevels.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingReport {
    pub beta: f64,
    pub gap: f64,
    /// Grid spacing at the reported point.
    pub grid_step: f64,
}

pub fn lowest_level_crossing(sweep: &SpectrumSweep) -> CrossingReport {
    let n = sweep.betas.len();
    let gap = |k: usize| {
        let l = sweep.levels_at(k);
        l[4..8].iter().sum::<f64>() / 4.0 - l[0..4].iter().sum::<f64>() / 4.0
    };
    let (k, g) = (0..n)
        .map(|k| (k, gap(k)))
        .fold((0, f64::INFINITY), |b, (k, g)| if g < b.1 { (k, g) } else { b });
    let step = match n {
        1 => 0.0,
        _ if k + 1 < n => sweep.betas[k + 1] - sweep.betas[k],
        _ => sweep.betas[k] - sweep.betas[k - 1],
    };
    CrossingReport {
        beta: sweep.betas[k],
        gap: g,
        grid_step: step,
    }
}
