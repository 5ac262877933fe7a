//! Spectrum versus β with adiabatic continuation of eigenstates.
//!
//! Within each block, eigenvectors at neighbouring grid points are matched by
//! the permutation that maximizes the summed squared overlaps. When the best
//! and second-best permutations score within [`AMBIGUITY`], intermediate points
//! are inserted (bisecting, up to [`MAX_REFINE_DEPTH`] levels) and the matching
//! is done through them; the extra points are not part of the output.

use super::basis::{BasisState, Sector, BLOCK_LABELS};
use super::eigen::{eigensolve_block, Eigen};
use super::hamiltonian::{block, Block};
use super::{MuMode, SpinError, SpinParams};
use serde::{Deserialize, Serialize};

pub const JACOBI_TOL: f64 = 1e-14;
pub const AMBIGUITY: f64 = 1e-6;
pub const MAX_REFINE_DEPTH: u32 = 12;

/// Fixed part of the parameters; β comes from the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepTemplate {
    pub alpha_a: f64,
    pub alpha_b: f64,
    pub mu: MuMode,
}

impl SweepTemplate {
    pub fn at(&self, beta: f64) -> SpinParams {
        SpinParams::new(beta, self.mu.mu(beta), self.alpha_a, self.alpha_b)
    }
}

/// One adiabatically continued level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Track {
    pub id: usize,
    /// M+m of the block the level lives in.
    pub block: i8,
    /// Basis indices of the block, in vector component order.
    pub indices: Vec<usize>,
    /// Energy in units of J at each grid point.
    pub values: Vec<f64>,
    /// Rank within the block (0 = lowest) at each grid point.
    pub ranks: Vec<usize>,
    /// Block-local eigenvector at each grid point.
    pub vectors: Vec<Vec<f64>>,
}

impl Track {
    /// Dominant basis state and its weight at grid point `k`; ties go to the
    /// lower index.
    pub fn dominant(&self, k: usize) -> (usize, f64) {
        let mut best = (self.indices[0], -1.0);
        for (&i, x) in self.indices.iter().zip(&self.vectors[k]) {
            let w = x * x;
            if w > best.1 + 1e-12 {
                best = (i, w);
            }
        }
        best
    }

    pub fn weight_of(&self, k: usize, label: usize) -> f64 {
        self.indices
            .iter()
            .position(|&i| i == label)
            .map_or(0.0, |p| self.vectors[k][p].powi(2))
    }

    /// Weight in each (M_a+M_b, m_a+m_b) sector, ordered by sector.
    pub fn sector_weights(&self, k: usize) -> Vec<(Sector, f64)> {
        sector_weights(&self.indices, &self.vectors[k])
    }

    pub fn dominant_sector(&self, k: usize) -> (Sector, f64) {
        dominant_sector(&self.indices, &self.vectors[k])
    }
}

pub(crate) fn sector_weights(indices: &[usize], v: &[f64]) -> Vec<(Sector, f64)> {
    let mut out: Vec<(Sector, f64)> = Vec::new();
    for (&i, x) in indices.iter().zip(v) {
        let s = BasisState::from_index(i).sector();
        match out.iter_mut().find(|(t, _)| *t == s) {
            Some(entry) => entry.1 += x * x,
            None => out.push((s, x * x)),
        }
    }
    out.sort_by_key(|a| a.0);
    out
}

pub(crate) fn sector_weight(indices: &[usize], v: &[f64], s: Sector) -> f64 {
    indices
        .iter()
        .zip(v)
        .filter(|(&i, _)| BasisState::from_index(i).sector() == s)
        .map(|(_, x)| x * x)
        .sum()
}

pub(crate) fn dominant_sector(indices: &[usize], v: &[f64]) -> (Sector, f64) {
    sector_weights(indices, v)
        .into_iter()
        .fold(None, |best: Option<(Sector, f64)>, (s, w)| match best {
            Some(b) if b.1 + 1e-12 >= w => Some(b),
            _ => Some((s, w)),
        })
        .expect("non-empty block")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSweep {
    pub template: SweepTemplate,
    pub betas: Vec<f64>,
    /// 16 tracks: blocks in the order 0, +1, −1, +2, −2, and by energy at the
    /// first grid point within a block.
    pub tracks: Vec<Track>,
    /// Intermediate points inserted to resolve ambiguous matchings.
    pub refinements: usize,
}

impl SpectrumSweep {
    /// All 16 energies at grid point `k`, ascending.
    pub fn levels_at(&self, k: usize) -> Vec<f64> {
        let mut v: Vec<f64> = self.tracks.iter().map(|t| t.values[k]).collect();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn block_tracks(&self, label: i8) -> impl Iterator<Item = &Track> {
        self.tracks.iter().filter(move |t| t.block == label)
    }

    /// Diagonalize the block of `track` at an arbitrary β and return the
    /// eigenpair continuing the track from its nearest grid point:
    /// (rank, energy, vector).
    pub fn follow(&self, track: usize, beta: f64) -> Result<(usize, f64, Vec<f64>), SpinError> {
        let t = &self.tracks[track];
        let k = nearest(&self.betas, beta);
        let e = solve(&block(&self.template.at(beta), t.block))?;
        let r = best_match(&t.vectors[k], &e.vectors);
        Ok((r, e.values[r], e.vectors[r].clone()))
    }

    /// Block eigenpairs at an arbitrary β.
    pub fn solve_block(&self, label: i8, beta: f64) -> Result<Eigen, SpinError> {
        solve(&block(&self.template.at(beta), label))
    }
}

fn nearest(grid: &[f64], x: f64) -> usize {
    grid.iter()
        .enumerate()
        .fold((0, f64::INFINITY), |best, (i, g)| {
            let d = (g - x).abs();
            if d < best.1 {
                (i, d)
            } else {
                best
            }
        })
        .0
}

fn overlap2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>().powi(2)
}

pub(crate) fn best_match(v: &[f64], candidates: &[Vec<f64>]) -> usize {
    candidates
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (i, u)| {
            let o = overlap2(v, u);
            if o > best.1 + 1e-12 {
                (i, o)
            } else {
                best
            }
        })
        .0
}

fn solve(b: &Block) -> Result<Eigen, SpinError> {
    eigensolve_block(&b.matrix, JACOBI_TOL)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Best assignment σ (track t → eigenvector σ[t]) and its margin over the runner-up.
fn assign(prev: &[Vec<f64>], next: &[Vec<f64>], perms: &[Vec<usize>]) -> (Vec<usize>, f64) {
    let n = prev.len();
    let o: Vec<Vec<f64>> = prev
        .iter()
        .map(|v| next.iter().map(|u| overlap2(v, u)).collect())
        .collect();
    let mut best = (f64::NEG_INFINITY, 0usize);
    let mut second = f64::NEG_INFINITY;
    for (pi, p) in perms.iter().enumerate() {
        let s: f64 = (0..n).map(|t| o[t][p[t]]).sum();
        if s > best.0 {
            second = best.0;
            best = (s, pi);
        } else if s > second {
            second = s;
        }
    }
    (perms[best.1].clone(), best.0 - second)
}

struct BlockTracker {
    label: i8,
    perms: Vec<Vec<usize>>,
    template: SweepTemplate,
    refinements: usize,
}

impl BlockTracker {
    /// Continue `prev` (track-ordered vectors at `b0`) to `b1`, whose eigenpairs are `e1`.
    /// Returns σ with track t ↦ eigenpair σ[t] of `e1`.
    fn step(
        &mut self,
        prev: &[Vec<f64>],
        b0: f64,
        b1: f64,
        e1: &Eigen,
        depth: u32,
    ) -> Result<Vec<usize>, SpinError> {
        let (sigma, margin) = assign(prev, &e1.vectors, &self.perms);
        if prev.len() < 2 || margin >= AMBIGUITY || depth >= MAX_REFINE_DEPTH {
            return Ok(sigma);
        }
        let mid = 0.5 * (b0 + b1);
        if mid == b0 || mid == b1 {
            return Ok(sigma);
        }
        self.refinements += 1;
        let em = solve(&block(&self.template.at(mid), self.label))?;
        let s1 = self.step(prev, b0, mid, &em, depth + 1)?;
        let at_mid: Vec<Vec<f64>> = s1.iter().map(|&k| em.vectors[k].clone()).collect();
        self.step(&at_mid, mid, b1, e1, depth + 1)
    }
}

/// Diagonalize every block at each grid point and continue the eigenstates.
pub fn sweep_spectrum(template: &SweepTemplate, grid: &[f64]) -> Result<SpectrumSweep, SpinError> {
    if grid.is_empty() {
        return Err(SpinError::InvalidParams("empty β grid".into()));
    }
    if grid.iter().any(|b| !b.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SpinError::InvalidParams("β grid must be finite and strictly ascending".into()));
    }
    if !template.at(grid[0]).is_finite() {
        return Err(SpinError::InvalidParams("non-finite spin parameters".into()));
    }
    let mut tracks = Vec::new();
    let mut refinements = 0;
    for &label in &BLOCK_LABELS {
        let first = block(&template.at(grid[0]), label);
        let n = first.indices.len();
        let mut tracker = BlockTracker {
            label,
            perms: permutations(n),
            template: *template,
            refinements: 0,
        };
        let e0 = solve(&first)?;
        let base = tracks.len();
        for r in 0..n {
            tracks.push(Track {
                id: base + r,
                block: label,
                indices: first.indices.clone(),
                values: vec![e0.values[r]],
                ranks: vec![r],
                vectors: vec![e0.vectors[r].clone()],
            });
        }
        for w in grid.windows(2) {
            let e1 = solve(&block(&template.at(w[1]), label))?;
            let prev: Vec<Vec<f64>> = (0..n)
                .map(|t| tracks[base + t].vectors.last().unwrap().clone())
                .collect();
            let sigma = tracker.step(&prev, w[0], w[1], &e1, 0)?;
            for (t, &k) in sigma.iter().enumerate() {
                let tr = &mut tracks[base + t];
                tr.values.push(e1.values[k]);
                tr.ranks.push(k);
                tr.vectors.push(e1.vectors[k].clone());
            }
        }
        refinements += tracker.refinements;
    }
    Ok(SpectrumSweep {
        template: *template,
        betas: grid.to_vec(),
        tracks,
        refinements,
    })
}

/// `n` evenly spaced points on [lo, hi].
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// 401 points on β ∈ [0.2, 3].
pub fn default_grid() -> Vec<f64> {
    linear_grid(0.2, 3.0, 401)
}

/// Add points so the spacing is `factor` times finer within `half_width` of
/// each centre. The result is sorted and free of duplicates.
pub fn refine_grid(grid: &[f64], centres: &[f64], half_width: f64, factor: usize) -> Vec<f64> {
    let mut out = grid.to_vec();
    for w in grid.windows(2) {
        let (a, b) = (w[0], w[1]);
        let touches = centres
            .iter()
            .any(|&c| b >= c - half_width && a <= c + half_width);
        if touches && factor > 1 {
            for i in 1..factor {
                out.push(a + (b - a) * i as f64 / factor as f64);
            }
        }
    }
    out.sort_by(f64::total_cmp);
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::PhysicalConstants;

    fn template(a: f64, b: f64) -> SweepTemplate {
        SweepTemplate {
            alpha_a: a,
            alpha_b: b,
            mu: MuMode::physical(&PhysicalConstants::default()),
        }
    }

    #[test]
    fn permutation_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(permutations(6).len(), 720);
        assert_eq!(permutations(1), vec![vec![0]]);
    }

    #[test]
    fn single_point_sweep() {
        let s = sweep_spectrum(&template(0.3, 0.4), &[1.0]).unwrap();
        assert_eq!(s.tracks.len(), 16);
        assert!(s.tracks.iter().all(|t| t.values.len() == 1));
        let sizes: Vec<usize> = BLOCK_LABELS
            .iter()
            .map(|&l| s.block_tracks(l).count())
            .collect();
        assert_eq!(sizes, vec![6, 4, 4, 1, 1]);
    }

    #[test]
    fn bad_grids() {
        assert!(sweep_spectrum(&template(0.3, 0.4), &[]).is_err());
        assert!(sweep_spectrum(&template(0.3, 0.4), &[1.0, 1.0]).is_err());
        assert!(sweep_spectrum(&template(0.3, 0.4), &[1.0, f64::NAN]).is_err());
    }

    #[test]
    fn tracks_are_continuous() {
        let s = sweep_spectrum(&template(0.3, 0.4), &linear_grid(0.2, 3.0, 141)).unwrap();
        for t in &s.tracks {
            for w in t.vectors.windows(2) {
                assert!(overlap2(&w[0], &w[1]) > 0.5);
            }
        }
    }

    #[test]
    fn strong_field_ordering() {
        // β ≫ 1: the M = −1 triplet quartet lies below the singlet quartet
        let t = SweepTemplate {
            alpha_a: 0.1,
            alpha_b: 0.1,
            mu: MuMode::Fixed { mu: 0.0 },
        };
        let s = sweep_spectrum(&t, &[8.0]).unwrap();
        let mut by_energy: Vec<&Track> = s.tracks.iter().collect();
        by_energy.sort_by(|a, b| a.values[0].total_cmp(&b.values[0]));
        for t in &by_energy[..4] {
            assert_eq!(t.dominant_sector(0).0.electron, -1);
        }
        for t in &by_energy[4..8] {
            assert_eq!(t.dominant_sector(0).0.electron, 0);
        }
    }

    #[test]
    fn refine_grid_adds_points_locally() {
        let g = linear_grid(0.0, 1.0, 11);
        let r = refine_grid(&g, &[0.5], 0.05, 10);
        assert_eq!(r.len(), 11 + 2 * 9);
        assert!(r.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(refine_grid(&g, &[], 0.05, 10), g);
    }
}
