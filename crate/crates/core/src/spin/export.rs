//! Tabular and JSON views of a sweep.

use super::sweep::SpectrumSweep;
use serde::Serialize;
use std::io::Write;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub beta: f64,
    pub level: usize,
    pub block: i8,
    pub eigenvalue: f64,
    pub dominant_state: usize,
    pub dominant_weight: f64,
}

/// One row per (grid point, track), grid-major.
pub fn sweep_rows(sweep: &SpectrumSweep) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(sweep.betas.len() * sweep.tracks.len());
    for (k, &beta) in sweep.betas.iter().enumerate() {
        for t in &sweep.tracks {
            let (state, weight) = t.dominant(k);
            rows.push(SweepRow {
                beta,
                level: t.id,
                block: t.block,
                eigenvalue: t.values[k],
                dominant_state: state,
                dominant_weight: weight,
            });
        }
    }
    rows
}

pub fn write_sweep_csv<W: Write>(sweep: &SpectrumSweep, out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    for row in sweep_rows(sweep) {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrackSummary {
    pub level: usize,
    pub block: i8,
    pub eigenvalues: Vec<f64>,
    pub dominant_states: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepDocument {
    pub alpha_a: f64,
    pub alpha_b: f64,
    pub mu: super::MuMode,
    pub beta: Vec<f64>,
    pub tracks: Vec<TrackSummary>,
}

pub fn sweep_document(sweep: &SpectrumSweep) -> SweepDocument {
    SweepDocument {
        alpha_a: sweep.template.alpha_a,
        alpha_b: sweep.template.alpha_b,
        mu: sweep.template.mu,
        beta: sweep.betas.clone(),
        tracks: sweep
            .tracks
            .iter()
            .map(|t| TrackSummary {
                level: t.id,
                block: t.block,
                eigenvalues: t.values.clone(),
                dominant_states: (0..sweep.betas.len()).map(|k| t.dominant(k).0).collect(),
            })
            .collect(),
    }
}
