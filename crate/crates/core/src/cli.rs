//! Command-line front end. Every subcommand reads the same run configuration,
//! writes its tables to the output directory and prints a short summary.
//!
//! Exit codes: 0 success, 1 failed validation or I/O error, 2 configuration
//! error, 3 eigensolver failure.

use crate::config::{ConfigError, OutputFormat, RunConfig};
use crate::constants::hyperfine_constant;
use crate::electrostatics::{Convention, GateGeometry};
use crate::error_budget::{
    depth_tolerance, find_nulling_parameters, BudgetContext, BudgetError, NullingTriple,
};
use crate::hyperfine::{gate_shift, shift_polynomial, ShiftPolynomial};
use crate::spin::export::{sweep_document, sweep_rows};
use crate::spin::{
    adiabatic_transfer_trace, strong_field_gap_reduced, find_anticrossings, numerical_strong_field_gap,
    refine_grid, sweep_spectrum, AnticrossingReport, SpectrumSweep, SpinError, SweepTemplate,
    TransferTrace,
};
use crate::validation::{run_all, CriterionResult};
use clap::{Parser, Subcommand};
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use thiserror::Error;

/// Half-width (in β) of the refined window placed around each anticrossing.
const REFINE_HALF_WIDTH: f64 = 0.05;
const REFINE_FACTOR: usize = 10;

#[derive(Debug, Parser)]
#[command(name = "donorqc", version, about = "Donor qubit hyperfine, error budget and spin spectrum calculations")]
pub struct Cli {
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Override a configuration value, e.g. --set gate.depth="12 nm".
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    pub overrides: Vec<String>,
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    /// csv, json or both.
    #[arg(long, global = true)]
    pub format: Option<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Hyperfine shift ΔA/A against gate voltage.
    Hic,
    /// Placement error budget and admissible voltage error for a strip gate.
    ErrorBudget,
    /// Two-donor spin spectrum over the β grid.
    Spectrum,
    /// Anticrossings and adiabatic transfer traces.
    Anticross,
    /// Run the reproduction checks.
    Validate,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Budget(#[from] BudgetError),
    #[error("{0}")]
    Spin(#[from] SpinError),
    #[error("{0}")]
    Io(String),
    #[error("{0} validation criteria failed")]
    Validation(usize),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Budget(_) => 2,
            CliError::Spin(SpinError::NoConvergence { .. }) => 3,
            CliError::Spin(SpinError::InvalidParams(_)) => 2,
            CliError::Spin(_) | CliError::Io(_) | CliError::Validation(_) => 1,
        }
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// Parse the process arguments and run.
pub fn run() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn load_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::load(cli.config.as_deref(), &cli.overrides)?;
    if let Some(dir) = &cli.out_dir {
        cfg.out_dir = dir.clone();
    }
    if let Some(f) = &cli.format {
        cfg.format = OutputFormat::parse(f).ok_or_else(|| ConfigError {
            field: "output.format".into(),
            message: format!("expected csv, json or both, got {f:?}"),
        })?;
    }
    Ok(cfg)
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let cfg = load_config(cli)?;
    let out = Output::new(&cfg)?;
    match cli.command {
        Command::Hic => hic(&cfg, &out),
        Command::ErrorBudget => error_budget(&cfg, &out),
        Command::Spectrum => spectrum(&cfg, &out),
        Command::Anticross => anticross(&cfg, &out),
        Command::Validate => validate(&out),
    }
}

struct Output {
    dir: PathBuf,
    format: OutputFormat,
}

impl Output {
    fn new(cfg: &RunConfig) -> Result<Self, CliError> {
        fs::create_dir_all(&cfg.out_dir).map_err(|e| io_err(&cfg.out_dir, e))?;
        Ok(Self {
            dir: cfg.out_dir.clone(),
            format: cfg.format,
        })
    }

    /// Header is written explicitly so empty tables still carry it.
    fn table<T: Serialize>(&self, name: &str, header: &[&str], rows: &[T]) -> Result<(), CliError> {
        if !self.format.csv() {
            return Ok(());
        }
        let path = self.dir.join(name);
        let mut w = csv::WriterBuilder::new()
            .has_headers(false)
            .from_path(&path)
            .map_err(|e| io_err(&path, e))?;
        w.write_record(header).map_err(|e| io_err(&path, e))?;
        for r in rows {
            w.serialize(r).map_err(|e| io_err(&path, e))?;
        }
        w.flush().map_err(|e| io_err(&path, e))
    }

    fn json<T: Serialize>(&self, name: &str, value: &T) -> Result<(), CliError> {
        if !self.format.json() {
            return Ok(());
        }
        self.json_always(name, value)
    }

    fn json_always<T: Serialize>(&self, name: &str, value: &T) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let mut text = serde_json::to_string_pretty(value).map_err(|e| io_err(&path, e))?;
        text.push('\n');
        fs::write(&path, text).map_err(|e| io_err(&path, e))
    }
}

#[derive(Debug, Serialize)]
struct HicRow {
    voltage: f64,
    second_order: f64,
    first_order_linear: f64,
    first_order_squared: f64,
    total: f64,
    shift_hz: f64,
}

const HIC_HEADER: [&str; 6] = [
    "voltage",
    "second_order",
    "first_order_linear",
    "first_order_squared",
    "total",
    "shift_hz",
];

#[derive(Debug, Serialize)]
struct HicDocument<'a> {
    gate: GateGeometry,
    convention: Convention,
    hyperfine_constant_hz: f64,
    polynomial: ShiftPolynomial,
    model: String,
    rows: &'a [HicRow],
}

fn model_note(gate: &GateGeometry, conv: Convention) -> String {
    let field = match gate {
        GateGeometry::Disc { .. } => "closed-form potential of a conducting disc gate held at V",
        GateGeometry::Strip { .. } => {
            "strip gate modelled as a line charge, V ln(2D/r)/ln(2D/a), D = substrate distance"
        }
    };
    let element = match conv {
        Convention::Published => "closed-form 2s-1s element with the published transverse coefficient",
        Convention::Harmonic => "2s-1s element with exact hydrogenic coefficients and a harmonic (Laplace) local field",
    };
    format!("{field}; {element}")
}

fn hic(cfg: &RunConfig, out: &Output) -> Result<(), CliError> {
    let gate = cfg.require_gate()?;
    let a0 = hyperfine_constant(&cfg.material, &cfg.constants).hertz;
    let rows: Vec<HicRow> = cfg
        .voltages
        .iter()
        .map(|&v| {
            let s = gate_shift(&gate, v, &cfg.material, &cfg.constants, cfg.convention);
            HicRow {
                voltage: v,
                second_order: s.second_order,
                first_order_linear: s.first_order_linear,
                first_order_squared: s.first_order_squared,
                total: s.total,
                shift_hz: s.total * a0,
            }
        })
        .collect();
    let poly = shift_polynomial(&gate, &cfg.material, &cfg.constants, cfg.convention);
    out.table("hic.csv", &HIC_HEADER, &rows)?;
    out.json(
        "hic.json",
        &HicDocument {
            gate,
            convention: cfg.convention,
            hyperfine_constant_hz: a0,
            polynomial: poly,
            model: model_note(&gate, cfg.convention),
            rows: &rows,
        },
    )?;
    println!(
        "{} gate: ΔA/A = {:.6}·V + {:.6}·V² (A/h = {:.4e} Hz)",
        gate.kind_name(),
        poly.linear,
        poly.quadratic,
        a0
    );
    for r in &rows {
        println!("  V = {:8.4} V   ΔA/A = {:+.6e}   Δν = {:+.4e} Hz", r.voltage, r.total, r.shift_hz);
    }
    Ok(())
}

#[derive(Debug, Serialize)]
struct BudgetRow {
    voltage: f64,
    dx: f64,
    dz: f64,
    da_over_a: f64,
    dz_term: f64,
    dx2_term: f64,
    recomputed_da_over_a: Option<f64>,
    recomputed_dz_term: Option<f64>,
    recomputed_dx2_term: Option<f64>,
    admissible_dz: f64,
    admissible_dv: Option<f64>,
}

const BUDGET_HEADER: [&str; 11] = [
    "voltage",
    "dx",
    "dz",
    "da_over_a",
    "dz_term",
    "dx2_term",
    "recomputed_da_over_a",
    "recomputed_dz_term",
    "recomputed_dx2_term",
    "admissible_dz",
    "admissible_dv",
];

const NULLING_HEADER: [&str; 7] = ["a", "c", "v", "bracket", "bracket_scale", "dz_term", "admissible_dz"];

#[derive(Debug, Serialize)]
struct BudgetDocument<'a> {
    gate: GateGeometry,
    target: f64,
    line_width_hz: f64,
    nulling_voltage: Option<f64>,
    recomputed_nulling_voltage: Option<f64>,
    rows: &'a [BudgetRow],
    nulling: Option<&'a [NullingTriple]>,
    warnings: &'a [String],
}

fn error_budget(cfg: &RunConfig, out: &Output) -> Result<(), CliError> {
    let gate = cfg.require_gate()?;
    let ctx = BudgetContext {
        mat: cfg.material,
        pc: cfg.constants,
        convention: cfg.convention,
    };
    let a0 = hyperfine_constant(&cfg.material, &cfg.constants).hertz;
    let mut warnings: Vec<String> = Vec::new();
    let mut rows = Vec::with_capacity(cfg.voltages.len());
    let mut nulling_v = (None, None);
    for &v in &cfg.voltages {
        let r = ctx.report(&gate, v, &cfg.placement, Some((cfg.line_width, a0)))?;
        for w in &r.warnings {
            if !warnings.contains(w) {
                warnings.push(w.clone());
            }
        }
        nulling_v = (r.nulling_v, r.recomputed_nulling_v);
        rows.push(BudgetRow {
            voltage: v,
            dx: r.dx,
            dz: r.dz,
            da_over_a: r.da_over_a,
            dz_term: r.dz_term,
            dx2_term: r.dx2_term,
            recomputed_da_over_a: r.recomputed.map(|t| t.da_over_a),
            recomputed_dz_term: r.recomputed.map(|t| t.dz_term),
            recomputed_dx2_term: r.recomputed.map(|t| t.dx2_term),
            admissible_dz: depth_tolerance(&gate, v, cfg.target)?,
            admissible_dv: r.admissible_dv,
        });
    }
    let nulling = match &cfg.nulling {
        Some(search) => {
            let found = find_nulling_parameters(search, &cfg.material, &cfg.constants)?;
            if found.is_empty() {
                warnings.push("nulling search: no (a, c, V) in the given ranges meets the target".into());
            }
            out.table("nulling.csv", &NULLING_HEADER, &found)?;
            Some(found)
        }
        None => None,
    };
    out.table("error_budget.csv", &BUDGET_HEADER, &rows)?;
    out.json(
        "error_budget.json",
        &BudgetDocument {
            gate,
            target: cfg.target,
            line_width_hz: cfg.line_width,
            nulling_voltage: nulling_v.0,
            recomputed_nulling_voltage: nulling_v.1,
            rows: &rows,
            nulling: nulling.as_deref(),
            warnings: &warnings,
        },
    )?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    let fmt_v = |v: Option<f64>| v.map_or("none".to_string(), |v| format!("{v:.4} V"));
    println!(
        "δx² nulling voltage: {} (recomputed model {})",
        fmt_v(nulling_v.0),
        fmt_v(nulling_v.1)
    );
    for r in &rows {
        println!(
            "  V = {:7.4} V   δA/A = {:+.4e}   δz(target) = {:.3} nm   δV = {}",
            r.voltage,
            r.da_over_a,
            r.admissible_dz * 1e9,
            r.admissible_dv.map_or("-".into(), |d| format!("{d:.3e} V"))
        );
    }
    if let Some(found) = &nulling {
        println!("nulling search: {} parameter sets", found.len());
        if let Some(best) = found.first() {
            println!(
                "  best: a = {:.3} nm, c = {:.3} nm, V = {:.4} V",
                best.a * 1e9,
                best.c * 1e9,
                best.v
            );
        }
    }
    Ok(())
}

fn template(cfg: &RunConfig) -> SweepTemplate {
    SweepTemplate {
        alpha_a: cfg.spin.alpha_a,
        alpha_b: cfg.spin.alpha_b,
        mu: cfg.spin.mu,
    }
}

/// Sweep the configured grid, refining around each anticrossing if asked.
fn sweep(cfg: &RunConfig) -> Result<(SpectrumSweep, Vec<AnticrossingReport>), CliError> {
    let t = template(cfg);
    let first = sweep_spectrum(&t, &cfg.spin.beta_grid)?;
    let events = find_anticrossings(&first)?;
    if !cfg.spin.refine || events.is_empty() {
        return Ok((first, events));
    }
    let centres: Vec<f64> = events.iter().map(|e| e.beta_star).collect();
    let grid = refine_grid(&first.betas, &centres, REFINE_HALF_WIDTH, REFINE_FACTOR);
    let refined = sweep_spectrum(&t, &grid)?;
    let events = find_anticrossings(&refined)?;
    Ok((refined, events))
}

#[derive(Debug, Serialize)]
struct StrongFieldRow {
    beta: f64,
    closed_form: f64,
    numerical: f64,
}

const SPECTRUM_HEADER: [&str; 6] = ["beta", "level", "block", "eigenvalue", "dominant_state", "dominant_weight"];

fn strong_field_rows(cfg: &RunConfig, sweep: &SpectrumSweep) -> Result<Vec<StrongFieldRow>, CliError> {
    let t = template(cfg);
    let mut rows = Vec::new();
    for &beta in sweep.betas.iter().filter(|&&b| b >= 3.0) {
        rows.push(StrongFieldRow {
            beta,
            closed_form: strong_field_gap_reduced(beta, cfg.spin.alpha_a)?,
            numerical: numerical_strong_field_gap(&t.at(beta))?,
        });
    }
    Ok(rows)
}

fn spectrum(cfg: &RunConfig, out: &Output) -> Result<(), CliError> {
    let (sweep, events) = sweep(cfg)?;
    out.table("spectrum.csv", &SPECTRUM_HEADER, &sweep_rows(&sweep))?;
    out.json("spectrum.json", &sweep_document(&sweep))?;
    out.json_always("anticrossings.json", &events)?;
    println!(
        "{} levels over {} β points in [{}, {}] ({} refinements)",
        sweep.tracks.len(),
        sweep.betas.len(),
        sweep.betas.first().copied().unwrap_or(f64::NAN),
        sweep.betas.last().copied().unwrap_or(f64::NAN),
        sweep.refinements
    );
    if cfg.spin.alpha_a == cfg.spin.alpha_b {
        let rows = strong_field_rows(cfg, &sweep)?;
        out.table("strong_field_gap.csv", &["beta", "closed_form", "numerical"], &rows)?;
        if rows.is_empty() {
            eprintln!("warning: no β ≥ 3 in the grid, strong-field gap table is empty");
        }
    }
    print_events(&events);
    Ok(())
}

fn print_events(events: &[AnticrossingReport]) {
    println!("{} anticrossings", events.len());
    for e in events {
        println!(
            "  M+m = {:+}: |{}⟩ ↔ |{}⟩  β* = {:.4}  gap/J = {:.4e}  {}{}",
            e.block,
            e.pair.0,
            e.pair.1,
            e.beta_star,
            e.min_gap,
            match e.kind {
                crate::spin::EventKind::Anticrossing => "anticrossing",
                crate::spin::EventKind::Crossing => "crossing",
            },
            if e.lowest { " (lowest level)" } else { "" }
        );
    }
}

#[derive(Debug, Serialize)]
struct EventRow {
    block: i8,
    entry_state: usize,
    exit_state: usize,
    beta_half: f64,
    beta_star: f64,
    min_gap: f64,
    lowest: bool,
    crossing: bool,
}

#[derive(Debug, Serialize)]
struct AnticrossDocument<'a> {
    alpha_a: f64,
    alpha_b: f64,
    events: &'a [AnticrossingReport],
    traces: &'a [TransferTrace],
}

fn anticross(cfg: &RunConfig, out: &Output) -> Result<(), CliError> {
    let (sweep, events) = sweep(cfg)?;
    let traces: Vec<TransferTrace> = events
        .iter()
        .map(|e| adiabatic_transfer_trace(&sweep, e.pair.0))
        .collect();
    let rows: Vec<EventRow> = events
        .iter()
        .map(|e| EventRow {
            block: e.block,
            entry_state: e.pair.0,
            exit_state: e.pair.1,
            beta_half: e.beta_half,
            beta_star: e.beta_star,
            min_gap: e.min_gap,
            lowest: e.lowest,
            crossing: e.kind == crate::spin::EventKind::Crossing,
        })
        .collect();
    out.table(
        "anticrossings.csv",
        &["block", "entry_state", "exit_state", "beta_half", "beta_star", "min_gap", "lowest", "crossing"],
        &rows,
    )?;
    out.json(
        "anticrossings.json",
        &AnticrossDocument {
            alpha_a: cfg.spin.alpha_a,
            alpha_b: cfg.spin.alpha_b,
            events: &events,
            traces: &traces,
        },
    )?;
    print_events(&events);
    for t in &traces {
        println!(
            "  trace |{}⟩: exits as |{}⟩ (weight {:.2}), sector exchanged: {}, conclusive: {}",
            t.entry_label, t.exit.0, t.exit.1, t.exchanged, t.conclusive
        );
    }
    Ok(())
}

fn validate(out: &Output) -> Result<(), CliError> {
    let results: Vec<CriterionResult> = run_all();
    for r in &results {
        println!("{r}");
    }
    out.json_always("validation.json", &results)?;
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    match failed {
        0 => Ok(()),
        n => Err(CliError::Validation(n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn exit_codes() {
        let cfg = CliError::Config(ConfigError {
            field: "gate".into(),
            message: "x".into(),
        });
        assert_eq!(cfg.exit_code(), 2);
        assert_eq!(CliError::Spin(SpinError::NoConvergence { sweeps: 50 }).exit_code(), 3);
        assert_eq!(CliError::Validation(1).exit_code(), 1);
        assert_eq!(CliError::Budget(BudgetError::NotAStrip("disc")).exit_code(), 2);
    }

    #[test]
    fn parses_global_flags_after_subcommand() {
        let cli = Cli::try_parse_from(["donorqc", "hic", "--set", "gate.kind=disc", "--format", "json"]).unwrap();
        assert_eq!(cli.command, Command::Hic);
        assert_eq!(cli.overrides, vec!["gate.kind=disc"]);
        assert_eq!(cli.format.as_deref(), Some("json"));
    }
}
