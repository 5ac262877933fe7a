//! Run configuration: a JSON document whose dimensional values are strings
//! with explicit units ("10 nm", "0.5 V", "10 kHz"). Dimensionless values
//! (ε_r, α, β, targets) are plain numbers.
//!
//! ```json
//! {
//!   "gate": { "kind": "disc", "radius": "5 nm", "depth": "10 nm" },
//!   "voltages": { "start": "0 V", "stop": "1 V", "points": 11 },
//!   "spin": { "alpha_a": 0.3, "alpha_b": 0.4, "mu": "slaved" }
//! }
//! ```

use crate::constants::{MaterialParams, PhysicalConstants};
use crate::electrostatics::{Convention, GateGeometry};
use crate::error_budget::{BudgetMode, Interval, NullingSearch, PlacementError};
use crate::spin::sweep::{default_grid, linear_grid};
use crate::spin::MuMode;
use serde_json::{Map, Value};
use std::fmt;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    /// Dotted path of the offending field, empty for document-level errors.
    pub field: String,
    pub message: String,
}

impl ConfigError {
    fn at(field: &str, message: impl Into<String>) -> Self {
        Self {
            field: field.to_string(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.field, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dimension {
    Length,
    Voltage,
    Energy,
    Frequency,
    MagneticField,
    NumberDensity,
}

impl Dimension {
    fn example(self) -> &'static str {
        match self {
            Dimension::Length => "\"10 nm\"",
            Dimension::Voltage => "\"0.5 V\"",
            Dimension::Energy => "\"0.04 eV\"",
            Dimension::Frequency => "\"10 kHz\"",
            Dimension::MagneticField => "\"1 T\"",
            Dimension::NumberDensity => "\"0.43e30 m^-3\"",
        }
    }
}

/// Parse "<number> <unit>" into SI. Only whitelisted units are accepted.
pub fn parse_quantity(text: &str, dim: Dimension, pc: &PhysicalConstants) -> Result<f64, String> {
    let text = text.trim();
    let split = text
        .find(|c: char| c.is_whitespace() || (c.is_alphabetic() && c != 'e' && c != 'E') || c == 'Å')
        .ok_or_else(|| format!("missing unit in {text:?}, expected e.g. {}", dim.example()))?;
    // "10eV": the exponent scan above swallowed the unit's leading 'e'
    let split = if text[..split].ends_with(['e', 'E']) && text[..split].trim().parse::<f64>().is_err() {
        split - 1
    } else {
        split
    };
    let (num, unit) = text.split_at(split);
    let value: f64 = num
        .trim()
        .parse()
        .map_err(|_| format!("cannot parse number {:?} in {text:?}", num.trim()))?;
    let unit = unit.trim();
    let scale = match (dim, unit) {
        (Dimension::Length, "m") => 1.0,
        (Dimension::Length, "nm") => 1e-9,
        (Dimension::Length, "Å") => 1e-10,
        (Dimension::Voltage, "V") => 1.0,
        (Dimension::Voltage, "mV") => 1e-3,
        (Dimension::Energy, "J") => 1.0,
        (Dimension::Energy, "eV") => pc.e,
        (Dimension::Energy, "meV") => 1e-3 * pc.e,
        (Dimension::Frequency, "Hz") => 1.0,
        (Dimension::Frequency, "kHz") => 1e3,
        (Dimension::Frequency, "MHz") => 1e6,
        (Dimension::Frequency, "GHz") => 1e9,
        (Dimension::MagneticField, "T") => 1.0,
        (Dimension::NumberDensity, "m^-3") => 1.0,
        (Dimension::NumberDensity, "cm^-3") => 1e6,
        _ => {
            return Err(format!(
                "unit {unit:?} is not accepted here, expected e.g. {}",
                dim.example()
            ))
        }
    };
    if !value.is_finite() {
        return Err(format!("non-finite value in {text:?}"));
    }
    Ok(value * scale)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Both,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "csv" => Some(Self::Csv),
            "json" => Some(Self::Json),
            "both" => Some(Self::Both),
            _ => None,
        }
    }

    pub fn csv(self) -> bool {
        matches!(self, Self::Csv | Self::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, Self::Json | Self::Both)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinConfig {
    pub alpha_a: f64,
    pub alpha_b: f64,
    pub mu: MuMode,
    pub beta_grid: Vec<f64>,
    /// Re-sweep with a ×10 denser grid within ±0.05 of each detected β*.
    pub refine: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub material: MaterialParams,
    pub constants: PhysicalConstants,
    pub convention: Convention,
    pub gate: Option<GateGeometry>,
    pub voltages: Vec<f64>,
    pub placement: PlacementError,
    /// Hz.
    pub line_width: f64,
    /// Relative error budget used for the depth tolerance column.
    pub target: f64,
    pub nulling: Option<NullingSearch>,
    pub spin: SpinConfig,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        let pc = PhysicalConstants::default();
        Self {
            material: MaterialParams::default(),
            constants: pc,
            convention: Convention::Published,
            gate: None,
            voltages: linear_grid(0.0, 1.0, 11),
            placement: PlacementError::default(),
            line_width: 1e4,
            target: 0.01,
            nulling: None,
            spin: SpinConfig {
                alpha_a: 0.3,
                alpha_b: 0.4,
                mu: MuMode::physical(&pc),
                beta_grid: default_grid(),
                refine: true,
            },
            out_dir: PathBuf::from("out"),
            format: OutputFormat::Both,
        }
    }
}

impl RunConfig {
    /// Load `path` (if any), apply `key=value` overrides and parse.
    pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Self, ConfigError> {
        let mut doc = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| ConfigError::at("", format!("cannot read {}: {e}", p.display())))?;
                serde_json::from_str(&text).map_err(|e| {
                    ConfigError::at(
                        "",
                        format!("{}: line {}, column {}: {e}", p.display(), e.line(), e.column()),
                    )
                })?
            }
            None => Value::Object(Map::new()),
        };
        for o in overrides {
            apply_override(&mut doc, o)?;
        }
        Self::from_value(&doc)
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let doc: Value = serde_json::from_str(text).map_err(|e| {
            ConfigError::at("", format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        Self::from_value(&doc)
    }

    pub fn from_value(doc: &Value) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        let root = Node::root(doc)?;
        root.allow(&[
            "material",
            "convention",
            "gate",
            "voltages",
            "placement",
            "line_width",
            "target",
            "nulling",
            "spin",
            "output",
        ])?;
        let pc = cfg.constants;

        if let Some(m) = root.get("material") {
            m.allow(&["a_star", "eps_r", "psi0_sq", "delta_e", "delta_e_residual", "m_star_ratio"])?;
            let mat = &mut cfg.material;
            if let Some(v) = m.get("a_star") {
                mat.a_star = v.positive_quantity(Dimension::Length, &pc)?;
            }
            if let Some(v) = m.get("eps_r") {
                mat.eps_r = v.positive_number()?;
            }
            if let Some(v) = m.get("psi0_sq") {
                mat.psi0_sq = v.positive_quantity(Dimension::NumberDensity, &pc)?;
            }
            if let Some(v) = m.get("delta_e") {
                mat.delta_e_mean = v.positive_quantity(Dimension::Energy, &pc)?;
            }
            if let Some(v) = m.get("delta_e_residual") {
                mat.delta_e_residual = Some(v.quantity(Dimension::Energy, &pc)?);
            }
            if let Some(v) = m.get("m_star_ratio") {
                mat.m_star_ratio = v.positive_number()?;
            }
        }

        if let Some(c) = root.get("convention") {
            cfg.convention = match c.string()? {
                "published" => Convention::Published,
                "harmonic" => Convention::Harmonic,
                other => return Err(c.err(format!("unknown convention {other:?} (published|harmonic)"))),
            };
        }

        if let Some(g) = root.get("gate") {
            cfg.gate = Some(parse_gate(&g, &pc)?);
        }

        if let Some(v) = root.get("voltages") {
            cfg.voltages = v.grid(Some((Dimension::Voltage, &pc)))?;
            if cfg.voltages.iter().any(|&x| x < 0.0) {
                return Err(v.err("gate voltages must be non-negative"));
            }
        }

        if let Some(p) = root.get("placement") {
            p.allow(&["dx", "dz"])?;
            if let Some(v) = p.get("dx") {
                cfg.placement.dx = v.quantity(Dimension::Length, &pc)?;
            }
            if let Some(v) = p.get("dz") {
                cfg.placement.dz = v.quantity(Dimension::Length, &pc)?;
            }
        }

        if let Some(v) = root.get("line_width") {
            cfg.line_width = v.quantity(Dimension::Frequency, &pc)?;
            if cfg.line_width < 0.0 {
                return Err(v.err("line width must be non-negative"));
            }
        }
        if let Some(v) = root.get("target") {
            cfg.target = v.positive_number()?;
        }

        if let Some(n) = root.get("nulling") {
            cfg.nulling = Some(parse_nulling(&n, cfg.target, &pc)?);
        }

        if let Some(s) = root.get("spin") {
            s.allow(&["alpha_a", "alpha_b", "mu", "beta", "refine"])?;
            let spin = &mut cfg.spin;
            if let Some(v) = s.get("alpha_a") {
                spin.alpha_a = v.number()?;
            }
            if let Some(v) = s.get("alpha_b") {
                spin.alpha_b = v.number()?;
            }
            if let Some(v) = s.get("mu") {
                spin.mu = match v.v {
                    Value::String(s) if s == "slaved" => MuMode::physical(&pc),
                    Value::Number(_) => MuMode::Fixed { mu: v.number()? },
                    _ => return Err(v.err("expected \"slaved\" or a number")),
                };
            }
            if let Some(v) = s.get("beta") {
                spin.beta_grid = v.grid(None)?;
                if spin.beta_grid.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(v.err("β grid must be strictly ascending"));
                }
            }
            if let Some(v) = s.get("refine") {
                spin.refine = v.boolean()?;
            }
        }

        if let Some(o) = root.get("output") {
            o.allow(&["dir", "format"])?;
            if let Some(v) = o.get("dir") {
                cfg.out_dir = PathBuf::from(v.string()?);
            }
            if let Some(v) = o.get("format") {
                cfg.format = OutputFormat::parse(v.string()?)
                    .ok_or_else(|| v.err("expected csv, json or both"))?;
            }
        }
        Ok(cfg)
    }

    /// The configured gate, or the "gate.kind required" error.
    pub fn require_gate(&self) -> Result<GateGeometry, ConfigError> {
        self.gate
            .ok_or_else(|| ConfigError::at("gate", "gate.kind required (disc or strip)"))
    }
}

fn parse_gate(g: &Node, pc: &PhysicalConstants) -> Result<GateGeometry, ConfigError> {
    let kind = g
        .get("kind")
        .ok_or_else(|| g.err("gate.kind required (disc or strip)"))?;
    let length = |key: &str| -> Result<f64, ConfigError> {
        g.get(key)
            .ok_or_else(|| ConfigError::at(&g.child_path(key), "required"))?
            .quantity(Dimension::Length, pc)
    };
    let gate = match kind.string()? {
        "disc" => {
            g.allow(&["kind", "radius", "depth"])?;
            GateGeometry::Disc {
                radius: length("radius")?,
                depth: length("depth")?,
            }
        }
        "strip" => {
            g.allow(&["kind", "half_width", "depth", "substrate_distance"])?;
            GateGeometry::Strip {
                half_width: length("half_width")?,
                depth: length("depth")?,
                substrate_distance: length("substrate_distance")?,
            }
        }
        other => return Err(kind.err(format!("unknown gate kind {other:?} (disc or strip)"))),
    };
    gate.validate().map_err(|e| g.err(e.to_string()))?;
    Ok(gate)
}

fn parse_nulling(n: &Node, target: f64, pc: &PhysicalConstants) -> Result<NullingSearch, ConfigError> {
    n.allow(&["target", "dz", "a", "c", "v", "points", "substrate_ratio", "mode"])?;
    let range = |key: &str, dim: Dimension| -> Result<Interval, ConfigError> {
        let node = n
            .get(key)
            .ok_or_else(|| ConfigError::at(&n.child_path(key), "required [lo, hi] range"))?;
        let items = node.array()?;
        if items.len() != 2 {
            return Err(node.err("expected a two-element [lo, hi] range"));
        }
        Ok(Interval::new(
            items[0].quantity(dim, pc)?,
            items[1].quantity(dim, pc)?,
        ))
    };
    let mut search = NullingSearch::new(
        target,
        2e-9,
        range("a", Dimension::Length)?,
        range("c", Dimension::Length)?,
        range("v", Dimension::Voltage)?,
    );
    if let Some(v) = n.get("target") {
        search.target = v.positive_number()?;
    }
    if let Some(v) = n.get("dz") {
        search.dz = v.quantity(Dimension::Length, pc)?;
    }
    if let Some(v) = n.get("points") {
        search.points = v.count()?;
    }
    if let Some(v) = n.get("substrate_ratio") {
        search.substrate_ratio = v.positive_number()?;
    }
    if let Some(v) = n.get("mode") {
        search.mode = match v.string()? {
            "published" => BudgetMode::Published,
            "recomputed" => BudgetMode::Recomputed(Convention::Published),
            "recomputed-harmonic" => BudgetMode::Recomputed(Convention::Harmonic),
            other => {
                return Err(v.err(format!(
                    "unknown mode {other:?} (published|recomputed|recomputed-harmonic)"
                )))
            }
        };
    }
    Ok(search)
}

/// Apply `a.b.c=value`; the value is read as JSON when it parses, else as a string.
pub fn apply_override(doc: &mut Value, spec: &str) -> Result<(), ConfigError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| ConfigError::at("", format!("--set expects key=value, got {spec:?}")))?;
    let key = key.trim();
    if key.is_empty() || key.split('.').any(str::is_empty) {
        return Err(ConfigError::at("", format!("invalid --set key {key:?}")));
    }
    let value = serde_json::from_str(raw).unwrap_or_else(|_| Value::String(raw.to_string()));
    let mut cur = doc;
    let parts: Vec<&str> = key.split('.').collect();
    for (i, part) in parts.iter().enumerate() {
        if !cur.is_object() {
            return Err(ConfigError::at(&parts[..i].join("."), "is not an object"));
        }
        let obj = cur.as_object_mut().expect("checked");
        if i + 1 == parts.len() {
            obj.insert(part.to_string(), value);
            return Ok(());
        }
        cur = obj
            .entry(part.to_string())
            .or_insert_with(|| Value::Object(Map::new()));
    }
    Ok(())
}

struct Node<'a> {
    v: &'a Value,
    path: String,
}

impl<'a> Node<'a> {
    fn root(v: &'a Value) -> Result<Self, ConfigError> {
        if !v.is_object() {
            return Err(ConfigError::at("", "config must be a JSON object"));
        }
        Ok(Self {
            v,
            path: String::new(),
        })
    }

    fn child_path(&self, key: &str) -> String {
        if self.path.is_empty() {
            key.to_string()
        } else {
            format!("{}.{key}", self.path)
        }
    }

    fn err(&self, msg: impl Into<String>) -> ConfigError {
        ConfigError::at(&self.path, msg)
    }

    fn get(&self, key: &str) -> Option<Node<'a>> {
        self.v.get(key).map(|v| Node {
            v,
            path: self.child_path(key),
        })
    }

    fn allow(&self, keys: &[&str]) -> Result<(), ConfigError> {
        let obj = self
            .v
            .as_object()
            .ok_or_else(|| self.err("expected an object"))?;
        for k in obj.keys() {
            if !keys.contains(&k.as_str()) {
                return Err(ConfigError::at(&self.child_path(k), "unknown key"));
            }
        }
        Ok(())
    }

    fn string(&self) -> Result<&'a str, ConfigError> {
        self.v.as_str().ok_or_else(|| self.err("expected a string"))
    }

    fn number(&self) -> Result<f64, ConfigError> {
        match self.v {
            Value::Number(n) => n.as_f64().ok_or_else(|| self.err("number out of range")),
            Value::String(s) => Err(self.err(format!("expected a dimensionless number, got {s:?}"))),
            _ => Err(self.err("expected a number")),
        }
    }

    fn positive_number(&self) -> Result<f64, ConfigError> {
        let x = self.number()?;
        if x > 0.0 {
            Ok(x)
        } else {
            Err(self.err("must be positive"))
        }
    }

    fn count(&self) -> Result<usize, ConfigError> {
        self.v
            .as_u64()
            .filter(|&n| n >= 1)
            .map(|n| n as usize)
            .ok_or_else(|| self.err("expected a positive integer"))
    }

    fn boolean(&self) -> Result<bool, ConfigError> {
        self.v.as_bool().ok_or_else(|| self.err("expected true or false"))
    }

    fn array(&self) -> Result<Vec<Node<'a>>, ConfigError> {
        let items = self.v.as_array().ok_or_else(|| self.err("expected an array"))?;
        Ok(items
            .iter()
            .enumerate()
            .map(|(i, v)| Node {
                v,
                path: format!("{}[{i}]", self.path),
            })
            .collect())
    }

    fn quantity(&self, dim: Dimension, pc: &PhysicalConstants) -> Result<f64, ConfigError> {
        match self.v {
            Value::String(s) => parse_quantity(s, dim, pc).map_err(|m| self.err(m)),
            Value::Number(_) => Err(self.err(format!(
                "bare number is ambiguous, give a unit, e.g. {}",
                dim.example()
            ))),
            _ => Err(self.err(format!("expected a quantity like {}", dim.example()))),
        }
    }

    fn positive_quantity(&self, dim: Dimension, pc: &PhysicalConstants) -> Result<f64, ConfigError> {
        let x = self.quantity(dim, pc)?;
        if x > 0.0 {
            Ok(x)
        } else {
            Err(self.err("must be positive"))
        }
    }

    /// Either an explicit list or {start, stop, points}. `unit` = None means
    /// dimensionless.
    fn grid(&self, unit: Option<(Dimension, &PhysicalConstants)>) -> Result<Vec<f64>, ConfigError> {
        let scalar = |n: &Node| match unit {
            Some((d, pc)) => n.quantity(d, pc),
            None => n.number(),
        };
        match self.v {
            Value::Array(_) => {
                let out: Vec<f64> = self.array()?.iter().map(scalar).collect::<Result<_, _>>()?;
                if out.is_empty() {
                    return Err(self.err("grid is empty"));
                }
                Ok(out)
            }
            Value::Object(_) => {
                self.allow(&["start", "stop", "points"])?;
                let field = |k: &str| {
                    self.get(k)
                        .ok_or_else(|| ConfigError::at(&self.child_path(k), "required"))
                };
                let start = scalar(&field("start")?)?;
                let stop = scalar(&field("stop")?)?;
                let points = field("points")?.count()?;
                if stop < start {
                    return Err(self.err("stop must not be below start"));
                }
                Ok(linear_grid(start, stop, points))
            }
            _ => Err(self.err("expected a list or {start, stop, points}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const PC: PhysicalConstants = PhysicalConstants {
        mu_b: 9.27e-24,
        mu_n: 5.05e-27,
        g_n: 2.26,
        e: 1.6e-19,
        eps0: 8.85e-12,
        mu0: 4.0 * std::f64::consts::PI * 1e-7,
        h: 6.62e-34,
        m_e: 9.1e-31,
    };

    #[test]
    fn quantities() {
        assert_eq!(parse_quantity("10 nm", Dimension::Length, &PC).unwrap(), 10.0 * 1e-9);
        assert_eq!(parse_quantity("20Å", Dimension::Length, &PC).unwrap(), 20.0 * 1e-10);
        assert_eq!(parse_quantity("0.5 V", Dimension::Voltage, &PC).unwrap(), 0.5);
        assert_eq!(parse_quantity("250 mV", Dimension::Voltage, &PC).unwrap(), 0.25);
        assert_eq!(parse_quantity("1e4 Hz", Dimension::Frequency, &PC).unwrap(), 1e4);
        assert_eq!(parse_quantity("10 kHz", Dimension::Frequency, &PC).unwrap(), 1e4);
        assert!((parse_quantity("0.04 eV", Dimension::Energy, &PC).unwrap() - 6.4e-21).abs() < 1e-35);
        assert!((parse_quantity("0.43e24 cm^-3", Dimension::NumberDensity, &PC).unwrap() / 0.43e30 - 1.0).abs() < 1e-15);
        assert!((parse_quantity("40meV", Dimension::Energy, &PC).unwrap() - 6.4e-21).abs() < 1e-35);
        assert!((parse_quantity("1e-2eV", Dimension::Energy, &PC).unwrap() - 1.6e-21).abs() < 1e-35);
        assert!(parse_quantity("10", Dimension::Length, &PC).is_err());
        assert!(parse_quantity("10 V", Dimension::Length, &PC).is_err());
        assert!(parse_quantity("10 inch", Dimension::Length, &PC).is_err());
        assert!(parse_quantity("x nm", Dimension::Length, &PC).is_err());
    }

    #[test]
    fn full_document() {
        let cfg = RunConfig::from_json(
            r#"{
                "material": { "a_star": "2 nm", "delta_e": "40 meV" },
                "gate": { "kind": "strip", "half_width": "5 nm", "depth": "10 nm", "substrate_distance": "500 nm" },
                "voltages": ["0 V", "0.5 V", "1 V"],
                "placement": { "dx": "1 nm", "dz": "0.5 nm" },
                "line_width": "10 kHz",
                "nulling": { "a": ["4 nm", "6 nm"], "c": ["9 nm", "11 nm"], "v": ["0.1 V", "1 V"], "points": 5 },
                "spin": { "alpha_a": 0.3, "alpha_b": 0.4, "mu": 0, "beta": { "start": 0.5, "stop": 2, "points": 4 } },
                "output": { "dir": "results", "format": "csv" }
            }"#,
        )
        .unwrap();
        assert_eq!(cfg.voltages, vec![0.0, 0.5, 1.0]);
        assert!(matches!(cfg.gate, Some(GateGeometry::Strip { .. })));
        assert_eq!(cfg.spin.beta_grid, vec![0.5, 1.0, 1.5, 2.0]);
        assert_eq!(cfg.spin.mu, MuMode::Fixed { mu: 0.0 });
        assert_eq!(cfg.nulling.unwrap().points, 5);
        assert_eq!(cfg.format, OutputFormat::Csv);
        assert_eq!(cfg.line_width, 1e4);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let e = RunConfig::from_json(r#"{"gate": {"kind": "disc", "radius": 5, "depth": "10 nm"}}"#).unwrap_err();
        assert_eq!(e.field, "gate.radius");
        assert!(e.message.contains("unit"));
        let e = RunConfig::from_json(r#"{"gate": {"radius": "5 nm"}}"#).unwrap_err();
        assert!(e.to_string().contains("gate.kind required"));
        let e = RunConfig::from_json(r#"{"gaet": {}}"#).unwrap_err();
        assert_eq!(e.field, "gaet");
        let e = RunConfig::from_json("{\n  \"gate\": \n}").unwrap_err();
        assert!(e.message.contains("line 3"), "{e}");
        let e = RunConfig::from_json(r#"{"spin": {"alpha_a": "0.3"}}"#).unwrap_err();
        assert_eq!(e.field, "spin.alpha_a");
        assert!(RunConfig::default().require_gate().unwrap_err().to_string().contains("gate.kind required"));
    }

    #[test]
    fn overrides() {
        let mut doc = serde_json::json!({"gate": {"kind": "disc", "radius": "5 nm", "depth": "10 nm"}});
        apply_override(&mut doc, "gate.radius=6 nm").unwrap();
        apply_override(&mut doc, "spin.alpha_a=0.25").unwrap();
        apply_override(&mut doc, "spin.refine=false").unwrap();
        let cfg = RunConfig::from_value(&doc).unwrap();
        assert!((cfg.gate.unwrap().half_width() - 6e-9).abs() < 1e-24);
        assert_eq!(cfg.spin.alpha_a, 0.25);
        assert!(!cfg.spin.refine);
        assert!(apply_override(&mut doc, "novalue").is_err());
        assert!(apply_override(&mut doc, "gate.radius.x=1").is_err());
    }
}
