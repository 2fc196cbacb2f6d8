//! One-parameter sweeps of the closed-form cost across architectures, and
//! their CSV/JSON tables.

use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{Config, ModelInputs};
use crate::cost::{total_cost, Architecture, CostBreakdown, CostGroups};
use crate::error::{Error, Result};
use crate::exec::map_indexed;
use crate::quadrature::QuadratureSettings;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Lambda3,
    Alpha,
    Lambda0,
    P,
    Sigma2,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 5] = [Self::Lambda3, Self::Alpha, Self::Lambda0, Self::P, Self::Sigma2];

    pub fn name(self) -> &'static str {
        match self {
            Self::Lambda3 => "lambda3",
            Self::Alpha => "alpha",
            Self::Lambda0 => "lambda0",
            Self::P => "p",
            Self::Sigma2 => "sigma2",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.name() == name)
    }

    /// Standard grid for the axis.
    pub fn default_values(self) -> Vec<f64> {
        match self {
            Self::Lambda3 => (1..=12).map(|i| 0.5 * i as f64).collect(),
            Self::Alpha => vec![0.0, 0.25, 0.5, 0.75, 1.0],
            Self::Lambda0 => vec![100.0, 170.0, 300.0],
            Self::P => vec![0.0, 0.25, 0.5, 0.75, 1.0],
            Self::Sigma2 => vec![0.1, 0.25, 0.5, 1.0, 2.0],
        }
    }

    fn apply(self, inputs: &mut ModelInputs, value: f64) {
        match self {
            Self::Lambda3 => inputs.lambda3 = value,
            Self::Alpha => inputs.equipment.alpha = value,
            Self::Lambda0 => inputs.lambda0 = value,
            Self::P => inputs.p = value,
            Self::Sigma2 => inputs.sigma2 = value,
        }
    }
}

/// An architecture at a link-adaptation offset, written `DRAN` or `CloudRAN@0.4`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Variant {
    pub architecture: Architecture,
    pub gamma_offset_db: f64,
}

impl Variant {
    pub const DRAN: Variant = Variant {
        architecture: Architecture::Dran,
        gamma_offset_db: 0.0,
    };

    pub fn cloud(gamma_offset_db: f64) -> Self {
        Self {
            architecture: Architecture::CloudRan,
            gamma_offset_db,
        }
    }

    pub fn all() -> Vec<Variant> {
        vec![Self::DRAN, Self::cloud(0.0), Self::cloud(0.4), Self::cloud(0.9)]
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.architecture, self.gamma_offset_db) {
            (Architecture::Dran, 0.0) => f.write_str("DRAN"),
            (a, o) => write!(f, "{}@{}", a.label(), o),
        }
    }
}

impl TryFrom<String> for Variant {
    type Error = String;

    fn try_from(s: String) -> std::result::Result<Self, String> {
        let (arch, offset) = match s.split_once('@') {
            Some((a, o)) => (a, o.parse::<f64>().map_err(|_| format!("bad offset in `{s}`"))?),
            None => (s.as_str(), 0.0),
        };
        let architecture = match arch {
            "DRAN" => Architecture::Dran,
            "CloudRAN" => Architecture::CloudRan,
            _ => return Err(format!("unknown architecture `{arch}` (expected DRAN or CloudRAN)")),
        };
        if !offset.is_finite() {
            return Err(format!("bad offset in `{s}`"));
        }
        Ok(Self {
            architecture,
            gamma_offset_db: offset,
        })
    }
}

impl From<Variant> for String {
    fn from(v: Variant) -> String {
        v.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    #[serde(default = "Variant::all")]
    pub architectures: Vec<Variant>,
}

impl SweepSpec {
    pub fn new(axis: SweepAxis, values: Vec<f64>, architectures: Vec<Variant>) -> Result<Self> {
        let spec = Self {
            axis,
            values,
            architectures,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// The axis's default grid across all four variants.
    pub fn standard(axis: SweepAxis) -> Self {
        Self {
            axis,
            values: axis.default_values(),
            architectures: Variant::all(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::config("sweep.values", "needs at least one value"));
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(Error::config("sweep.values", "values must be finite"));
        }
        if self.values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::config("sweep.values", "values must be sorted in increasing order"));
        }
        if self.architectures.is_empty() {
            return Err(Error::config("sweep.architectures", "needs at least one architecture"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub architecture: Architecture,
    pub gamma_offset_db: f64,
    pub total_per_km2: Option<f64>,
    pub groups: Option<CostGroups>,
    /// Per data center.
    pub breakdown: Option<CostBreakdown>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepMetadata {
    pub tool: String,
    pub version: String,
    /// SHA-256 of the fully resolved scenario file.
    pub scenario_hash: String,
    pub seed: u64,
    pub axis: SweepAxis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub metadata: SweepMetadata,
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// Row for `value` under `variant`, if it evaluated.
    pub fn total(&self, variant: Variant, value: f64) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.value == value && r.architecture == variant.architecture && r.gamma_offset_db == variant.gamma_offset_db)
            .and_then(|r| r.total_per_km2)
    }

    /// Totals along the axis for one variant, `None` where a row failed.
    pub fn curve(&self, variant: Variant) -> Vec<(f64, Option<f64>)> {
        self.rows
            .iter()
            .filter(|r| r.architecture == variant.architecture && r.gamma_offset_db == variant.gamma_offset_db)
            .map(|r| (r.value, r.total_per_km2))
            .collect()
    }
}

pub fn scenario_hash(config: &Config) -> Result<String> {
    Ok(hex::encode(Sha256::digest(config.to_toml()?.as_bytes())))
}

/// Evaluates the closed form at every (value, variant) pair, value-major.
/// A failing row carries its error and the sweep goes on.
pub fn run_sweep(spec: &SweepSpec, config: &Config, quad: &QuadratureSettings) -> Result<SweepResult> {
    spec.validate()?;
    quad.validate()?;
    // Warm the pooling-ratio cache before fanning out.
    for v in &spec.architectures {
        let mut inputs = config.inputs;
        inputs.architecture = v.architecture;
        if inputs.needs_pooling_ratio() {
            config.pooling_ratio(v.gamma_offset_db)?;
        }
    }
    let n_arch = spec.architectures.len();
    let rows = map_indexed(config.execution, spec.values.len() * n_arch, |i| {
        let value = spec.values[i / n_arch];
        let variant = spec.architectures[i % n_arch];
        let mut inputs = config.inputs;
        inputs.architecture = variant.architecture;
        inputs.gamma_offset_db = variant.gamma_offset_db;
        spec.axis.apply(&mut inputs, value);
        let outcome = config.scenario_for(&inputs).and_then(|s| Ok((s, total_cost(&s, quad)?)));
        let mut row = SweepRow {
            axis: spec.axis,
            value,
            architecture: variant.architecture,
            gamma_offset_db: variant.gamma_offset_db,
            total_per_km2: None,
            groups: None,
            breakdown: None,
            error: None,
        };
        match outcome {
            Ok((s, b)) => {
                row.total_per_km2 = Some(b.total_per_km2);
                row.groups = Some(b.groups(s.lambda3));
                row.breakdown = Some(b);
            }
            Err(e) => row.error = Some(format!("{}: {e}", e.category())),
        }
        row
    });
    Ok(SweepResult {
        metadata: SweepMetadata {
            tool: "cran-cost".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            scenario_hash: scenario_hash(config)?,
            seed: config.seed,
            axis: spec.axis,
        },
        rows,
    })
}

/// Rounds to 6 significant digits.
pub fn round_sig6(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.5e}").parse().unwrap_or(x)
}

fn fmt6(x: Option<f64>) -> String {
    x.map(|v| round_sig6(v).to_string()).unwrap_or_default()
}

pub const CSV_HEADER: &str = "axis,value,architecture,gamma_offset_db,total_per_km2,equipment,capacity,infrastructure,processing";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl SweepResult {
    /// Failed rows leave their numeric fields empty.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "{CSV_HEADER}")?;
        for r in &self.rows {
            let g = r.groups;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.axis.name(),
                round_sig6(r.value),
                r.architecture.label(),
                round_sig6(r.gamma_offset_db),
                fmt6(r.total_per_km2),
                fmt6(g.map(|g| g.equipment)),
                fmt6(g.map(|g| g.capacity)),
                fmt6(g.map(|g| g.infrastructure)),
                fmt6(g.map(|g| g.processing)),
            )?;
        }
        Ok(())
    }

    /// Same rows as the CSV, plus the metadata block and row errors.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|r| {
                let g = r.groups;
                serde_json::json!({
                    "axis": r.axis.name(),
                    "value": round_sig6(r.value),
                    "architecture": r.architecture.label(),
                    "gamma_offset_db": round_sig6(r.gamma_offset_db),
                    "total_per_km2": r.total_per_km2.map(round_sig6),
                    "equipment": g.map(|g| round_sig6(g.equipment)),
                    "capacity": g.map(|g| round_sig6(g.capacity)),
                    "infrastructure": g.map(|g| round_sig6(g.infrastructure)),
                    "processing": g.map(|g| round_sig6(g.processing)),
                    "error": r.error,
                })
            })
            .collect();
        serde_json::json!({ "metadata": self.metadata, "rows": rows })
    }

    pub fn write<W: Write>(&self, format: Format, mut out: W) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out)?,
            Format::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json()).map_err(std::io::Error::from)?;
                writeln!(out)?;
            }
        }
        Ok(())
    }

    pub fn emit(&self, format: Format, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        let mut out = std::io::BufWriter::new(file);
        self.write(format, &mut out)?;
        out.flush()?;
        Ok(())
    }
}
