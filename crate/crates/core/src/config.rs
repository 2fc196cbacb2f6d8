//! TOML scenario files. Anything left out takes the `paper-default` value;
//! derived quantities (λ1, λ1c, the per-user processing price) are filled in
//! at resolution unless given explicitly.

use std::path::Path;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::cost::{Architecture, EquipmentCosts, LinkCostParams, ModelOptions, PairCost, Scenario, TechCosts};
use crate::decoder::{processing_cost_rate, processing_preset, ComplexityProfile, PROCESSING_PRESETS};
use crate::dimensioning::{bs_intensity_for_offset, RadioParams};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::Window;
use crate::sim::{Normalization, SimSettings, UserLink};
use crate::sweep::SweepSpec;

pub const PAPER_DEFAULT: &str = "paper-default";
pub const DEFAULT_SEED: u64 = 1;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GeometrySection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda0: Option<f64>,
    /// Overrides the dimensioned base-station intensity.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda1: Option<f64>,
    /// Overrides `λ1/(1+λ1m)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda1c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda1m: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda2_mw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda2_of: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda3: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma2: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CostsSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub architecture: Option<Architecture>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma_offset_db: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_macro: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_micro: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_mw: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_of: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_dc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Per-user processing price `A''`; derived from the processing presets when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub processing: Option<f64>,
    /// Stand-alone to pooled workload ratio used for DRAN processing.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pooling_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub user_bs: Option<PairCost>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bs_backhaul: Option<TechCosts>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backhaul_dc: Option<TechCosts>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RadioSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_tx_dbm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub noise_dbm: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_subcarriers: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bandwidth_hz: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub control_overhead: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimulationSection {
    pub window_km: f64,
    pub torus: bool,
    pub reps: usize,
    pub user_link: UserLink,
    pub normalization: Normalization,
}

impl Default for SimulationSection {
    fn default() -> Self {
        Self {
            window_km: 10.0,
            torus: true,
            reps: 2000,
            user_link: UserLink::default(),
            normalization: Normalization::default(),
        }
    }
}

impl SimulationSection {
    pub fn settings(&self, seed: u64, execution: Execution) -> Result<SimSettings> {
        let window = Window::new(self.window_km, self.window_km, self.torus)
            .map_err(|e| Error::config("simulation.window_km", e.to_string()))?;
        Ok(SimSettings {
            execution,
            normalization: self.normalization,
            user_link: self.user_link,
            ..SimSettings::new(window, self.reps, seed)
        })
    }
}

/// On-disk layout of a scenario file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ConfigFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub geometry: GeometrySection,
    pub costs: CostsSection,
    pub radio: RadioSection,
    pub model: ModelOptions,
    pub complexity: ComplexityProfile,
    pub simulation: SimulationSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
}

/// Model inputs before λ1 and `A''` are derived.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelInputs {
    pub lambda0: f64,
    pub lambda1: Option<f64>,
    pub lambda1c: Option<f64>,
    pub lambda1m: f64,
    pub lambda2_mw: f64,
    pub lambda2_of: f64,
    pub lambda3: f64,
    pub p: f64,
    pub sigma2: f64,
    pub architecture: Architecture,
    pub gamma_offset_db: f64,
    pub equipment: EquipmentCosts,
    /// `processing` is ignored here; see [`ModelInputs::processing`].
    pub links: LinkCostParams,
    pub processing: Option<f64>,
    pub pooling_ratio: Option<f64>,
    pub radio: RadioParams,
    pub options: ModelOptions,
}

impl ModelInputs {
    pub fn reference() -> Self {
        Self {
            lambda0: 170.0,
            lambda1: None,
            lambda1c: None,
            lambda1m: 4.0,
            lambda2_mw: 20.0 / 3.0,
            lambda2_of: 10.0 / 3.0,
            lambda3: 3.0,
            p: 0.5,
            sigma2: 0.5,
            architecture: Architecture::CloudRan,
            gamma_offset_db: 0.0,
            equipment: EquipmentCosts::reference(),
            links: LinkCostParams::reference(0.0),
            processing: None,
            pooling_ratio: None,
            radio: RadioParams::lte_10mhz(),
            options: ModelOptions::default(),
        }
    }

    /// Base-station intensity: explicit, implied by an explicit `λ1c`, or
    /// dimensioned for `λ0` and the offset.
    pub fn bs_intensity(&self) -> Result<f64> {
        match (self.lambda1, self.lambda1c) {
            (Some(l), _) => Ok(l),
            (None, Some(c)) => Ok(c * (1.0 + self.lambda1m)),
            (None, None) => bs_intensity_for_offset(self.lambda0, self.gamma_offset_db, &self.radio)
                .map_err(|e| Error::config("costs.gamma_offset_db", e.to_string())),
        }
    }

    /// Whether resolving needs a pooling ratio from the decoder model.
    pub fn needs_pooling_ratio(&self) -> bool {
        self.architecture == Architecture::Dran && self.processing.is_none() && self.pooling_ratio.is_none()
    }

    /// Builds the scenario. `pooling` supplies the DRAN workload ratio at an
    /// offset when none is configured.
    pub fn scenario(&self, pooling: impl FnOnce(f64) -> Result<f64>) -> Result<Scenario> {
        if !(self.sigma2.is_finite() && self.sigma2 > 0.0) {
            return Err(Error::config("geometry.sigma2", "must be positive and finite"));
        }
        let lambda1 = self.bs_intensity()?;
        let lambda1c = self.lambda1c.unwrap_or(lambda1 / (1.0 + self.lambda1m));
        let processing = match self.processing {
            Some(a) => a,
            None => {
                let preset = processing_preset(self.gamma_offset_db).ok_or_else(|| {
                    let known: Vec<String> = PROCESSING_PRESETS.iter().map(|p| p.gamma_offset_db.to_string()).collect();
                    Error::config(
                        "costs.gamma_offset_db",
                        format!("no processing preset at {} dB (have {}); set costs.processing", self.gamma_offset_db, known.join(", ")),
                    )
                })?;
                let (slope, intercept) = match self.architecture {
                    Architecture::CloudRan => (preset.slope, preset.intercept),
                    Architecture::Dran => {
                        let ratio = match self.pooling_ratio {
                            Some(r) => r,
                            None => pooling(self.gamma_offset_db)?,
                        };
                        (preset.slope * ratio, 0.0)
                    }
                };
                let server_cost = crate::decoder::FrameConstants::default().server_cost;
                processing_cost_rate(slope, intercept, lambda1, server_cost, self.lambda0).map_err(qualify)?
            }
        };
        let scenario = Scenario {
            lambda0: self.lambda0,
            lambda1c,
            lambda1m: self.lambda1m,
            lambda2_mw: self.lambda2_mw,
            lambda2_of: self.lambda2_of,
            lambda3: self.lambda3,
            p: self.p,
            sigma: self.sigma2.sqrt(),
            equipment: self.equipment,
            links: LinkCostParams {
                processing,
                ..self.links
            },
            architecture: self.architecture,
            gamma_offset_db: self.gamma_offset_db,
            options: self.options,
        };
        scenario.validate().map_err(qualify)?;
        Ok(scenario)
    }
}

/// Rewrites a parameter error into a config error at its file key.
fn qualify(e: Error) -> Error {
    let Error::Parameter { name, reason } = e else {
        return e;
    };
    let key = match name {
        "lambda0" | "lambda1" | "lambda1c" | "lambda1m" | "lambda2_mw" | "lambda2_of" | "lambda3" | "p" => {
            format!("geometry.{name}")
        }
        "sigma" => "geometry.sigma2".into(),
        n if n.starts_with("links.") => format!("costs.{}", &n["links.".len()..]),
        n => format!("costs.{n}"),
    };
    Error::config(key, reason)
}

/// A resolved scenario file.
#[derive(Debug, Clone)]
pub struct Config {
    pub inputs: ModelInputs,
    pub complexity: ComplexityProfile,
    pub simulation: SimulationSection,
    pub sweep: Option<SweepSpec>,
    pub seed: u64,
    pub execution: Execution,
    pooling_cache: Arc<Mutex<Vec<(f64, f64)>>>,
}

impl Default for Config {
    fn default() -> Self {
        Self::new(ModelInputs::reference())
    }
}

impl Config {
    pub fn new(inputs: ModelInputs) -> Self {
        Self {
            inputs,
            complexity: ComplexityProfile::default(),
            simulation: SimulationSection::default(),
            sweep: None,
            seed: DEFAULT_SEED,
            execution: Execution::default(),
            pooling_cache: Arc::default(),
        }
    }

    /// Stand-alone to pooled workload ratio at an offset, computed once per offset.
    pub fn pooling_ratio(&self, gamma_offset_db: f64) -> Result<f64> {
        let mut cache = self.pooling_cache.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(&(_, r)) = cache.iter().find(|(o, _)| *o == gamma_offset_db) {
            return Ok(r);
        }
        let r = self.complexity.pooling_ratio(gamma_offset_db, self.seed, self.execution)?;
        cache.push((gamma_offset_db, r));
        Ok(r)
    }

    pub fn scenario(&self) -> Result<Scenario> {
        self.scenario_for(&self.inputs)
    }

    /// Resolves other inputs against this file's decoder model and seed.
    pub fn scenario_for(&self, inputs: &ModelInputs) -> Result<Scenario> {
        inputs.scenario(|offset| self.pooling_ratio(offset))
    }

    pub fn sim_settings(&self) -> Result<SimSettings> {
        self.simulation.settings(self.seed, self.execution)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let file: ConfigFile = toml::from_str(text).map_err(|e| parse_error(text, &e))?;
        Self::from_file(file)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn from_file(file: ConfigFile) -> Result<Self> {
        match file.preset.as_deref() {
            None | Some(PAPER_DEFAULT) => {}
            Some(other) => {
                return Err(Error::config("preset", format!("unknown preset `{other}` (known: {PAPER_DEFAULT})")));
            }
        }
        let d = ModelInputs::reference();
        let g = &file.geometry;
        let c = &file.costs;
        let radio = resolve_radio(&file.radio)?;
        let eq = d.equipment;
        let inputs = ModelInputs {
            lambda0: g.lambda0.unwrap_or(d.lambda0),
            lambda1: g.lambda1,
            lambda1c: g.lambda1c,
            lambda1m: g.lambda1m.unwrap_or(d.lambda1m),
            lambda2_mw: g.lambda2_mw.unwrap_or(d.lambda2_mw),
            lambda2_of: g.lambda2_of.unwrap_or(d.lambda2_of),
            lambda3: g.lambda3.unwrap_or(d.lambda3),
            p: g.p.unwrap_or(d.p),
            sigma2: g.sigma2.unwrap_or(d.sigma2),
            architecture: c.architecture.unwrap_or(d.architecture),
            gamma_offset_db: c.gamma_offset_db.unwrap_or(d.gamma_offset_db),
            equipment: EquipmentCosts {
                c_macro: c.c_macro.unwrap_or(eq.c_macro),
                c_micro: c.c_micro.unwrap_or(eq.c_micro),
                c_mw: c.c_mw.unwrap_or(eq.c_mw),
                c_of: c.c_of.unwrap_or(eq.c_of),
                c_dc: c.c_dc.unwrap_or(eq.c_dc),
                alpha: c.alpha.unwrap_or(eq.alpha),
            },
            links: LinkCostParams {
                user_bs: c.user_bs.unwrap_or(d.links.user_bs),
                bs_backhaul: c.bs_backhaul.unwrap_or(d.links.bs_backhaul),
                backhaul_dc: c.backhaul_dc.unwrap_or(d.links.backhaul_dc),
                processing: 0.0,
            },
            processing: c.processing,
            pooling_ratio: c.pooling_ratio,
            radio,
            options: file.model,
        };
        if let Some(r) = inputs.pooling_ratio {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::config("costs.pooling_ratio", "must be positive and finite"));
            }
        }
        file.complexity
            .validate()
            .map_err(|e| match e {
                Error::Parameter { name, reason } => Error::config(format!("complexity.{name}"), reason),
                other => other,
            })?;
        if file.simulation.reps < 2 {
            return Err(Error::config("simulation.reps", "at least 2 replications are required"));
        }
        if let Some(spec) = &file.sweep {
            spec.validate()?;
        }
        let config = Self {
            inputs,
            complexity: file.complexity,
            simulation: file.simulation,
            sweep: file.sweep,
            seed: file.seed.unwrap_or(DEFAULT_SEED),
            ..Self::default()
        };
        // Surface range errors at load time; the DRAN pooling ratio is deferred.
        config.inputs.scenario(|_| Ok(1.0))?;
        Ok(config)
    }

    /// Every input spelled out; loading the result gives back the same scenario.
    pub fn to_file(&self) -> ConfigFile {
        let i = &self.inputs;
        let r = &i.radio;
        ConfigFile {
            preset: Some(PAPER_DEFAULT.into()),
            seed: Some(self.seed),
            geometry: GeometrySection {
                lambda0: Some(i.lambda0),
                lambda1: i.lambda1,
                lambda1c: i.lambda1c,
                lambda1m: Some(i.lambda1m),
                lambda2_mw: Some(i.lambda2_mw),
                lambda2_of: Some(i.lambda2_of),
                lambda3: Some(i.lambda3),
                p: Some(i.p),
                sigma2: Some(i.sigma2),
            },
            costs: CostsSection {
                architecture: Some(i.architecture),
                gamma_offset_db: Some(i.gamma_offset_db),
                c_macro: Some(i.equipment.c_macro),
                c_micro: Some(i.equipment.c_micro),
                c_mw: Some(i.equipment.c_mw),
                c_of: Some(i.equipment.c_of),
                c_dc: Some(i.equipment.c_dc),
                alpha: Some(i.equipment.alpha),
                processing: i.processing,
                pooling_ratio: i.pooling_ratio,
                user_bs: Some(i.links.user_bs),
                bs_backhaul: Some(i.links.bs_backhaul),
                backhaul_dc: Some(i.links.backhaul_dc),
            },
            radio: RadioSection {
                preset: None,
                p_tx_dbm: Some(r.p_tx_dbm),
                noise_dbm: Some(r.noise_dbm),
                n_subcarriers: Some(r.n_subcarriers),
                bandwidth_hz: Some(r.bandwidth_hz),
                control_overhead: Some(r.control_overhead),
            },
            model: i.options,
            complexity: self.complexity.clone(),
            simulation: self.simulation,
            sweep: self.sweep.clone(),
        }
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(&self.to_file()).map_err(|e| Error::config("<emit>", e.to_string()))
    }
}

fn resolve_radio(section: &RadioSection) -> Result<RadioParams> {
    let base = match section.preset.as_deref() {
        None => RadioParams::lte_10mhz(),
        Some(name) => RadioParams::preset(name).ok_or_else(|| {
            Error::config("radio.preset", format!("unknown radio preset `{name}` (known: {})", RadioParams::LTE_10MHZ))
        })?,
    };
    let radio = RadioParams {
        p_tx_dbm: section.p_tx_dbm.unwrap_or(base.p_tx_dbm),
        noise_dbm: section.noise_dbm.unwrap_or(base.noise_dbm),
        n_subcarriers: section.n_subcarriers.unwrap_or(base.n_subcarriers),
        bandwidth_hz: section.bandwidth_hz.unwrap_or(base.bandwidth_hz),
        control_overhead: section.control_overhead.unwrap_or(base.control_overhead),
    };
    radio.validate().map_err(|e| match e {
        Error::Parameter { name, reason } => Error::config(format!("radio.{name}"), reason),
        other => other,
    })?;
    Ok(radio)
}

/// Names the dotted key a TOML error points at, from its span.
fn parse_error(text: &str, err: &toml::de::Error) -> Error {
    let message = err.message().to_string();
    let Some(span) = err.span() else {
        return Error::config("<file>", message);
    };
    let mut section = String::new();
    let mut key = String::new();
    let mut offset = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim();
        if trimmed.starts_with('[') {
            section = trimmed.trim_matches(|c| c == '[' || c == ']').trim().to_string();
            key.clear();
        } else if let Some((k, _)) = trimmed.split_once('=') {
            key = k.trim().trim_matches('"').to_string();
        }
        if offset + line.len() > span.start {
            break;
        }
        offset += line.len();
    }
    // Unknown fields name themselves in the message.
    if let Some(field) = message.strip_prefix("unknown field `").and_then(|m| m.split('`').next()) {
        key = field.to_string();
    }
    let full = match (section.is_empty(), key.is_empty()) {
        (true, true) => "<file>".to_string(),
        (true, false) => key,
        (false, true) => section,
        (false, false) => format!("{section}.{key}"),
    };
    Error::config(full, message)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn key_of(e: Error) -> String {
        match e {
            Error::Config { key, .. } => key,
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn empty_file_gives_default_preset() {
        let c = Config::parse("").unwrap();
        let s = c.scenario().unwrap();
        assert_eq!(s.lambda0, 170.0);
        assert_abs_diff_eq!(s.lambda2(), 5.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.sigma * s.sigma, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(s.lambda1(), 50.03, epsilon = 0.5);
        assert_abs_diff_eq!(s.links.processing, 653.54, epsilon = 1.0);
        assert_eq!(s.equipment, EquipmentCosts::reference());
        assert_eq!(s.c3(), 40_000.0);
        let explicit = Config::parse("preset = \"paper-default\"").unwrap().scenario().unwrap();
        assert_eq!(s, explicit);
    }

    #[test]
    fn offsets_pick_their_intensity_and_price() {
        for (db, l1, a) in [(0.4, 51.2, 578.68), (0.9, 52.8, 515.89)] {
            let c = Config::parse(&format!("[costs]\ngamma_offset_db = {db}")).unwrap();
            let s = c.scenario().unwrap();
            assert_abs_diff_eq!(s.lambda1(), l1, epsilon = 0.5);
            // The price follows the dimensioned λ1, not the rounded one.
            assert_abs_diff_eq!(s.links.processing, a, epsilon = 2.0);
        }
        let e = Config::parse("[costs]\ngamma_offset_db = 0.5").unwrap_err();
        assert_eq!(key_of(e), "costs.gamma_offset_db");
    }

    #[test]
    fn range_violations_name_the_key() {
        assert_eq!(key_of(Config::parse("[geometry]\np = 1.5").unwrap_err()), "geometry.p");
        assert_eq!(key_of(Config::parse("[geometry]\nsigma2 = -1").unwrap_err()), "geometry.sigma2");
        assert_eq!(key_of(Config::parse("[costs]\nalpha = 2").unwrap_err()), "costs.alpha");
        let pair = "[costs.user_bs]\ncapacity = -1\ncapacity_exp = 4\ninfra = 1\ninfra_exp = 2";
        assert_eq!(key_of(Config::parse(pair).unwrap_err()), "costs.user_bs");
        assert_eq!(key_of(Config::parse("[radio]\ncontrol_overhead = 1.5").unwrap_err()), "radio.control_overhead");
    }

    #[test]
    fn parse_failures_name_the_key() {
        assert_eq!(key_of(Config::parse("[geometry]\nlambda9 = 1").unwrap_err()), "geometry.lambda9");
        assert_eq!(key_of(Config::parse("[geometry]\nlambda0 = \"many\"").unwrap_err()), "geometry.lambda0");
        assert_eq!(key_of(Config::parse("preset = \"other\"").unwrap_err()), "preset");
        assert_eq!(key_of(Config::parse("[costs]\narchitecture = \"CRAN\"").unwrap_err()), "costs.architecture");
    }

    #[test]
    fn dran_has_no_datacenter_price_and_pays_more_processing() {
        let c = Config::parse("[costs]\narchitecture = \"DRAN\"\npooling_ratio = 1.6").unwrap();
        let s = c.scenario().unwrap();
        assert_eq!(s.c3(), 0.0);
        let cloud = Config::parse("").unwrap().scenario().unwrap();
        assert!(s.links.processing > cloud.links.processing);
        assert_abs_diff_eq!(s.links.processing, 0.111 * 1.6 * s.lambda1() * 20_000.0 / 170.0, epsilon = 1e-6);
    }

    #[test]
    fn explicit_overrides_win() {
        let c = Config::parse("[geometry]\nlambda1c = 7\nlambda1m = 2\n[costs]\nprocessing = 100\ngamma_offset_db = 0.3\nc_dc = 1").unwrap();
        let s = c.scenario().unwrap();
        assert_eq!((s.lambda1c, s.lambda1m, s.links.processing), (7.0, 2.0, 100.0));
        assert_eq!(s.c3(), 1.0);
    }

    #[test]
    fn emit_round_trip() {
        let texts = [
            "",
            "seed = 9\n[geometry]\nlambda0 = 300\np = 0.25\n[costs]\narchitecture = \"DRAN\"\npooling_ratio = 1.5\n[model]\nuser_distance = \"nearest_neighbour\"",
            "[sweep]\naxis = \"alpha\"\nvalues = [0, 0.5, 1]\narchitectures = [\"DRAN\", \"CloudRAN@0.4\"]\n[costs]\npooling_ratio = 1.6",
            "[complexity]\npool_size = 10\n[complexity.snr]\nkind = \"constant\"\nsnr_db = 12",
        ];
        for text in texts {
            let first = Config::parse(text).unwrap();
            let emitted = first.to_toml().unwrap();
            let second = Config::parse(&emitted).unwrap();
            assert_eq!(first.scenario().unwrap(), second.scenario().unwrap(), "{emitted}");
            assert_eq!(first.to_file(), second.to_file());
            assert_eq!(emitted, second.to_toml().unwrap());
        }
    }
}
