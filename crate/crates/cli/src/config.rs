//! Configuration file schema and its mapping onto library types.
//!
//! Units in the file are human-facing (dB, dBm, meters, nodes/m²); the
//! conversion to the library's linear/natural-log conventions happens when a
//! [`Config`] is lowered into a [`ScenarioSpec`].

use serde::Deserialize;

use sonstat::association::{AssociationPolicy, BiasMode};
use sonstat::channel::ChannelParams;
use sonstat::cumulants::{AnnularRegion, TierConfig};
use sonstat::scenarios::{MacroConfig, MacroDistanceModel, ScenarioKind, ScenarioSpec};

/// What the run computes. Distribution quantities need an `axis` grid;
/// `outage` and `capacity` need a `sweep`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum Quantity {
    #[serde(rename = "summary")]
    Summary,
    #[serde(rename = "received-power-cdf")]
    ReceivedPowerCdf,
    #[serde(rename = "aggregate-cci-ccdf")]
    AggregateCciCcdf,
    #[serde(rename = "handover-probability")]
    HandoverProbability,
    #[serde(rename = "outage")]
    Outage,
    #[serde(rename = "capacity")]
    Capacity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum PowerSource {
    #[serde(rename = "macro")]
    Macro,
    #[serde(rename = "pico")]
    Pico,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSection {
    pub kind: String,
    #[serde(default)]
    pub serving_pico_distance_m: Option<f64>,
    #[serde(default, rename = "rho_th_dBm")]
    pub rho_th_dbm: Option<f64>,
    #[serde(default = "default_abs_duty")]
    pub abs_duty: f64,
    #[serde(default = "default_true")]
    pub das_includes_serving: bool,
    #[serde(default = "default_max_order")]
    pub max_order: usize,
}

fn default_abs_duty() -> f64 {
    0.5
}

fn default_true() -> bool {
    true
}

fn default_max_order() -> usize {
    4
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RegionSection {
    pub r_min_m: f64,
    pub r_max_m: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub alpha: f64,
    pub m: f64,
    #[serde(rename = "sigma_omega_dB")]
    pub sigma_omega_db: f64,
    #[serde(default, rename = "mu_omega_dB")]
    pub mu_omega_db: f64,
}

/// Macro distance model: the string `"annulus"` or `{"fixed_m": meters}`.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum DistanceSection {
    Name(DistanceName),
    Fixed { fixed_m: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum DistanceName {
    #[serde(rename = "annulus")]
    Annulus,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MacroSection {
    #[serde(default = "default_macro_power", rename = "tx_power_dBm")]
    pub tx_power_dbm: f64,
    #[serde(default = "default_distance")]
    pub distance: DistanceSection,
}

fn default_macro_power() -> f64 {
    46.0
}

fn default_distance() -> DistanceSection {
    DistanceSection::Name(DistanceName::Annulus)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicoSection {
    #[serde(default = "default_pico_power", rename = "tx_power_dBm")]
    pub tx_power_dbm: f64,
    #[serde(default, rename = "pilot_power_dBm")]
    pub pilot_power_dbm: Option<f64>,
    pub density: f64,
    #[serde(default, rename = "power_backoff_dB")]
    pub power_backoff_db: f64,
}

fn default_pico_power() -> f64 {
    30.0
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySection {
    #[serde(default, rename = "reb_bias_dB")]
    pub reb_bias_db: f64,
    #[serde(default, rename = "hysteresis_dB")]
    pub hysteresis_db: f64,
    #[serde(default = "default_bias_mode")]
    pub bias_mode: String,
}

fn default_bias_mode() -> String {
    "multiplicative-linear".to_owned()
}

impl Default for PolicySection {
    fn default() -> Self {
        Self {
            reb_bias_db: 0.0,
            hysteresis_db: 0.0,
            bias_mode: default_bias_mode(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricsSection {
    #[serde(default, rename = "gamma_th_dB")]
    pub gamma_th_db: f64,
    #[serde(default = "default_bandwidth", rename = "bandwidth_Hz")]
    pub bandwidth_hz: f64,
    #[serde(default = "default_quadrature")]
    pub quadrature_order: usize,
}

fn default_bandwidth() -> f64 {
    1.0
}

fn default_quadrature() -> usize {
    32
}

impl Default for MetricsSection {
    fn default() -> Self {
        Self {
            gamma_th_db: 0.0,
            bandwidth_hz: default_bandwidth(),
            quadrature_order: default_quadrature(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
pub enum AxisScale {
    #[serde(rename = "linear")]
    Linear,
    #[serde(rename = "log")]
    Log,
}

/// Evaluation grid: the x axis of distribution and handover curves, and the
/// swept parameter of outage/capacity runs.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(default)]
    pub field: Option<String>,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    #[serde(default = "default_scale")]
    pub scale: AxisScale,
}

fn default_scale() -> AxisScale {
    AxisScale::Linear
}

impl GridSection {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        if self.points < 1 {
            return Err("grid needs at least one point".into());
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        match self.scale {
            AxisScale::Linear => Ok((0..self.points)
                .map(|i| {
                    self.start
                        + (self.stop - self.start) * i as f64 / (self.points - 1) as f64
                })
                .collect()),
            AxisScale::Log => {
                if self.start <= 0.0 || self.stop <= 0.0 {
                    return Err("log-scale grid needs positive endpoints".into());
                }
                let ratio = self.stop / self.start;
                Ok((0..self.points)
                    .map(|i| self.start * ratio.powf(i as f64 / (self.points - 1) as f64))
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VariantSection {
    pub label: String,
    #[serde(default)]
    pub set: serde_json::Map<String, serde_json::Value>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    #[serde(default)]
    pub name: Option<String>,
    #[serde(default)]
    pub notes: Vec<String>,
    pub quantity: Quantity,
    #[serde(default)]
    pub source: Option<PowerSource>,
    pub scenario: ScenarioSection,
    pub region: RegionSection,
    pub channel: ChannelSection,
    #[serde(rename = "macro")]
    pub macro_cell: MacroSection,
    pub pico: PicoSection,
    #[serde(default)]
    pub policy: PolicySection,
    #[serde(default)]
    pub metrics: MetricsSection,
    #[serde(default)]
    pub axis: Option<GridSection>,
    #[serde(default)]
    pub sweep: Option<GridSection>,
    #[serde(default)]
    pub variants: Vec<VariantSection>,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
}

fn default_mc_samples() -> usize {
    100_000
}

impl Config {
    pub fn from_json(text: &str) -> Result<Self, String> {
        serde_json::from_str(text).map_err(|e| format!("config parse error: {e}"))
    }

    pub fn bias_mode(&self) -> Result<BiasMode, String> {
        match self.policy.bias_mode.as_str() {
            "multiplicative-linear" => Ok(BiasMode::MultiplicativeLinear),
            "additive-linear" => Ok(BiasMode::AdditiveLinear),
            other => Err(format!(
                "policy.bias_mode must be multiplicative-linear or additive-linear, got \"{other}\""
            )),
        }
    }

    /// Lower the file schema into a validated library scenario.
    pub fn to_scenario(&self) -> Result<ScenarioSpec, String> {
        let kind = ScenarioKind::parse(&self.scenario.kind).map_err(|e| e.to_string())?;
        let region = AnnularRegion::new(self.region.r_min_m, self.region.r_max_m)
            .map_err(|e| format!("region: {e}"))?;
        let channel = ChannelParams::new(
            self.channel.alpha,
            self.channel.m,
            self.channel.mu_omega_db,
            self.channel.sigma_omega_db,
        )
        .map_err(|e| format!("channel: {e}"))?;
        let macro_tier = TierConfig::new(
            self.macro_cell.tx_power_dbm,
            self.macro_cell.tx_power_dbm,
            0.0,
            0.0,
        )
        .map_err(|e| format!("macro: {e}"))?;
        let distance = match self.macro_cell.distance {
            DistanceSection::Name(DistanceName::Annulus) => MacroDistanceModel::Annulus,
            DistanceSection::Fixed { fixed_m } => MacroDistanceModel::Fixed(fixed_m),
        };
        let pico = TierConfig::new(
            self.pico.tx_power_dbm,
            self.pico.pilot_power_dbm.unwrap_or(self.pico.tx_power_dbm),
            self.pico.density,
            self.pico.power_backoff_db,
        )
        .map_err(|e| format!("pico: {e}"))?;
        let policy = AssociationPolicy::new(
            self.policy.reb_bias_db,
            self.policy.hysteresis_db,
            self.bias_mode()?,
        )
        .map_err(|e| format!("policy: {e}"))?;

        let mut spec = ScenarioSpec::new(
            kind,
            region,
            channel,
            MacroConfig {
                tier: macro_tier,
                distance,
            },
            pico,
            policy,
        );
        spec.rho_th_dbm = self.scenario.rho_th_dbm;
        spec.abs_duty = self.scenario.abs_duty;
        spec.serving_pico_distance_m = self.scenario.serving_pico_distance_m;
        spec.das_includes_serving = self.scenario.das_includes_serving;
        spec.max_order = self.scenario.max_order;
        spec.validate().map_err(|e| e.to_string())?;
        Ok(spec)
    }

    /// Assign a real scalar field addressed by its dotted config path.
    pub fn set_field(&mut self, path: &str, value: f64) -> Result<(), String> {
        let slot: &mut f64 = match path {
            "channel.alpha" => &mut self.channel.alpha,
            "channel.m" => &mut self.channel.m,
            "channel.sigma_omega_dB" => &mut self.channel.sigma_omega_db,
            "channel.mu_omega_dB" => &mut self.channel.mu_omega_db,
            "region.r_min_m" => &mut self.region.r_min_m,
            "region.r_max_m" => &mut self.region.r_max_m,
            "macro.tx_power_dBm" => &mut self.macro_cell.tx_power_dbm,
            "macro.distance.fixed_m" => {
                self.macro_cell.distance = DistanceSection::Fixed { fixed_m: value };
                return Ok(());
            }
            "pico.tx_power_dBm" => &mut self.pico.tx_power_dbm,
            "pico.pilot_power_dBm" => {
                self.pico.pilot_power_dbm = Some(value);
                return Ok(());
            }
            "pico.density" => &mut self.pico.density,
            "pico.power_backoff_dB" => &mut self.pico.power_backoff_db,
            "policy.reb_bias_dB" => &mut self.policy.reb_bias_db,
            "policy.hysteresis_dB" => &mut self.policy.hysteresis_db,
            "scenario.rho_th_dBm" => {
                self.scenario.rho_th_dbm = Some(value);
                return Ok(());
            }
            "scenario.serving_pico_distance_m" => {
                self.scenario.serving_pico_distance_m = Some(value);
                return Ok(());
            }
            "scenario.abs_duty" => &mut self.scenario.abs_duty,
            "metrics.gamma_th_dB" => &mut self.metrics.gamma_th_db,
            "metrics.bandwidth_Hz" => &mut self.metrics.bandwidth_hz,
            other => {
                return Err(format!(
                    "unknown sweep/override field \"{other}\" (must name a real scalar config field)"
                ))
            }
        };
        *slot = value;
        Ok(())
    }

    /// Apply a variant override, which may also switch enumerated fields.
    pub fn apply_override(&mut self, path: &str, value: &serde_json::Value) -> Result<(), String> {
        if let Some(num) = value.as_f64() {
            return self.set_field(path, num);
        }
        let text = value
            .as_str()
            .ok_or_else(|| format!("override \"{path}\" must be a number or string"))?;
        match path {
            "scenario.kind" => {
                ScenarioKind::parse(text).map_err(|e| e.to_string())?;
                self.scenario.kind = text.to_owned();
                Ok(())
            }
            "policy.bias_mode" => {
                self.policy.bias_mode = text.to_owned();
                self.bias_mode().map(|_| ())
            }
            "macro.distance" if text == "annulus" => {
                self.macro_cell.distance = DistanceSection::Name(DistanceName::Annulus);
                Ok(())
            }
            other => Err(format!("unknown string override field \"{other}\"")),
        }
    }

    /// The run's variant list with overrides applied; a config without
    /// explicit variants is a single variant labeled by its scenario kind.
    pub fn expanded_variants(&self) -> Result<Vec<(String, Config)>, String> {
        if self.variants.is_empty() {
            let label = self
                .name
                .clone()
                .unwrap_or_else(|| self.scenario.kind.clone());
            return Ok(vec![(label, self.clone())]);
        }
        self.variants
            .iter()
            .map(|v| {
                let mut cfg = self.clone();
                cfg.variants.clear();
                for (path, value) in &v.set {
                    cfg.apply_override(path, value)
                        .map_err(|e| format!("variant \"{}\": {e}", v.label))?;
                }
                Ok((v.label.clone(), cfg))
            })
            .collect()
    }
}
