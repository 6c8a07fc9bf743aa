//! Evaluation scenarios: wire the channel, cumulant and association layers
//! into (signal, interference) link budgets for the five network
//! configurations under study.
//!
//! - ES1: served by the umbrella macrocell, full picocell interference.
//! - ES2: served by the target picocell under range expansion, macro and
//!   picocell tiers both interfere.
//! - ES3: as ES2 inside protected subframes, so the macro component is
//!   masked out of the interference.
//! - ES4: as ES2 with the picocell field split by the detection threshold;
//!   detected cells back off their power, the remainder transmits at full
//!   power, and the macrocell still interferes.
//! - ES5: detected picocells jointly serve the user as a virtual distributed
//!   antenna system; the remainder plus the macrocell interfere.

use crate::association::AssociationPolicy;
use crate::channel::ChannelParams;
use crate::cumulants::{
    combine_tiers, fixed_distance_cumulants, ppp_aggregate_cumulants, r1_cumulants, r2_cumulants,
    single_tx_cumulants, AnnularRegion, TierConfig, DEFAULT_CUMULANT_ORDER,
};
use crate::error::{invalid, Result};
use crate::lognormal::{ln_from_cumulants, CumulantVec, LogNormalParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScenarioKind {
    Es1,
    Es2,
    Es3,
    Es4,
    Es5,
}

impl ScenarioKind {
    pub fn label(&self) -> &'static str {
        match self {
            ScenarioKind::Es1 => "ES1",
            ScenarioKind::Es2 => "ES2",
            ScenarioKind::Es3 => "ES3",
            ScenarioKind::Es4 => "ES4",
            ScenarioKind::Es5 => "ES5",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "ES1" => Ok(ScenarioKind::Es1),
            "ES2" => Ok(ScenarioKind::Es2),
            "ES3" => Ok(ScenarioKind::Es3),
            "ES4" => Ok(ScenarioKind::Es4),
            "ES5" => Ok(ScenarioKind::Es5),
            other => Err(invalid(format!(
                "scenario.kind must be one of ES1..ES5, got \"{other}\""
            ))),
        }
    }
}

impl core::fmt::Display for ScenarioKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.label())
    }
}

/// Distance model for the umbrella macrocell relative to the tagged user:
/// uniformly placed in the observation annulus, or at a fixed distance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MacroDistanceModel {
    Annulus,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacroConfig {
    pub tier: TierConfig,
    pub distance: MacroDistanceModel,
}

/// Full description of one evaluation scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub kind: ScenarioKind,
    pub region: AnnularRegion,
    pub channel: ChannelParams,
    pub macro_cell: MacroConfig,
    pub pico: TierConfig,
    pub policy: AssociationPolicy,
    /// Detection threshold of the interference indicator (ES4/ES5).
    pub rho_th_dbm: Option<f64>,
    /// Fraction of subframes the macro leaves protected (ES3 context).
    pub abs_duty: f64,
    /// Distance to the target serving picocell (ES2-ES4, and ES5 when the
    /// serving cell joins the distributed set).
    pub serving_pico_distance_m: Option<f64>,
    /// Whether the ES5 distributed serving set includes the target picocell
    /// in addition to the detected field.
    pub das_includes_serving: bool,
    /// Number of cumulants computed per component.
    pub max_order: usize,
}

impl ScenarioSpec {
    pub fn new(
        kind: ScenarioKind,
        region: AnnularRegion,
        channel: ChannelParams,
        macro_cell: MacroConfig,
        pico: TierConfig,
        policy: AssociationPolicy,
    ) -> Self {
        Self {
            kind,
            region,
            channel,
            macro_cell,
            pico,
            policy,
            rho_th_dbm: None,
            abs_duty: 0.5,
            serving_pico_distance_m: None,
            das_includes_serving: true,
            max_order: DEFAULT_CUMULANT_ORDER,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_duty > 0.0 && self.abs_duty <= 1.0) {
            return Err(invalid(format!(
                "scenario.abs_duty must be in (0, 1], got {}",
                self.abs_duty
            )));
        }
        if self.max_order < 2 || self.max_order > crate::cumulants::MAX_CUMULANT_ORDER {
            return Err(invalid(format!(
                "scenario.max_order must be in 2..={}, got {}",
                crate::cumulants::MAX_CUMULANT_ORDER,
                self.max_order
            )));
        }
        if let MacroDistanceModel::Fixed(d) = self.macro_cell.distance {
            if !(d > 0.0) || !d.is_finite() {
                return Err(invalid(format!(
                    "macro.distance fixed_m must be positive and finite, got {d}"
                )));
            }
        }
        let needs_rho = matches!(self.kind, ScenarioKind::Es4 | ScenarioKind::Es5);
        if needs_rho && self.rho_th_dbm.is_none() {
            return Err(invalid(format!(
                "scenario.rho_th_dBm is required for {}",
                self.kind
            )));
        }
        if let Some(rho) = self.rho_th_dbm {
            if rho.is_nan() {
                return Err(invalid("scenario.rho_th_dBm must not be NaN"));
            }
        }
        let needs_serving = matches!(
            self.kind,
            ScenarioKind::Es2 | ScenarioKind::Es3 | ScenarioKind::Es4
        ) || (self.kind == ScenarioKind::Es5 && self.das_includes_serving);
        match self.serving_pico_distance_m {
            None if needs_serving => Err(invalid(format!(
                "scenario.serving_pico_distance_m is required for {}",
                self.kind
            ))),
            Some(d) if !(d > 0.0) || !d.is_finite() => Err(invalid(format!(
                "scenario.serving_pico_distance_m must be positive and finite, got {d}"
            ))),
            _ => Ok(()),
        }
    }

    fn rho_th(&self) -> f64 {
        self.rho_th_dbm.expect("validated presence")
    }

    fn serving_distance(&self) -> f64 {
        self.serving_pico_distance_m.expect("validated presence")
    }
}

/// Which transmitter population an interference component describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterferenceSource {
    Macro,
    PicoAggregate,
    PicoCoordinated,
    PicoRemainder,
}

impl InterferenceSource {
    pub fn label(&self) -> &'static str {
        match self {
            InterferenceSource::Macro => "macro",
            InterferenceSource::PicoAggregate => "pico-aggregate",
            InterferenceSource::PicoCoordinated => "pico-coordinated",
            InterferenceSource::PicoRemainder => "pico-remainder",
        }
    }
}

/// Composed link budget: fitted log-normal signal and interference, with the
/// per-component cumulants kept as diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkBudget {
    pub signal: LogNormalParams,
    pub interference: LogNormalParams,
    pub signal_cumulants: CumulantVec,
    pub interference_components: Vec<(InterferenceSource, CumulantVec)>,
    pub interference_total: CumulantVec,
}

/// Cumulants of the power received from the umbrella macrocell.
pub fn macro_rx_cumulants(spec: &ScenarioSpec, n_max: usize) -> Result<CumulantVec> {
    match spec.macro_cell.distance {
        MacroDistanceModel::Annulus => single_tx_cumulants(
            &spec.region,
            spec.macro_cell.tier.tx_power_dbm,
            &spec.channel,
            n_max,
        ),
        MacroDistanceModel::Fixed(d) => {
            fixed_distance_cumulants(d, spec.macro_cell.tier.tx_power_dbm, &spec.channel, n_max)
        }
    }
}

fn serving_pico_rx_cumulants(spec: &ScenarioSpec, n_max: usize) -> Result<CumulantVec> {
    fixed_distance_cumulants(
        spec.serving_distance(),
        spec.pico.tx_power_dbm,
        &spec.channel,
        n_max,
    )
}

/// Cumulants of the aggregate power received from the detected serving set
/// of a virtual distributed antenna system (the detected field transmitting
/// the user's data at full power).
pub fn virtual_das_signal_cumulants(spec: &ScenarioSpec, n_max: usize) -> Result<CumulantVec> {
    if spec.kind != ScenarioKind::Es5 {
        return Err(invalid(format!(
            "virtual DAS signal is defined for ES5 only, got {}",
            spec.kind
        )));
    }
    spec.validate()?;
    let serving_tier = TierConfig {
        power_backoff_db: 0.0,
        ..spec.pico
    };
    r1_cumulants(
        &spec.region,
        &serving_tier,
        &spec.channel,
        spec.rho_th(),
        n_max,
    )
}

/// Compose the scenario into fitted signal and interference distributions.
pub fn build_link_budget(spec: &ScenarioSpec) -> Result<LinkBudget> {
    spec.validate()?;
    let n = spec.max_order;

    let signal_cumulants = match spec.kind {
        ScenarioKind::Es1 => macro_rx_cumulants(spec, n)?,
        ScenarioKind::Es2 | ScenarioKind::Es3 | ScenarioKind::Es4 => {
            serving_pico_rx_cumulants(spec, n)?
        }
        ScenarioKind::Es5 => {
            let das = virtual_das_signal_cumulants(spec, n)?;
            if spec.das_includes_serving {
                combine_tiers(&das, &serving_pico_rx_cumulants(spec, n)?)?
            } else {
                das
            }
        }
    };

    let mut components: Vec<(InterferenceSource, CumulantVec)> = Vec::new();
    match spec.kind {
        ScenarioKind::Es1 | ScenarioKind::Es3 => {
            components.push((
                InterferenceSource::PicoAggregate,
                ppp_aggregate_cumulants(&spec.region, &spec.pico, &spec.channel, n)?,
            ));
        }
        ScenarioKind::Es2 => {
            components.push((InterferenceSource::Macro, macro_rx_cumulants(spec, n)?));
            components.push((
                InterferenceSource::PicoAggregate,
                ppp_aggregate_cumulants(&spec.region, &spec.pico, &spec.channel, n)?,
            ));
        }
        ScenarioKind::Es4 => {
            components.push((InterferenceSource::Macro, macro_rx_cumulants(spec, n)?));
            components.push((
                InterferenceSource::PicoCoordinated,
                r1_cumulants(&spec.region, &spec.pico, &spec.channel, spec.rho_th(), n)?,
            ));
            components.push((
                InterferenceSource::PicoRemainder,
                r2_cumulants(&spec.region, &spec.pico, &spec.channel, spec.rho_th(), n)?,
            ));
        }
        ScenarioKind::Es5 => {
            components.push((InterferenceSource::Macro, macro_rx_cumulants(spec, n)?));
            components.push((
                InterferenceSource::PicoRemainder,
                r2_cumulants(&spec.region, &spec.pico, &spec.channel, spec.rho_th(), n)?,
            ));
        }
    }

    let mut total = CumulantVec::zeros(n);
    for (_, c) in &components {
        total = combine_tiers(&total, c)?;
    }

    Ok(LinkBudget {
        signal: ln_from_cumulants(&signal_cumulants)?,
        interference: ln_from_cumulants(&total)?,
        signal_cumulants,
        interference_components: components,
        interference_total: total,
    })
}
