//! Seeded Monte Carlo oracle: samples marked Poisson deployments with exact
//! composite fading and replays the scenario rules, producing empirical
//! distributions for everything the closed forms predict.
//!
//! Replicate `i` draws from its own counter-derived ChaCha substream, so
//! results are bit-identical for a given `(seed, config)` regardless of how
//! many workers execute the replicates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use rayon::prelude::*;

use crate::channel::{sample_composite_fading, ChannelParams};
use crate::cumulants::AnnularRegion;
use crate::error::{invalid, Error, Result};
use crate::scenarios::{MacroDistanceModel, ScenarioKind, ScenarioSpec};
use crate::units::dbm_to_mw;

/// Monte Carlo run description.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub replicates: usize,
    pub seed: u64,
    pub scenario: ScenarioSpec,
}

/// Sorted empirical sample set.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalDistribution {
    samples: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn from_samples(mut samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        if samples.iter().any(|v| v.is_nan()) {
            return Err(invalid("empirical samples must not be NaN"));
        }
        samples.sort_unstable_by(f64::total_cmp);
        Ok(Self { samples })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Step-function empirical CDF, `#(samples <= x) / n`.
    pub fn cdf(&self, x: f64) -> f64 {
        let idx = self.samples.partition_point(|&s| s <= x);
        idx as f64 / self.samples.len() as f64
    }

    pub fn ccdf(&self, x: f64) -> f64 {
        1.0 - self.cdf(x)
    }

    /// Order-statistic quantile (inverse CDF at `q` in [0, 1]).
    pub fn quantile(&self, q: f64) -> f64 {
        let n = self.samples.len();
        let idx = ((q * n as f64).ceil() as usize).clamp(1, n);
        self.samples[idx - 1]
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5)
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.samples.len() as f64
    }

    /// Sample variance (unbiased).
    pub fn variance(&self) -> f64 {
        let n = self.samples.len() as f64;
        let mean = self.mean();
        self.samples.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1.0)
    }

    /// Fourth central moment, used for the standard error of the variance.
    pub fn fourth_central_moment(&self) -> f64 {
        let n = self.samples.len() as f64;
        let mean = self.mean();
        self.samples.iter().map(|s| (s - mean).powi(4)).sum::<f64>() / n
    }

    /// Kolmogorov-Smirnov distance against an analytic CDF, evaluated on both
    /// sides of every sample step.
    pub fn ks_distance<F: Fn(f64) -> f64>(&self, analytic_cdf: F) -> f64 {
        let n = self.samples.len() as f64;
        let mut d: f64 = 0.0;
        for (i, &x) in self.samples.iter().enumerate() {
            let f = analytic_cdf(x);
            d = d.max((f - i as f64 / n).abs());
            d = d.max(((i + 1) as f64 / n - f).abs());
        }
        d
    }
}

/// Empirical distributions produced by one scenario simulation. `censored`
/// counts replicates whose serving set was empty (possible in ES5 when the
/// target picocell is not part of the distributed set); those contribute a
/// zero signal sample and no SIR sample.
#[derive(Debug, Clone)]
pub struct ScenarioSamples {
    pub signal: EmpiricalDistribution,
    pub interference: EmpiricalDistribution,
    pub sir: EmpiricalDistribution,
    pub censored: usize,
}

/// Distances of a Poisson deployment over the annulus: the count is
/// `Poisson(λ · area)` and each radius has CDF `(r² - r_min²)/(r_max² - r_min²)`.
pub fn sample_deployment<R: Rng + ?Sized>(
    region: &AnnularRegion,
    density: f64,
    rng: &mut R,
) -> Vec<f64> {
    if density <= 0.0 {
        return Vec::new();
    }
    let mean = density * region.area();
    let count = Poisson::new(mean).expect("positive mean").sample(rng) as usize;
    let lo = region.r_min * region.r_min;
    let hi = region.r_max * region.r_max;
    (0..count)
        .map(|_| (lo + rng.random::<f64>() * (hi - lo)).sqrt())
        .collect()
}

fn sample_annulus_radius<R: Rng + ?Sized>(region: &AnnularRegion, rng: &mut R) -> f64 {
    let lo = region.r_min * region.r_min;
    let hi = region.r_max * region.r_max;
    (lo + rng.random::<f64>() * (hi - lo)).sqrt()
}

struct Replicate {
    signal: f64,
    interference: f64,
    sir: Option<f64>,
    censored: bool,
}

fn simulate_one(spec: &ScenarioSpec, rng: &mut ChaCha8Rng) -> Replicate {
    let ch = &spec.channel;
    let alpha = ch.alpha;
    let p_pico = dbm_to_mw(spec.pico.tx_power_dbm);
    let p_pico_backed = spec.pico.backed_off_power_mw();
    let p_pilot = dbm_to_mw(spec.pico.pilot_power_dbm);

    // Poisson field with one fading mark per node; the same mark drives the
    // pilot measurement and the data-channel gain.
    let radii = sample_deployment(&spec.region, spec.pico.density, rng);
    let gains: Vec<(f64, f64)> = radii
        .iter()
        .map(|&r| (r.powf(-alpha), sample_composite_fading(ch, rng)))
        .collect();

    let needs_macro = !matches!(spec.kind, ScenarioKind::Es3);
    let macro_power = if needs_macro {
        let d = match spec.macro_cell.distance {
            MacroDistanceModel::Annulus => sample_annulus_radius(&spec.region, rng),
            MacroDistanceModel::Fixed(d) => d,
        };
        let x = sample_composite_fading(ch, rng);
        dbm_to_mw(spec.macro_cell.tier.tx_power_dbm) * d.powf(-alpha) * x
    } else {
        0.0
    };

    let serving_power = |rng: &mut ChaCha8Rng| -> f64 {
        let d = spec
            .serving_pico_distance_m
            .expect("validated serving distance");
        p_pico * d.powf(-alpha) * sample_composite_fading(ch, rng)
    };

    let pico_sum = |scale: f64| -> f64 { gains.iter().map(|(g, x)| scale * g * x).sum() };

    let (signal, interference, censored) = match spec.kind {
        ScenarioKind::Es1 => (macro_power, pico_sum(p_pico), false),
        ScenarioKind::Es2 => (serving_power(rng), macro_power + pico_sum(p_pico), false),
        ScenarioKind::Es3 => (serving_power(rng), pico_sum(p_pico), false),
        ScenarioKind::Es4 => {
            let rho = dbm_to_mw(spec.rho_th_dbm.expect("validated rho_th"));
            let mut agg = macro_power;
            for (g, x) in &gains {
                let detected = p_pilot * g * x >= rho;
                agg += if detected { p_pico_backed } else { p_pico } * g * x;
            }
            (serving_power(rng), agg, false)
        }
        ScenarioKind::Es5 => {
            let rho = dbm_to_mw(spec.rho_th_dbm.expect("validated rho_th"));
            let mut das = 0.0;
            let mut agg = macro_power;
            for (g, x) in &gains {
                if p_pilot * g * x >= rho {
                    das += p_pico * g * x;
                } else {
                    agg += p_pico * g * x;
                }
            }
            if spec.das_includes_serving {
                das += serving_power(rng);
            }
            (das, agg, das == 0.0)
        }
    };

    let sir = if censored {
        None
    } else {
        Some(signal / interference)
    };
    Replicate {
        signal,
        interference,
        sir,
        censored,
    }
}

/// Run the scenario `cfg.replicates` times and collect the empirical signal,
/// interference and SIR distributions.
pub fn simulate_scenario(cfg: &SimConfig) -> Result<ScenarioSamples> {
    cfg.scenario.validate()?;
    if cfg.replicates < 1 {
        return Err(invalid("need at least one replicate"));
    }
    let spec = &cfg.scenario;
    let replicates: Vec<Replicate> = (0..cfg.replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            simulate_one(spec, &mut rng)
        })
        .collect();

    let mut signal = Vec::with_capacity(cfg.replicates);
    let mut interference = Vec::with_capacity(cfg.replicates);
    let mut sir = Vec::new();
    let mut censored = 0usize;
    for r in replicates {
        signal.push(r.signal);
        interference.push(r.interference);
        if let Some(s) = r.sir {
            sir.push(s);
        }
        censored += r.censored as usize;
    }
    if sir.is_empty() {
        return Err(invalid(
            "every replicate was censored; the serving set is always empty",
        ));
    }
    Ok(ScenarioSamples {
        signal: EmpiricalDistribution::from_samples(signal)?,
        interference: EmpiricalDistribution::from_samples(interference)?,
        sir: EmpiricalDistribution::from_samples(sir)?,
        censored,
    })
}

/// Empirical distribution of the power received from one transmitter placed
/// uniformly in the annulus, `Y = p R^{-α} X` with exact composite fading.
pub fn simulate_single_tx_rx(
    region: &AnnularRegion,
    p_dbm: f64,
    ch: &ChannelParams,
    replicates: usize,
    seed: u64,
) -> Result<EmpiricalDistribution> {
    if replicates < 1 {
        return Err(invalid("need at least one replicate"));
    }
    let p = dbm_to_mw(p_dbm);
    let samples: Vec<f64> = (0..replicates)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let r = sample_annulus_radius(region, &mut rng);
            p * r.powf(-ch.alpha) * sample_composite_fading(ch, &mut rng)
        })
        .collect();
    EmpiricalDistribution::from_samples(samples)
}
