//! Analysis pipelines: evaluate the configured quantity for every variant,
//! write one CSV, and print a summary table.

use std::fmt::Write as _;

use sonstat::cumulants::single_tx_cumulants;
use sonstat::lognormal::{ln_from_cumulants, LogNormalParams};
use sonstat::metrics::{average_capacity, outage_probability, CapacityConfig, SirDistribution};
use sonstat::montecarlo::{simulate_scenario, simulate_single_tx_rx, ScenarioSamples, SimConfig};
use sonstat::scenarios::{build_link_budget, macro_rx_cumulants};
use sonstat::units::{dbm_to_mw, nat_to_db};

use crate::config::{Config, GridSection, PowerSource, Quantity};

/// Fully resolved run request (config plus command-line overrides).
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub config: Config,
    pub mode: Mode,
    pub output: Option<std::path::PathBuf>,
    pub seed: u64,
    pub mc_samples: Option<usize>,
    pub sweep: Option<GridSection>,
    pub quadrature_order: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Analytic,
    MonteCarlo,
    Both,
}

impl Mode {
    pub fn parse(s: &str) -> Result<Self, String> {
        match s {
            "analytic" => Ok(Mode::Analytic),
            "montecarlo" => Ok(Mode::MonteCarlo),
            "both" => Ok(Mode::Both),
            other => Err(format!(
                "mode must be analytic, montecarlo or both, got \"{other}\""
            )),
        }
    }

    fn analytic(&self) -> bool {
        matches!(self, Mode::Analytic | Mode::Both)
    }

    fn montecarlo(&self) -> bool {
        matches!(self, Mode::MonteCarlo | Mode::Both)
    }
}

/// Run failure carrying the process exit code (2 config, 3 singularity).
#[derive(Debug)]
pub struct RunError {
    pub message: String,
    pub exit_code: u8,
}

impl RunError {
    fn config(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            exit_code: 2,
        }
    }

    fn from_lib(err: sonstat::Error) -> Self {
        let exit_code = if err.is_singular_exponent() { 3 } else { 2 };
        Self {
            message: err.to_string(),
            exit_code,
        }
    }
}

pub struct RunOutput {
    pub csv: String,
    pub summary: String,
}

fn fmt_value(v: f64) -> String {
    format!("{v:.10e}")
}

/// Evaluate the manifest: returns the CSV body and the summary text.
pub fn run(manifest: &RunManifest) -> Result<RunOutput, RunError> {
    let mut config = manifest.config.clone();
    if let Some(k) = manifest.quadrature_order {
        config.metrics.quadrature_order = k;
    }
    if let Some(n) = manifest.mc_samples {
        config.mc_samples = n;
    }
    if let Some(sweep) = &manifest.sweep {
        config.sweep = Some(sweep.clone());
    }
    let variants = config.expanded_variants().map_err(RunError::config)?;

    // Every variant must lower to a valid scenario before any work starts.
    for (label, cfg) in &variants {
        cfg.to_scenario()
            .map_err(|e| RunError::config(format!("variant \"{label}\": {e}")))?;
    }

    let mut csv = String::new();
    let mut summary = String::new();
    match config.quantity {
        Quantity::Summary => summary_run(&config, &variants, manifest, &mut csv, &mut summary)?,
        Quantity::ReceivedPowerCdf => {
            received_power_run(&config, &variants, manifest, &mut csv, &mut summary)?
        }
        Quantity::AggregateCciCcdf => {
            aggregate_ccdf_run(&config, &variants, manifest, &mut csv, &mut summary)?
        }
        Quantity::HandoverProbability => {
            handover_run(&config, &variants, manifest, &mut csv, &mut summary)?
        }
        Quantity::Outage | Quantity::Capacity => {
            sweep_run(&config, &variants, manifest, &mut csv, &mut summary)?
        }
    }
    Ok(RunOutput { csv, summary })
}

/// Fitted signal/interference table plus the terminal metrics per variant.
fn summary_run(
    _config: &Config,
    variants: &[(String, Config)],
    manifest: &RunManifest,
    csv: &mut String,
    summary: &mut String,
) -> Result<(), RunError> {
    csv.push_str(concat!(
        "scenario,kappa1_mW,kappa2,kappa3,kappa4,",
        "mu_v0,sigma_v0,mu_v,sigma_v,mu_gamma,sigma_gamma,outage,capacity_bps\n"
    ));
    for (label, cfg) in variants {
        let (sir, budget) = link_metrics(cfg)?;
        let outage = outage_probability(&sir, cfg.metrics.gamma_th_db).map_err(RunError::from_lib)?;
        let capacity = average_capacity(
            &sir,
            &CapacityConfig::new(cfg.metrics.bandwidth_hz, cfg.metrics.quadrature_order)
                .map_err(RunError::from_lib)?,
        )
        .map_err(RunError::from_lib)?;
        let k = &budget.interference_total;
        let row = [
            k.k(1),
            k.k(2),
            k.k(3),
            k.k(4),
            budget.signal.mu,
            budget.signal.sigma,
            budget.interference.mu,
            budget.interference.sigma,
            sir.mu_gamma,
            sir.sigma_gamma,
            outage,
            capacity,
        ];
        writeln!(
            csv,
            "{label},{}",
            row.iter().map(|v| fmt_value(*v)).collect::<Vec<_>>().join(",")
        )
        .unwrap();
        write_variant_summary(summary, label, cfg, manifest)?;
    }
    Ok(())
}

fn link_metrics(cfg: &Config) -> Result<(SirDistribution, sonstat::scenarios::LinkBudget), RunError> {
    let spec = cfg.to_scenario().map_err(RunError::config)?;
    let budget = build_link_budget(&spec).map_err(RunError::from_lib)?;
    let sir = SirDistribution::from_link(&budget.signal, &budget.interference);
    Ok((sir, budget))
}

/// CDF of the power received from a single random transmitter in the
/// observation annulus (macro or pico source).
fn received_power_run(
    config: &Config,
    variants: &[(String, Config)],
    manifest: &RunManifest,
    csv: &mut String,
    summary: &mut String,
) -> Result<(), RunError> {
    let axis = config
        .axis
        .as_ref()
        .ok_or_else(|| RunError::config("received-power-cdf requires an \"axis\" grid (dBm)"))?;
    let grid = axis.values().map_err(RunError::config)?;
    let analytic = manifest.mode.analytic();
    let mc = manifest.mode.montecarlo();
    csv.push_str("scenario,x_dBm");
    if analytic {
        csv.push_str(",cdf_analytic");
    }
    if mc {
        csv.push_str(",cdf_mc");
    }
    csv.push('\n');

    for (label, cfg) in variants {
        let source = cfg
            .source
            .ok_or_else(|| RunError::config("received-power-cdf requires \"source\": macro|pico"))?;
        let spec = cfg.to_scenario().map_err(RunError::config)?;
        let p_dbm = match source {
            PowerSource::Macro => cfg.macro_cell.tx_power_dbm,
            PowerSource::Pico => cfg.pico.tx_power_dbm,
        };
        let fit = ln_from_cumulants(
            &single_tx_cumulants(&spec.region, p_dbm, &spec.channel, 2)
                .map_err(RunError::from_lib)?,
        )
        .map_err(RunError::from_lib)?;
        let samples = if mc {
            Some(
                simulate_single_tx_rx(
                    &spec.region,
                    p_dbm,
                    &spec.channel,
                    cfg.mc_samples,
                    manifest.seed,
                )
                .map_err(RunError::from_lib)?,
            )
        } else {
            None
        };
        for &x_dbm in &grid {
            let x = dbm_to_mw(x_dbm);
            write!(csv, "{label},{x_dbm:.3}").unwrap();
            if analytic {
                write!(csv, ",{}", fmt_value(fit.cdf(x))).unwrap();
            }
            if let Some(s) = &samples {
                write!(csv, ",{}", fmt_value(s.cdf(x))).unwrap();
            }
            csv.push('\n');
        }
        writeln!(
            summary,
            "{label}: single-transmitter fit mu = {:.4} nat ({:.2} dBm median), sigma = {:.4} nat ({:.2} dB)",
            fit.mu,
            nat_to_db(fit.mu),
            fit.sigma,
            nat_to_db(fit.sigma)
        )
        .unwrap();
    }
    Ok(())
}

/// CCDF of the scenario's aggregate interference.
fn aggregate_ccdf_run(
    config: &Config,
    variants: &[(String, Config)],
    manifest: &RunManifest,
    csv: &mut String,
    summary: &mut String,
) -> Result<(), RunError> {
    let axis = config
        .axis
        .as_ref()
        .ok_or_else(|| RunError::config("aggregate-cci-ccdf requires an \"axis\" grid (dBm)"))?;
    let grid = axis.values().map_err(RunError::config)?;
    let analytic = manifest.mode.analytic();
    let mc = manifest.mode.montecarlo();
    csv.push_str("scenario,x_dBm");
    if analytic {
        csv.push_str(",ccdf_analytic");
    }
    if mc {
        csv.push_str(",ccdf_mc");
    }
    csv.push('\n');

    for (label, cfg) in variants {
        let (_, budget) = link_metrics(cfg)?;
        let samples = if mc {
            Some(simulate(cfg, manifest)?)
        } else {
            None
        };
        for &x_dbm in &grid {
            let x = dbm_to_mw(x_dbm);
            write!(csv, "{label},{x_dbm:.3}").unwrap();
            if analytic {
                write!(csv, ",{}", fmt_value(1.0 - budget.interference.cdf(x))).unwrap();
            }
            if let Some(s) = &samples {
                write!(csv, ",{}", fmt_value(s.interference.ccdf(x))).unwrap();
            }
            csv.push('\n');
        }
        write_variant_summary(summary, label, cfg, manifest)?;
    }
    Ok(())
}

/// Handover probability versus the range-expansion bias.
fn handover_run(
    config: &Config,
    variants: &[(String, Config)],
    manifest: &RunManifest,
    csv: &mut String,
    summary: &mut String,
) -> Result<(), RunError> {
    use sonstat::association::{handover_probability, handover_probability_mc};
    use rand::SeedableRng;

    let axis = config
        .axis
        .as_ref()
        .ok_or_else(|| RunError::config("handover-probability requires an \"axis\" grid (dB bias)"))?;
    let grid = axis.values().map_err(RunError::config)?;
    let analytic = manifest.mode.analytic();
    let mc = manifest.mode.montecarlo();
    csv.push_str("scenario,reb_dB");
    if analytic {
        csv.push_str(",p_standard,p_biased");
    }
    if mc {
        csv.push_str(",p_biased_mc");
    }
    csv.push('\n');

    for (label, cfg) in variants {
        let spec = cfg.to_scenario().map_err(RunError::config)?;
        let serving = spec.serving_pico_distance_m.ok_or_else(|| {
            RunError::config("handover-probability requires scenario.serving_pico_distance_m")
        })?;
        let macro_fit = ln_from_cumulants(
            &macro_rx_cumulants(&spec, 2).map_err(RunError::from_lib)?,
        )
        .map_err(RunError::from_lib)?;
        let pico_fit = ln_from_cumulants(
            &sonstat::cumulants::fixed_distance_cumulants(
                serving,
                cfg.pico.tx_power_dbm,
                &spec.channel,
                2,
            )
            .map_err(RunError::from_lib)?,
        )
        .map_err(RunError::from_lib)?;
        let order = cfg.metrics.quadrature_order;
        let standard = handover_probability(&macro_fit, &pico_fit, &spec.policy.standard(), order)
            .map_err(RunError::from_lib)?;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(manifest.seed);
        for &reb in &grid {
            let policy = sonstat::association::AssociationPolicy::new(
                reb,
                spec.policy.hysteresis_db,
                spec.policy.bias_mode,
            )
            .map_err(RunError::from_lib)?;
            let biased = handover_probability(&macro_fit, &pico_fit, &policy, order)
                .map_err(RunError::from_lib)?;
            write!(csv, "{label},{reb:.3}").unwrap();
            if analytic {
                write!(csv, ",{},{}", fmt_value(standard), fmt_value(biased)).unwrap();
            }
            if mc {
                let (p, _) = handover_probability_mc(
                    &macro_fit,
                    &pico_fit,
                    &policy,
                    cfg.mc_samples.max(10_000),
                    &mut rng,
                )
                .map_err(RunError::from_lib)?;
                write!(csv, ",{}", fmt_value(p)).unwrap();
            }
            csv.push('\n');
        }
        writeln!(
            summary,
            "{label}: standard handover probability {standard:.4}; macro fit ({:.3}, {:.3}), pico fit ({:.3}, {:.3})",
            macro_fit.mu, macro_fit.sigma, pico_fit.mu, pico_fit.sigma
        )
        .unwrap();
    }
    Ok(())
}

/// Outage or capacity versus a swept scalar parameter.
fn sweep_run(
    config: &Config,
    variants: &[(String, Config)],
    manifest: &RunManifest,
    csv: &mut String,
    summary: &mut String,
) -> Result<(), RunError> {
    let quantity = config.quantity;
    let sweep = config
        .sweep
        .as_ref()
        .ok_or_else(|| RunError::config("outage/capacity runs require a \"sweep\" section or --sweep"))?;
    let field = sweep
        .field
        .clone()
        .ok_or_else(|| RunError::config("sweep needs a field name (e.g. pico.density)"))?;
    let grid = sweep.values().map_err(RunError::config)?;
    let mc = manifest.mode.montecarlo();

    let analytic = manifest.mode.analytic();
    let value_name = match quantity {
        Quantity::Outage => "outage",
        Quantity::Capacity => "capacity_bps",
        _ => unreachable!(),
    };
    write!(csv, "scenario,{field}").unwrap();
    if analytic {
        write!(csv, ",{value_name}_analytic").unwrap();
    }
    if mc {
        write!(csv, ",{value_name}_mc").unwrap();
    }
    csv.push('\n');

    for (label, cfg) in variants {
        write_variant_summary(summary, label, cfg, manifest)?;
        for &value in &grid {
            let mut point = cfg.clone();
            point.set_field(&field, value).map_err(RunError::config)?;
            let (sir, _) = link_metrics(&point)?;
            write!(csv, "{label},{}", fmt_value(value)).unwrap();
            if analytic {
                let closed_form = match quantity {
                    Quantity::Outage => outage_probability(&sir, point.metrics.gamma_th_db)
                        .map_err(RunError::from_lib)?,
                    Quantity::Capacity => average_capacity(
                        &sir,
                        &CapacityConfig::new(
                            point.metrics.bandwidth_hz,
                            point.metrics.quadrature_order,
                        )
                        .map_err(RunError::from_lib)?,
                    )
                    .map_err(RunError::from_lib)?,
                    _ => unreachable!(),
                };
                write!(csv, ",{}", fmt_value(closed_form)).unwrap();
            }
            if mc {
                let samples = simulate(&point, manifest)?;
                let empirical = match quantity {
                    Quantity::Outage => {
                        let th = dbm_to_mw(point.metrics.gamma_th_db);
                        samples
                            .sir
                            .samples()
                            .iter()
                            .filter(|&&s| s < th)
                            .count() as f64
                            / samples.sir.len() as f64
                    }
                    Quantity::Capacity => {
                        point.metrics.bandwidth_hz
                            * samples
                                .sir
                                .samples()
                                .iter()
                                .map(|s| s.ln_1p() / core::f64::consts::LN_2)
                                .sum::<f64>()
                            / samples.sir.len() as f64
                    }
                    _ => unreachable!(),
                };
                write!(csv, ",{}", fmt_value(empirical)).unwrap();
            }
            csv.push('\n');
        }
        writeln!(summary, "  swept {field} over {} points", grid.len()).unwrap();
    }
    Ok(())
}

fn simulate(cfg: &Config, manifest: &RunManifest) -> Result<ScenarioSamples, RunError> {
    let spec = cfg.to_scenario().map_err(RunError::config)?;
    simulate_scenario(&SimConfig {
        replicates: cfg.mc_samples,
        seed: manifest.seed,
        scenario: spec,
    })
    .map_err(RunError::from_lib)
}

/// Per-variant stdout block: component cumulants, fits, and metrics.
fn write_variant_summary(
    out: &mut String,
    label: &str,
    cfg: &Config,
    _manifest: &RunManifest,
) -> Result<(), RunError> {
    let (sir, budget) = link_metrics(cfg)?;
    writeln!(out, "== {label} ==").unwrap();
    for (source, k) in &budget.interference_components {
        writeln!(
            out,
            "  interference {:<16} kappa1..4 = {:.4e}, {:.4e}, {:.4e}, {:.4e}",
            source.label(),
            k.k(1),
            k.k(2),
            k.k(3),
            k.k(4)
        )
        .unwrap();
    }
    let k = &budget.interference_total;
    writeln!(
        out,
        "  interference total            kappa1..4 = {:.4e}, {:.4e}, {:.4e}, {:.4e}",
        k.k(1),
        k.k(2),
        k.k(3),
        k.k(4)
    )
    .unwrap();
    let show_fit = |name: &str, ln: &LogNormalParams| {
        format!(
            "  {name}: mu = {:.4} nat, sigma = {:.4} nat (median {:.2} dBm)",
            ln.mu,
            ln.sigma,
            nat_to_db(ln.mu)
        )
    };
    writeln!(out, "{}", show_fit("signal fit      ", &budget.signal)).unwrap();
    writeln!(out, "{}", show_fit("interference fit", &budget.interference)).unwrap();
    let outage = outage_probability(&sir, cfg.metrics.gamma_th_db).map_err(RunError::from_lib)?;
    let capacity = average_capacity(
        &sir,
        &CapacityConfig::new(cfg.metrics.bandwidth_hz, cfg.metrics.quadrature_order)
            .map_err(RunError::from_lib)?,
    )
    .map_err(RunError::from_lib)?;
    writeln!(
        out,
        "  SIR: mu_gamma = {:.4} nat ({:.2} dB median), sigma_gamma = {:.4} nat",
        sir.mu_gamma,
        sir.median_db(),
        sir.sigma_gamma
    )
    .unwrap();
    writeln!(
        out,
        "  outage @ {:.1} dB = {outage:.4}; capacity = {capacity:.4} bit/s (W = {} Hz)",
        cfg.metrics.gamma_th_db, cfg.metrics.bandwidth_hz
    )
    .unwrap();
    Ok(())
}
