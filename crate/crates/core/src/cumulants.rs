//! Cumulants of received power and aggregate co-channel interference.
//!
//! Single-transmitter cumulants come from the raw moments of
//! `Y = p r^{-α} X` over an annulus (Faà di Bruno over the normalized
//! characteristic function); Poisson-field aggregates come from Campbell's
//! theorem. The detection threshold splits the field into a coordinated
//! region and a remainder whose cumulants are partial-moment band sums.

use crate::channel::{ho_ln_equivalent, ChannelParams};
use crate::error::{invalid, Error, Result};
use crate::lognormal::{partial_moment, CumulantVec, LogNormalParams};
use crate::specfun::cumulants_from_raw_moments;
use crate::units::dbm_to_mw;

/// Largest cumulant order the closed forms are evaluated at.
pub const MAX_CUMULANT_ORDER: usize = 8;

/// Default number of cumulants: two feed the log-normal fit, two more serve
/// as skewness/kurtosis diagnostics.
pub const DEFAULT_CUMULANT_ORDER: usize = 4;

/// Annular observation region around the tagged receiver, radii in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnularRegion {
    pub r_min: f64,
    pub r_max: f64,
}

impl AnnularRegion {
    pub fn new(r_min: f64, r_max: f64) -> Result<Self> {
        if !(r_min > 0.0) || !(r_max > r_min) || !r_max.is_finite() {
            return Err(invalid(format!(
                "annular region needs 0 < r_min < r_max < inf, got ({r_min}, {r_max})"
            )));
        }
        Ok(Self { r_min, r_max })
    }

    pub fn area(&self) -> f64 {
        core::f64::consts::PI * (self.r_max * self.r_max - self.r_min * self.r_min)
    }

    /// Density of the distance from the tagged receiver to a uniformly
    /// placed point: `f_R(r) = 2r / (r_max² - r_min²)`.
    pub fn radial_density(&self, r: f64) -> f64 {
        if r < self.r_min || r > self.r_max {
            0.0
        } else {
            2.0 * r / (self.r_max * self.r_max - self.r_min * self.r_min)
        }
    }
}

/// One tier of transmitters: data power `p`, pilot power `p_b`, node density
/// `λ` (zero for a single deterministic transmitter), and the power backoff
/// `Δp` applied by coordinated nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TierConfig {
    pub tx_power_dbm: f64,
    pub pilot_power_dbm: f64,
    pub density: f64,
    pub power_backoff_db: f64,
}

impl TierConfig {
    pub fn new(
        tx_power_dbm: f64,
        pilot_power_dbm: f64,
        density: f64,
        power_backoff_db: f64,
    ) -> Result<Self> {
        if !tx_power_dbm.is_finite() || !pilot_power_dbm.is_finite() {
            return Err(invalid("tier powers must be finite"));
        }
        if !(density >= 0.0) || !density.is_finite() {
            return Err(invalid(format!(
                "tier density must be finite and >= 0, got {density}"
            )));
        }
        if !(power_backoff_db >= 0.0) {
            return Err(invalid(format!(
                "power backoff must be >= 0 dB, got {power_backoff_db}"
            )));
        }
        Ok(Self {
            tx_power_dbm,
            pilot_power_dbm,
            density,
            power_backoff_db,
        })
    }

    pub fn tx_power_mw(&self) -> f64 {
        dbm_to_mw(self.tx_power_dbm)
    }

    pub fn pilot_power_mw(&self) -> f64 {
        dbm_to_mw(self.pilot_power_dbm)
    }

    /// Reduced power `p' = p - Δp` used inside the coordinated region.
    pub fn backed_off_power_mw(&self) -> f64 {
        dbm_to_mw(self.tx_power_dbm - self.power_backoff_db)
    }
}

fn check_order(n_max: usize) -> Result<()> {
    if !(1..=MAX_CUMULANT_ORDER).contains(&n_max) {
        return Err(invalid(format!(
            "cumulant order must be in 1..={MAX_CUMULANT_ORDER}, got {n_max}"
        )));
    }
    Ok(())
}

/// `∫_{a}^{b} r^{1-nα} dr = (a^{2-nα} - b^{2-nα}) / (nα - 2)`; `b` may be
/// infinite. Rejects the `nα = 2` singularity.
fn radial_moment(a: f64, b: f64, alpha: f64, n: usize) -> Result<f64> {
    let exponent = n as f64 * alpha - 2.0;
    if exponent.abs() < 1e-12 {
        return Err(Error::SingularExponent { n, alpha });
    }
    let upper = if b.is_infinite() && exponent > 0.0 {
        0.0
    } else {
        b.powf(-exponent)
    };
    Ok((a.powf(-exponent) - upper) / exponent)
}

/// Cumulants of the power received from one transmitter placed uniformly in
/// the annulus, `Y = p R^{-α} X`, with explicit fading law.
///
/// Raw moments are `m_n = p^n · [2/(r_max²-r_min²)] · ∫ r^{1-nα} dr · E[X^n]`
/// and cumulants follow by the moments-to-cumulants expansion.
pub fn single_tx_cumulants_with_fading(
    region: &AnnularRegion,
    p_mw: f64,
    alpha: f64,
    fading: &LogNormalParams,
    n_max: usize,
) -> Result<CumulantVec> {
    check_order(n_max)?;
    let norm = 2.0 / (region.r_max * region.r_max - region.r_min * region.r_min);
    let mut moments = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let geom = radial_moment(region.r_min, region.r_max, alpha, n)?;
        moments.push(p_mw.powi(n as i32) * norm * geom * fading.raw_moment(n as f64));
    }
    CumulantVec::new(cumulants_from_raw_moments(&moments)?)
}

/// [`single_tx_cumulants_with_fading`] with the fading taken from the
/// channel's single log-normal equivalent.
pub fn single_tx_cumulants(
    region: &AnnularRegion,
    p_dbm: f64,
    ch: &ChannelParams,
    n_max: usize,
) -> Result<CumulantVec> {
    let fading = ho_ln_equivalent(ch);
    single_tx_cumulants_with_fading(region, dbm_to_mw(p_dbm), ch.alpha, &fading, n_max)
}

/// Cumulants of `Y = p d^{-α} X` for a transmitter at a fixed distance.
pub fn fixed_distance_cumulants(
    distance_m: f64,
    p_dbm: f64,
    ch: &ChannelParams,
    n_max: usize,
) -> Result<CumulantVec> {
    check_order(n_max)?;
    if !(distance_m > 0.0) || !distance_m.is_finite() {
        return Err(invalid(format!(
            "fixed distance must be positive and finite, got {distance_m}"
        )));
    }
    let fading = ho_ln_equivalent(ch);
    let base = dbm_to_mw(p_dbm) * distance_m.powf(-ch.alpha);
    let moments: Vec<f64> = (1..=n_max)
        .map(|n| base.powi(n as i32) * fading.raw_moment(n as f64))
        .collect();
    CumulantVec::new(cumulants_from_raw_moments(&moments)?)
}

/// Aggregate-interference cumulants of a Poisson field over the annulus:
/// `κ_n = 2πλ p^n (r_min^{2-nα} - r_max^{2-nα})/(nα-2) · E[X^n]`.
pub fn ppp_aggregate_cumulants_with_fading(
    region: &AnnularRegion,
    p_mw: f64,
    density: f64,
    alpha: f64,
    fading: &LogNormalParams,
    n_max: usize,
) -> Result<CumulantVec> {
    check_order(n_max)?;
    if !(density >= 0.0) {
        return Err(invalid(format!("density must be >= 0, got {density}")));
    }
    let two_pi_lambda = 2.0 * core::f64::consts::PI * density;
    let mut values = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let geom = radial_moment(region.r_min, region.r_max, alpha, n)?;
        values.push(two_pi_lambda * p_mw.powi(n as i32) * geom * fading.raw_moment(n as f64));
    }
    CumulantVec::new(values)
}

/// [`ppp_aggregate_cumulants_with_fading`] with the channel's log-normal
/// equivalent fading.
pub fn ppp_aggregate_cumulants(
    region: &AnnularRegion,
    tier: &TierConfig,
    ch: &ChannelParams,
    n_max: usize,
) -> Result<CumulantVec> {
    let fading = ho_ln_equivalent(ch);
    ppp_aggregate_cumulants_with_fading(
        region,
        tier.tx_power_mw(),
        tier.density,
        ch.alpha,
        &fading,
        n_max,
    )
}

/// Cumulant additivity across independent tiers.
pub fn combine_tiers(a: &CumulantVec, b: &CumulantVec) -> Result<CumulantVec> {
    a.add(b)
}

/// Shared band decomposition of the threshold-split field.
///
/// A node at distance `r` with fading `x` is detected when
/// `p_b r^{-α} x >= ρ_th`, i.e. `x >= ϱ_th r^α` with `ϱ_th = ρ_th / p_b`.
/// The fading bands are delimited by `ϱ_m = ϱ_th r_min^α` and
/// `ϱ_M = ϱ_th r_max^α`.
struct ThresholdBands {
    rho_norm: f64,
    rho_lo: f64,
    rho_hi: f64,
}

impl ThresholdBands {
    fn new(region: &AnnularRegion, tier: &TierConfig, alpha: f64, rho_th_dbm: f64) -> Result<Self> {
        if rho_th_dbm.is_nan() {
            return Err(invalid("rho_th_dBm must not be NaN"));
        }
        let rho_norm = dbm_to_mw(rho_th_dbm) / tier.pilot_power_mw();
        Ok(Self {
            rho_norm,
            rho_lo: rho_norm * region.r_min.powf(alpha),
            rho_hi: rho_norm * region.r_max.powf(alpha),
        })
    }
}

/// Cumulants of the interference from detected (coordinated) picocells,
/// transmitting at the backed-off power `p' = p - Δp`.
pub fn r1_cumulants(
    region: &AnnularRegion,
    tier: &TierConfig,
    ch: &ChannelParams,
    rho_th_dbm: f64,
    n_max: usize,
) -> Result<CumulantVec> {
    check_order(n_max)?;
    let fading = ho_ln_equivalent(ch);
    let bands = ThresholdBands::new(region, tier, ch.alpha, rho_th_dbm)?;
    let p = tier.backed_off_power_mw();
    let two_pi_lambda = 2.0 * core::f64::consts::PI * tier.density;
    let alpha = ch.alpha;
    let mut values = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let nf = n as f64;
        let denom = nf * alpha - 2.0;
        if denom.abs() < 1e-12 {
            return Err(Error::SingularExponent { n, alpha });
        }
        let full_geom = region.r_min.powf(-denom) - region.r_max.powf(-denom);
        let tail_hi = partial_moment(&fading, nf, bands.rho_hi, f64::INFINITY)?;
        let band_n = partial_moment(&fading, nf, bands.rho_lo, bands.rho_hi)?;
        let band_frac = partial_moment(&fading, 2.0 / alpha, bands.rho_lo, bands.rho_hi)?;
        let threshold_term = if band_frac == 0.0 {
            0.0
        } else {
            bands.rho_norm.powf(nf - 2.0 / alpha) * band_frac
        };
        let bracket =
            full_geom * tail_hi + region.r_min.powf(2.0 - nf * alpha) * band_n - threshold_term;
        values.push(two_pi_lambda * p.powi(n as i32) / denom * bracket);
    }
    CumulantVec::new(values)
}

/// Cumulants of the interference from undetected picocells (the remainder of
/// the field), transmitting at full power.
pub fn r2_cumulants(
    region: &AnnularRegion,
    tier: &TierConfig,
    ch: &ChannelParams,
    rho_th_dbm: f64,
    n_max: usize,
) -> Result<CumulantVec> {
    check_order(n_max)?;
    let fading = ho_ln_equivalent(ch);
    let bands = ThresholdBands::new(region, tier, ch.alpha, rho_th_dbm)?;
    let p = tier.tx_power_mw();
    let two_pi_lambda = 2.0 * core::f64::consts::PI * tier.density;
    let alpha = ch.alpha;
    let mut values = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let nf = n as f64;
        let denom = nf * alpha - 2.0;
        if denom.abs() < 1e-12 {
            return Err(Error::SingularExponent { n, alpha });
        }
        let full_geom = region.r_min.powf(-denom) - region.r_max.powf(-denom);
        let tail_lo = partial_moment(&fading, nf, 0.0, bands.rho_lo)?;
        let band_n = partial_moment(&fading, nf, bands.rho_lo, bands.rho_hi)?;
        let band_frac = partial_moment(&fading, 2.0 / alpha, bands.rho_lo, bands.rho_hi)?;
        let threshold_term = if band_frac == 0.0 {
            0.0
        } else {
            bands.rho_norm.powf(nf - 2.0 / alpha) * band_frac
        };
        let bracket =
            full_geom * tail_lo + threshold_term - region.r_max.powf(2.0 - nf * alpha) * band_n;
        values.push(two_pi_lambda * p.powi(n as i32) / denom * bracket);
    }
    CumulantVec::new(values)
}

/// Fraction of the mean aggregate interference contributed by transmitters
/// beyond `r_max`: `κ₁` over `(r_max, ∞)` divided by `κ₁` over `(r_min, ∞)`.
pub fn neglected_tail_fraction(
    region: &AnnularRegion,
    ch: &ChannelParams,
    tier: &TierConfig,
) -> Result<f64> {
    let fading = ho_ln_equivalent(ch);
    let two_pi_lambda = 2.0 * core::f64::consts::PI * tier.density;
    let scale = two_pi_lambda * tier.tx_power_mw() * fading.raw_moment(1.0);
    let beyond = scale * radial_moment(region.r_max, f64::INFINITY, ch.alpha, 1)?;
    let total = scale * radial_moment(region.r_min, f64::INFINITY, ch.alpha, 1)?;
    Ok(beyond / total)
}
