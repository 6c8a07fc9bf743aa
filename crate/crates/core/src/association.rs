//! Biased cell association: the probability that the tagged user hands over
//! to the target picocell under a range-expansion bias and hysteresis.
//!
//! The event is `Y^M < Y^P ⊕ δ` with `δ = ΔREB - Ω` in dB. How `⊕` acts on
//! the linear powers is selectable: the default multiplicative reading scales
//! `Y^P` by `10^{δ/10}` (a dB offset on a received power), the additive
//! reading adds a constant to the linear power. Both have a Gauss-Hermite
//! evaluation and a Monte Carlo oracle; the multiplicative mode also has an
//! exact closed form through the log-normal quotient.

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Result};
use crate::lognormal::LogNormalParams;
use crate::specfun::{gauss_hermite, q_function_unchecked};
use crate::units::db_to_nat;

/// How the dB bias `δ` is applied to the picocell's linear received power.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BiasMode {
    /// `Y^P · 10^{δ/10}`: the conventional reading of a dB bias.
    #[default]
    MultiplicativeLinear,
    /// `Y^P + c` with `c = sign(δ)(10^{|δ|/10} - 1)` mW: a signed additive
    /// offset that vanishes at `δ = 0` and saturates the handover
    /// probability at both extremes.
    AdditiveLinear,
}

/// Range-expansion bias `ΔREB` and handover hysteresis `Ω`, both in dB.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociationPolicy {
    pub reb_bias_db: f64,
    pub hysteresis_db: f64,
    pub bias_mode: BiasMode,
}

impl AssociationPolicy {
    pub fn new(reb_bias_db: f64, hysteresis_db: f64, bias_mode: BiasMode) -> Result<Self> {
        if !(reb_bias_db >= 0.0) || !reb_bias_db.is_finite() {
            return Err(invalid(format!(
                "reb_bias_dB must be finite and >= 0, got {reb_bias_db}"
            )));
        }
        if !(hysteresis_db >= 0.0) || !hysteresis_db.is_finite() {
            return Err(invalid(format!(
                "hysteresis_dB must be finite and >= 0, got {hysteresis_db}"
            )));
        }
        Ok(Self {
            reb_bias_db,
            hysteresis_db,
            bias_mode,
        })
    }

    /// Net bias `δ = ΔREB - Ω` in dB.
    pub fn delta_db(&self) -> f64 {
        self.reb_bias_db - self.hysteresis_db
    }

    /// The standard (unbiased) handover criterion, `δ = -Ω`.
    pub fn standard(&self) -> Self {
        Self {
            reb_bias_db: 0.0,
            ..*self
        }
    }
}

/// Signed linear offset for the additive mode, in mW.
fn additive_offset_mw(delta_db: f64) -> f64 {
    delta_db.signum() * (10f64.powf(delta_db.abs() / 10.0) - 1.0)
}

fn validate_pair(macro_ln: &LogNormalParams, pico_ln: &LogNormalParams) -> Result<()> {
    if macro_ln.sigma <= 0.0 || pico_ln.sigma <= 0.0 {
        return Err(invalid(
            "handover probability needs nondegenerate log-normal powers (sigma > 0)",
        ));
    }
    Ok(())
}

/// Quadrature of `Pr[A < B + c]` for log-normal `A`, `B` and `c >= 0`:
/// `Σ_k ω_k/(2√π) · erfc[(mu_A - ln(c + e^{mu_B + √2 η_k σ_B}))/(√2 σ_A)]`.
fn prob_less_than_offset(
    a: &LogNormalParams,
    b: &LogNormalParams,
    offset_mw: f64,
    quadrature_order: usize,
) -> Result<f64> {
    let rule = gauss_hermite(quadrature_order)?;
    let sqrt2 = core::f64::consts::SQRT_2;
    let total = rule.integrate(|eta| {
        let rival = offset_mw + (b.mu + sqrt2 * b.sigma * eta).exp();
        2.0 * q_function_unchecked((a.mu - rival.ln()) / a.sigma)
    });
    Ok((total / (2.0 * core::f64::consts::PI.sqrt())).clamp(0.0, 1.0))
}

/// Handover probability `Pr[Y^M < Y^P ⊕ δ]` by Gauss-Hermite quadrature of
/// order `k`, with the bias folded into `mu_P` (multiplicative) or into an
/// additive linear constant (additive).
///
/// A negative additive offset would put a kink in the integrand where
/// `Y^P + c` crosses zero, so that case is evaluated through the mirrored
/// event `1 - Pr[Y^P < Y^M + |c|]`, which keeps the offset positive and the
/// integrand smooth.
pub fn handover_probability(
    macro_ln: &LogNormalParams,
    pico_ln: &LogNormalParams,
    policy: &AssociationPolicy,
    quadrature_order: usize,
) -> Result<f64> {
    validate_pair(macro_ln, pico_ln)?;
    match policy.bias_mode {
        BiasMode::MultiplicativeLinear => {
            let biased = LogNormalParams {
                mu: pico_ln.mu + db_to_nat(policy.delta_db()),
                sigma: pico_ln.sigma,
            };
            prob_less_than_offset(macro_ln, &biased, 0.0, quadrature_order)
        }
        BiasMode::AdditiveLinear => {
            let c = additive_offset_mw(policy.delta_db());
            if c >= 0.0 {
                prob_less_than_offset(macro_ln, pico_ln, c, quadrature_order)
            } else {
                Ok(1.0 - prob_less_than_offset(pico_ln, macro_ln, -c, quadrature_order)?)
            }
        }
    }
}

/// Closed form for the multiplicative mode through the log-normal quotient:
/// `Q[(mu_M - mu_P - δ_nat)/√(σ_M² + σ_P²)]`.
pub fn handover_probability_closed_form(
    macro_ln: &LogNormalParams,
    pico_ln: &LogNormalParams,
    policy: &AssociationPolicy,
) -> Result<f64> {
    validate_pair(macro_ln, pico_ln)?;
    if policy.bias_mode != BiasMode::MultiplicativeLinear {
        return Err(invalid(
            "closed-form handover probability exists only for the multiplicative bias mode",
        ));
    }
    let spread = (macro_ln.sigma * macro_ln.sigma + pico_ln.sigma * pico_ln.sigma).sqrt();
    let gap = macro_ln.mu - pico_ln.mu - db_to_nat(policy.delta_db());
    Ok(q_function_unchecked(gap / spread))
}

/// Monte Carlo estimate of the handover probability with its standard error.
pub fn handover_probability_mc<R: Rng + ?Sized>(
    macro_ln: &LogNormalParams,
    pico_ln: &LogNormalParams,
    policy: &AssociationPolicy,
    samples: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    validate_pair(macro_ln, pico_ln)?;
    if samples < 10_000 {
        return Err(invalid(format!(
            "need at least 10_000 samples for a usable estimate, got {samples}"
        )));
    }
    let (mu_p, offset_mw) = match policy.bias_mode {
        BiasMode::MultiplicativeLinear => (pico_ln.mu + db_to_nat(policy.delta_db()), 0.0),
        BiasMode::AdditiveLinear => (pico_ln.mu, additive_offset_mw(policy.delta_db())),
    };
    let mut hits = 0usize;
    for _ in 0..samples {
        let zm: f64 = StandardNormal.sample(rng);
        let zp: f64 = StandardNormal.sample(rng);
        let y_macro = (macro_ln.mu + macro_ln.sigma * zm).exp();
        let y_pico = (mu_p + pico_ln.sigma * zp).exp() + offset_mw;
        if y_macro < y_pico {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let se = (p * (1.0 - p) / samples as f64).sqrt();
    Ok((p, se))
}
