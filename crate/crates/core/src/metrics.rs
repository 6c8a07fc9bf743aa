//! Terminal performance figures of the tagged link: outage probability and
//! average channel capacity of the log-normal SIR.
//!
//! The aggregate interference is not Gaussian, so the Shannon-formula
//! capacity reported here is a lower bound on the ergodic rate. Thermal
//! noise is omitted: the scenarios are interference limited.

use crate::error::{invalid, Result};
use crate::lognormal::{sir_combine, LogNormalParams};
use crate::specfun::{gauss_hermite, q_function_unchecked};
use crate::units::db_to_nat;

/// SIR distribution of the tagged receiver in natural-log scale:
/// `ln Γ ~ Normal(mu_gamma, sigma_gamma²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SirDistribution {
    pub mu_gamma: f64,
    pub sigma_gamma: f64,
}

impl SirDistribution {
    pub fn new(mu_gamma: f64, sigma_gamma: f64) -> Result<Self> {
        if !mu_gamma.is_finite() || !(sigma_gamma >= 0.0) || !sigma_gamma.is_finite() {
            return Err(invalid(format!(
                "SIR parameters must be finite with sigma >= 0, got ({mu_gamma}, {sigma_gamma})"
            )));
        }
        Ok(Self {
            mu_gamma,
            sigma_gamma,
        })
    }

    /// SIR of a log-normal signal against log-normal interference.
    pub fn from_link(signal: &LogNormalParams, interference: &LogNormalParams) -> Self {
        let quotient = sir_combine(signal, interference);
        Self {
            mu_gamma: quotient.mu,
            sigma_gamma: quotient.sigma,
        }
    }

    /// Median SIR in dB.
    pub fn median_db(&self) -> f64 {
        crate::units::nat_to_db(self.mu_gamma)
    }
}

/// Bandwidth and quadrature order for the capacity evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityConfig {
    pub bandwidth_hz: f64,
    pub quadrature_order: usize,
}

impl CapacityConfig {
    pub fn new(bandwidth_hz: f64, quadrature_order: usize) -> Result<Self> {
        if !(bandwidth_hz > 0.0) || !bandwidth_hz.is_finite() {
            return Err(invalid(format!(
                "bandwidth must be positive and finite, got {bandwidth_hz}"
            )));
        }
        if quadrature_order < 8 {
            return Err(invalid(format!(
                "capacity quadrature order must be >= 8, got {quadrature_order}"
            )));
        }
        Ok(Self {
            bandwidth_hz,
            quadrature_order,
        })
    }
}

impl Default for CapacityConfig {
    fn default() -> Self {
        Self {
            bandwidth_hz: 1.0,
            quadrature_order: 32,
        }
    }
}

/// Outage probability `Pr[Γ < γ_th] = Q[(mu_Γ - γ_th)/σ_Γ]` with the
/// threshold given in dB.
///
/// A degenerate SIR (`σ_Γ = 0`) yields the step function 0/1.
pub fn outage_probability(sir: &SirDistribution, gamma_th_db: f64) -> Result<f64> {
    if !gamma_th_db.is_finite() {
        return Err(invalid("outage threshold must be finite"));
    }
    let gamma_nat = db_to_nat(gamma_th_db);
    if sir.sigma_gamma == 0.0 {
        return Ok(if sir.mu_gamma < gamma_nat { 1.0 } else { 0.0 });
    }
    Ok(q_function_unchecked(
        (sir.mu_gamma - gamma_nat) / sir.sigma_gamma,
    ))
}

/// Average channel capacity `W · E[log₂(1 + Γ)]` in bit/s, by Gauss-Hermite
/// quadrature with the substitution `η = (ln γ - mu)/(√2 σ)`:
/// `W Σ_k ω_k/√π · log₂(1 + exp(√2 σ η_k + mu))`.
pub fn average_capacity(sir: &SirDistribution, cfg: &CapacityConfig) -> Result<f64> {
    if sir.sigma_gamma == 0.0 {
        return Ok(cfg.bandwidth_hz * sir.mu_gamma.exp().ln_1p() / core::f64::consts::LN_2);
    }
    let rule = gauss_hermite(cfg.quadrature_order)?;
    let sqrt2 = core::f64::consts::SQRT_2;
    let total = rule.integrate(|eta| {
        (sqrt2 * sir.sigma_gamma * eta + sir.mu_gamma).exp().ln_1p() / core::f64::consts::LN_2
    });
    Ok(cfg.bandwidth_hz * total / core::f64::consts::PI.sqrt())
}

/// Capacity per hertz, `E[log₂(1 + Γ)]` in bit/s/Hz.
pub fn spectral_efficiency(sir: &SirDistribution, quadrature_order: usize) -> Result<f64> {
    average_capacity(
        sir,
        &CapacityConfig {
            bandwidth_hz: 1.0,
            quadrature_order,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::units::XI;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn outage_at_median_is_half() {
        let sir = SirDistribution::new(0.7, 1.3).unwrap();
        let p = outage_probability(&sir, 0.7 / XI).unwrap();
        assert_abs_diff_eq!(p, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn outage_one_sigma_below_median() {
        let sir = SirDistribution::new(1.0, 0.5).unwrap();
        // gamma_th one sigma below mu: Q(1) ≈ 0.1587
        let p = outage_probability(&sir, (1.0 - 0.5) / XI).unwrap();
        assert_abs_diff_eq!(p, 0.158_655_253_931_457, epsilon = 1e-12);
    }

    #[test]
    fn outage_shift_invariance() {
        let a = SirDistribution::new(0.4, 1.1).unwrap();
        let b = SirDistribution::new(0.4 + 2.0, 1.1).unwrap();
        let pa = outage_probability(&a, -3.0).unwrap();
        let pb = outage_probability(&b, -3.0 + 2.0 / XI).unwrap();
        assert_abs_diff_eq!(pa, pb, epsilon = 1e-12);
    }

    #[test]
    fn outage_degenerate_step() {
        let sir = SirDistribution::new(0.0, 0.0).unwrap();
        assert_eq!(outage_probability(&sir, -1.0).unwrap(), 0.0);
        assert_eq!(outage_probability(&sir, 1.0).unwrap(), 1.0);
        assert_eq!(outage_probability(&sir, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn capacity_degenerate_sir() {
        let sir = SirDistribution::new(1.2, 0.0).unwrap();
        let cfg = CapacityConfig::new(5e6, 32).unwrap();
        let want = 5e6 * (1.0 + 1.2f64.exp()).log2();
        assert_relative_eq!(average_capacity(&sir, &cfg).unwrap(), want, max_relative = 1e-14);
    }

    #[test]
    fn capacity_vanishes_for_hopeless_sir() {
        let sir = SirDistribution::new(-60.0, 1.0).unwrap();
        let c = spectral_efficiency(&sir, 32).unwrap();
        assert!(c < 1e-20, "capacity = {c}");
    }

    #[test]
    fn capacity_monotone_in_median_sir() {
        let mut prev = 0.0;
        for mu in [-2.0, -1.0, 0.0, 1.0, 2.0] {
            let sir = SirDistribution::new(mu, 1.5).unwrap();
            let c = spectral_efficiency(&sir, 32).unwrap();
            assert!(c > prev);
            prev = c;
        }
    }

    /// Composite Simpson integration of `log₂(1+e^t) φ((t-mu)/sigma)/sigma`
    /// over `t = ln γ` — the defining integral, independent of the quadrature.
    fn capacity_by_integration(sir: &SirDistribution) -> f64 {
        let (mu, sigma) = (sir.mu_gamma, sir.sigma_gamma);
        let f = |t: f64| -> f64 {
            let z = (t - mu) / sigma;
            t.exp().ln_1p() / core::f64::consts::LN_2 * (-0.5 * z * z).exp()
                / (sigma * (2.0 * core::f64::consts::PI).sqrt())
        };
        let (a, b) = (mu - 16.0 * sigma, mu + 16.0 * sigma);
        let panels = 400_000usize;
        let h = (b - a) / panels as f64;
        let mut acc = f(a) + f(b);
        for i in 1..panels {
            acc += if i % 2 == 1 { 4.0 } else { 2.0 } * f(a + i as f64 * h);
        }
        acc * h / 3.0
    }

    #[test]
    fn quadrature_matches_integration_oracle() {
        for mu in [-2.0, 0.0, 2.0] {
            for sigma in [0.5, 1.0, 2.0] {
                let sir = SirDistribution::new(mu, sigma).unwrap();
                let got = spectral_efficiency(&sir, 32).unwrap();
                let want = capacity_by_integration(&sir);
                assert_relative_eq!(got, want, max_relative = 1e-4);
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(CapacityConfig::new(0.0, 32).is_err());
        assert!(CapacityConfig::new(1e6, 4).is_err());
        assert!(SirDistribution::new(f64::NAN, 1.0).is_err());
    }
}
