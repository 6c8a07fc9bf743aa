//! Propagation model: unbounded path loss and composite shadowed fading
//! (Nakagami-m squared envelope with log-normally shadowed mean power),
//! plus its single log-normal equivalent.

use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

use crate::error::{invalid, Result};
use crate::lognormal::LogNormalParams;
use crate::specfun::{digamma, trigamma_hurwitz};
use crate::units::XI;

/// Scale factor used when mapping the Gamma-part corrections of the
/// single-log-normal reduction onto the dB scale.
///
/// Deriving `E[ln X]` and `Var[ln X]` of the composite directly gives the
/// factor `10/ln10` on `ψ(m) - ln m` and its square on `ζ(2, m)`, and
/// sampling the composite confirms it (see the Monte Carlo validation
/// suite), so that is the default. The alternative convention that
/// multiplies by `ξ = ln10/10` instead is kept selectable for comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HoScale {
    #[default]
    Reciprocal,
    XiScaled,
}

/// Channel parameters: path-loss exponent, Nakagami shape, and the shadowing
/// moments of the mean squared envelope (in dB).
///
/// `alpha > 2` is required for finite cumulants over a wide observation
/// region. `m = f64::INFINITY` is accepted and means no multipath fading
/// (the composite degenerates to pure shadowing).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub alpha: f64,
    pub m: f64,
    pub mu_omega_db: f64,
    pub sigma_omega_db: f64,
    pub ho_scale: HoScale,
}

impl ChannelParams {
    pub fn new(alpha: f64, m: f64, mu_omega_db: f64, sigma_omega_db: f64) -> Result<Self> {
        if !(alpha > 2.0) || !alpha.is_finite() {
            return Err(invalid(format!(
                "path-loss exponent must satisfy alpha > 2, got {alpha}"
            )));
        }
        if !(m >= 0.5) {
            return Err(invalid(format!("Nakagami shape must be >= 0.5, got {m}")));
        }
        if !mu_omega_db.is_finite() {
            return Err(invalid("mu_omega_dB must be finite"));
        }
        if !(sigma_omega_db >= 0.0) || !sigma_omega_db.is_finite() {
            return Err(invalid(format!(
                "sigma_omega_dB must be finite and >= 0, got {sigma_omega_db}"
            )));
        }
        Ok(Self {
            alpha,
            m,
            mu_omega_db,
            sigma_omega_db,
            ho_scale: HoScale::default(),
        })
    }

    pub fn with_ho_scale(mut self, scale: HoScale) -> Self {
        self.ho_scale = scale;
        self
    }

    /// The constant `ξ = ln(10)/10`.
    pub fn xi() -> f64 {
        XI
    }
}

/// Unbounded path loss `l(r) = r^{-alpha}`, as a linear gain.
pub fn path_loss(r: f64, alpha: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(invalid(format!(
            "path loss is undefined for r <= 0 (got r = {r})"
        )));
    }
    Ok(r.powf(-alpha))
}

/// Single log-normal equivalent of the composite Gamma–log-normal fading,
/// in natural-log-of-linear scale.
///
/// Default (reciprocal) scale: `mu = (ψ(m) - ln m) + ξ mu_Ω`,
/// `sigma² = ζ(2,m) + ξ² sigma_Ω²`.
pub fn ho_ln_equivalent(ch: &ChannelParams) -> LogNormalParams {
    let (offset_nat, var_nat) = if ch.m.is_infinite() {
        (0.0, 0.0)
    } else {
        // m >= 0.5 was validated, so these cannot fail.
        let psi = digamma(ch.m).expect("validated m");
        let zeta2 = trigamma_hurwitz(ch.m).expect("validated m");
        (psi - ch.m.ln(), zeta2)
    };
    let (mu, var) = match ch.ho_scale {
        HoScale::Reciprocal => (
            offset_nat + XI * ch.mu_omega_db,
            var_nat + XI * XI * ch.sigma_omega_db * ch.sigma_omega_db,
        ),
        HoScale::XiScaled => {
            // alternative convention: dB-scale corrections ξ(ψ(m) - ln m)
            // and ξ² ζ(2, m), then the dB result converted to natural scale
            let mu_db = XI * offset_nat + ch.mu_omega_db;
            let var_db = XI * XI * var_nat + ch.sigma_omega_db * ch.sigma_omega_db;
            (XI * mu_db, XI * XI * var_db)
        }
    };
    LogNormalParams {
        mu,
        sigma: var.sqrt(),
    }
}

/// One draw of the composite shadowed fading: `Ω ~ LogNormal` in dB terms,
/// then `X ~ Gamma(m, Ω/m)`, so `E[X | Ω] = Ω`.
pub fn sample_composite_fading<R: Rng + ?Sized>(ch: &ChannelParams, rng: &mut R) -> f64 {
    let z: f64 = StandardNormal.sample(rng);
    let omega = (XI * ch.mu_omega_db + XI * ch.sigma_omega_db * z).exp();
    if ch.m.is_infinite() {
        return omega;
    }
    Gamma::new(ch.m, omega / ch.m)
        .expect("validated shape and positive scale")
        .sample(rng)
}
