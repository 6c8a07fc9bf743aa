//! Log-normal algebra: cumulant-matched fits, partial moments, and the
//! quotient combination that yields the SIR distribution.

use crate::error::{invalid, Error, Result};
use crate::specfun::{normal_cdf, q_function_unchecked};

/// Parameters of a log-normal random variable on the natural log of the
/// linear (mW) scale: `ln Y ~ Normal(mu, sigma²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogNormalParams {
    pub mu: f64,
    pub sigma: f64,
}

impl LogNormalParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !mu.is_finite() {
            return Err(invalid(format!("log-normal mu must be finite, got {mu}")));
        }
        if !(sigma >= 0.0) || !sigma.is_finite() {
            return Err(invalid(format!(
                "log-normal sigma must be finite and >= 0, got {sigma}"
            )));
        }
        Ok(Self { mu, sigma })
    }

    /// Raw moment `E[Y^n] = exp(n mu + n² sigma²/2)`, for real `n`.
    pub fn raw_moment(&self, n: f64) -> f64 {
        (n * self.mu + 0.5 * n * n * self.sigma * self.sigma).exp()
    }

    pub fn mean(&self) -> f64 {
        self.raw_moment(1.0)
    }

    pub fn variance(&self) -> f64 {
        let m1 = self.mean();
        ((self.sigma * self.sigma).exp_m1()) * m1 * m1
    }

    pub fn median(&self) -> f64 {
        self.mu.exp()
    }

    /// CDF of the linear-scale variable.
    pub fn cdf(&self, y: f64) -> f64 {
        if y <= 0.0 {
            return 0.0;
        }
        if self.sigma == 0.0 {
            return if y >= self.median() { 1.0 } else { 0.0 };
        }
        normal_cdf((y.ln() - self.mu) / self.sigma)
    }
}

/// Ordered cumulants `κ₁..κ_N` of a power random variable; the n-th entry
/// carries units of mW^n.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulantVec {
    values: Vec<f64>,
}

impl CumulantVec {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("cumulant vector cannot be empty"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(invalid("cumulant vector entries must be finite"));
        }
        Ok(Self { values })
    }

    /// All-zero vector, the identity for tier combination.
    pub fn zeros(order: usize) -> Self {
        Self {
            values: vec![0.0; order.max(1)],
        }
    }

    pub fn order(&self) -> usize {
        self.values.len()
    }

    /// 1-indexed cumulant: `k(1) = κ₁` is the mean, `k(2) = κ₂` the variance.
    pub fn k(&self, n: usize) -> f64 {
        self.values[n - 1]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Elementwise sum, valid for independent components.
    pub fn add(&self, other: &CumulantVec) -> Result<CumulantVec> {
        if self.order() != other.order() {
            return Err(Error::LengthMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(CumulantVec {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Skewness `κ₃ / κ₂^{3/2}` when at least three cumulants are present.
    pub fn skewness(&self) -> Option<f64> {
        if self.order() < 3 || self.k(2) <= 0.0 {
            return None;
        }
        Some(self.k(3) / self.k(2).powf(1.5))
    }
}

/// Log-normal parameters matching the first two cumulants:
/// `mu = ln(κ₁²/√(κ₁²+κ₂))`, `sigma² = ln(1 + κ₂/κ₁²)`.
pub fn ln_from_cumulants(c: &CumulantVec) -> Result<LogNormalParams> {
    let k1 = c.k(1);
    if !(k1 > 0.0) {
        return Err(Error::NonPositiveMean { kappa1: k1 });
    }
    if c.order() < 2 {
        return Err(invalid("log-normal fit needs at least two cumulants"));
    }
    let k2 = c.k(2);
    if k2 < 0.0 {
        return Err(invalid(format!("kappa2 must be >= 0, got {k2}")));
    }
    let ratio = k2 / (k1 * k1);
    let mu = (k1 * k1 / (k1 * k1 + k2).sqrt()).ln();
    let sigma = ratio.ln_1p().sqrt();
    LogNormalParams::new(mu, sigma)
}

/// First two cumulants implied by log-normal parameters (the fit inverse).
pub fn cumulants_from_ln(ln: &LogNormalParams) -> CumulantVec {
    CumulantVec {
        values: vec![ln.mean(), ln.variance()],
    }
}

/// Partial moment `∫_{lo}^{hi} y^n f_Y(y) dy` of a log-normal variable.
///
/// `n` may be fractional. Bounds at or below zero mean the lower end of the
/// support; `f64::INFINITY` means the upper end. Closed form:
/// `e^{n mu + n² sigma²/2} · (Q(ŷ_lo - n sigma) - Q(ŷ_hi - n sigma))` with
/// `ŷ = (ln y - mu)/sigma`.
pub fn partial_moment(ln: &LogNormalParams, n: f64, lo: f64, hi: f64) -> Result<f64> {
    if lo.is_nan() || hi.is_nan() || !n.is_finite() {
        return Err(invalid("partial_moment: NaN bound or non-finite order"));
    }
    if lo > hi {
        return Err(invalid(format!(
            "partial_moment: lo ({lo}) exceeds hi ({hi})"
        )));
    }
    if lo == hi {
        return Ok(0.0);
    }
    if ln.sigma == 0.0 {
        // Point mass at the median; counted on the half-open interval (lo, hi].
        let point = ln.median();
        return Ok(if lo < point && point <= hi {
            (n * ln.mu).exp()
        } else {
            0.0
        });
    }
    let standardized = |bound: f64| -> f64 {
        if bound <= 0.0 {
            f64::NEG_INFINITY
        } else if bound == f64::INFINITY {
            f64::INFINITY
        } else {
            (bound.ln() - ln.mu) / ln.sigma
        }
    };
    let shift = n * ln.sigma;
    let x_lo = standardized(lo) - shift;
    let x_hi = standardized(hi) - shift;
    // Q(x_lo) - Q(x_hi) loses precision when both arguments are deep in the
    // lower tail (1 - tiny rounds at ulp(1)); mirror into the upper tail there.
    let mass = if x_lo + x_hi <= 0.0 {
        q_function_unchecked(-x_hi) - q_function_unchecked(-x_lo)
    } else {
        q_function_unchecked(x_lo) - q_function_unchecked(x_hi)
    };
    Ok(ln.raw_moment(n) * mass)
}

/// SIR of a log-normal signal over log-normal interference: the quotient is
/// log-normal with `mu = mu_0 - mu_v`, `sigma = √(sigma_0² + sigma_v²)`.
pub fn sir_combine(signal: &LogNormalParams, interference: &LogNormalParams) -> LogNormalParams {
    LogNormalParams {
        mu: signal.mu - interference.mu,
        sigma: (signal.sigma * signal.sigma + interference.sigma * interference.sigma).sqrt(),
    }
}
