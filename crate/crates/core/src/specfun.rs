//! Special functions and quadrature primitives.
//!
//! Everything here is pure: Gauss-Hermite rules for integrals against
//! `e^{-x²}`, the Gaussian tail function Q, the digamma function, the Hurwitz
//! zeta value `ζ(2, m)` (trigamma), and partial Bell polynomials used to turn
//! raw moments into cumulants.

use crate::error::{invalid, Error, Result};

/// Largest supported Gauss-Hermite order.
pub const MAX_QUADRATURE_ORDER: usize = 128;

/// Largest supported Bell polynomial order.
pub const MAX_BELL_ORDER: usize = 12;

/// Saturation point for the Q function: beyond `|u| = 38` the tail mass is
/// below the subnormal range and Q snaps to 0 or 1.
const Q_SATURATION: f64 = 38.0;

/// Nodes and weights of a Gauss-Hermite rule: `∫ e^{-x²} f(x) dx ≈ Σ w_k f(x_k)`.
///
/// Nodes are strictly increasing and symmetric about zero; the weights sum
/// to `√π`. Immutable after construction, safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Quadrature of `e^{-x²} f(x)` over the real line.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Value and derivative of the orthonormal Hermite polynomial of degree `k`
/// (orthonormal against `e^{-x²}`), via the three-term recurrence.
fn hermite_orthonormal(k: usize, x: f64) -> (f64, f64) {
    const PI_QUARTER: f64 = 0.751_125_544_464_942_5; // π^{-1/4}
    let mut p_prev = 0.0;
    let mut p = PI_QUARTER;
    for j in 0..k {
        let jf = j as f64;
        let p_next = x * (2.0 / (jf + 1.0)).sqrt() * p - (jf / (jf + 1.0)).sqrt() * p_prev;
        p_prev = p;
        p = p_next;
    }
    let dp = (2.0 * k as f64).sqrt() * p_prev;
    (p, dp)
}

/// Gauss-Hermite rule of order `k`.
///
/// Roots are found by Newton iteration on the orthonormal recurrence with
/// the usual asymptotic starting guesses; weights follow from the derivative
/// at each root. Exact for polynomials of degree `2k - 1`.
pub fn gauss_hermite(k: usize) -> Result<QuadratureRule> {
    if !(1..=MAX_QUADRATURE_ORDER).contains(&k) {
        return Err(invalid(format!(
            "quadrature order must be in 1..={MAX_QUADRATURE_ORDER}, got {k}"
        )));
    }
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    let half = k.div_ceil(2);
    let kf = k as f64;

    let mut z = 0.0;
    let mut z_older = 0.0;
    for i in 0..half {
        // Starting guesses for roots ordered from the largest down.
        let z_prev = z;
        z = match i {
            0 => (2.0 * kf + 1.0).sqrt() - 1.85575 * (2.0 * kf + 1.0).powf(-1.0 / 6.0),
            1 => z - 1.14 * kf.powf(0.426) / z,
            2 => 1.86 * z - 0.86 * z_older,
            3 => 1.91 * z - 0.91 * z_older,
            _ => 2.0 * z - z_older,
        };
        z_older = z_prev;

        let mut dp = 0.0;
        for _ in 0..200 {
            let (p, d) = hermite_orthonormal(k, z);
            dp = d;
            let step = p / d;
            z -= step;
            if step.abs() < 1e-15 * (1.0 + z.abs()) {
                let (_, d) = hermite_orthonormal(k, z);
                dp = d;
                break;
            }
        }
        let w = 2.0 / (dp * dp);
        // Fill symmetrically; odd orders put the middle node exactly at 0.
        nodes[k - 1 - i] = z;
        nodes[i] = -z;
        weights[k - 1 - i] = w;
        weights[i] = w;
    }
    if k % 2 == 1 {
        nodes[k / 2] = 0.0;
        let (_, dp) = hermite_orthonormal(k, 0.0);
        weights[k / 2] = 2.0 / (dp * dp);
    }
    Ok(QuadratureRule { nodes, weights })
}

/// Gaussian tail probability `Q(u) = Pr[N(0,1) > u]`.
///
/// Computed from `erfc`; saturates to exactly 0/1 beyond `|u| = 38` where the
/// true value is denormal.
pub fn q_function(u: f64) -> Result<f64> {
    if u.is_nan() {
        return Err(invalid("q_function: NaN argument"));
    }
    Ok(q_function_unchecked(u))
}

/// Q without the NaN check, for hot inner loops on already-validated values.
pub(crate) fn q_function_unchecked(u: f64) -> f64 {
    if u > Q_SATURATION {
        0.0
    } else if u < -Q_SATURATION {
        1.0
    } else {
        0.5 * libm::erfc(u / core::f64::consts::SQRT_2)
    }
}

/// Standard normal CDF, `Φ(u) = 1 - Q(u)`.
pub(crate) fn normal_cdf(u: f64) -> f64 {
    q_function_unchecked(-u)
}

// Bernoulli-derived coefficients B_{2k}/(2k), k = 1..7, for the digamma
// asymptotic series.
const DIGAMMA_TAIL: [f64; 7] = [
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
];

// Coefficients B_{2k}, k = 1..7, for the trigamma asymptotic series.
const TRIGAMMA_TAIL: [f64; 7] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
];

/// Digamma function `ψ(m)` for `m > 0`.
///
/// Recurrence pushes the argument above 10, then the asymptotic expansion
/// applies; good to ~1e-14 over the supported domain.
pub fn digamma(m: f64) -> Result<f64> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(invalid(format!("digamma requires finite m > 0, got {m}")));
    }
    let mut shift = 0.0;
    let mut x = m;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut tail = 0.0;
    let mut pow = inv2;
    for c in DIGAMMA_TAIL {
        tail += c * pow;
        pow *= inv2;
    }
    Ok(shift + x.ln() - 0.5 / x - tail)
}

/// Hurwitz zeta value `ζ(2, m) = Σ_{k≥0} 1/(m+k)²` for `m > 0` (trigamma).
pub fn trigamma_hurwitz(m: f64) -> Result<f64> {
    if !(m > 0.0) || !m.is_finite() {
        return Err(invalid(format!(
            "trigamma_hurwitz requires finite m > 0, got {m}"
        )));
    }
    let mut shift = 0.0;
    let mut x = m;
    while x < 10.0 {
        shift += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut tail = 0.0;
    let mut pow = inv * inv2;
    for c in TRIGAMMA_TAIL {
        tail += c * pow;
        pow *= inv2;
    }
    Ok(shift + inv + 0.5 * inv2 + tail)
}

/// Partial Bell polynomial `B_{n,k}(x₁, …, x_{n-k+1})`.
///
/// Computed by the standard recurrence
/// `B_{n,k} = Σ_i C(n-1, i-1) x_i B_{n-i, k-1}`; exact for integer inputs up
/// to the supported order.
pub fn bell_partial(n: usize, k: usize, x: &[f64]) -> Result<f64> {
    if n < 1 || k < 1 || k > n || n > MAX_BELL_ORDER {
        return Err(invalid(format!(
            "bell_partial requires 1 <= k <= n <= {MAX_BELL_ORDER}, got n = {n}, k = {k}"
        )));
    }
    if x.len() < n - k + 1 {
        return Err(invalid(format!(
            "bell_partial needs {} arguments, got {}",
            n - k + 1,
            x.len()
        )));
    }
    // dp[m][j] = B_{m,j} over the prefix of x, restricted to states reachable
    // from (n, k); those satisfy m - j <= n - k, so x_1..x_{n-k+1} suffices.
    let mut dp = vec![vec![0.0; k + 1]; n + 1];
    dp[0][0] = 1.0;
    for m in 1..=n {
        for j in 1..=k.min(m) {
            if m - j > n - k {
                continue;
            }
            let mut acc = 0.0;
            for i in 1..=(m - j + 1) {
                let b = dp[m - i][j - 1];
                if b != 0.0 {
                    acc += binomial(m - 1, i - 1) * x[i - 1] * b;
                }
            }
            dp[m][j] = acc;
        }
    }
    Ok(dp[n][k])
}

/// Exact binomial coefficient for the small orders used here.
fn binomial(n: usize, r: usize) -> f64 {
    let r = r.min(n - r);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..r {
        num *= (n - i) as u64;
        den *= (i + 1) as u64;
    }
    (num / den) as f64
}

/// Cumulants `κ₁..κ_N` from raw moments `m₁..m_N`.
///
/// This is the Faà di Bruno expansion of `d^n/dω^n ln f(ω)` at `ω = 0` for a
/// characteristic function normalized to `f(0) = 1`:
/// `κ_n = Σ_{k=1..n} (-1)^{k-1} (k-1)! B_{n,k}(m₁, …, m_{n-k+1})`.
pub fn cumulants_from_raw_moments(moments: &[f64]) -> Result<Vec<f64>> {
    let n_max = moments.len();
    if n_max == 0 || n_max > MAX_BELL_ORDER {
        return Err(invalid(format!(
            "need 1..={MAX_BELL_ORDER} raw moments, got {n_max}"
        )));
    }
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut kappa = 0.0;
        let mut sign = 1.0;
        let mut factorial = 1.0; // (k-1)!
        for k in 1..=n {
            kappa += sign * factorial * bell_partial(n, k, &moments[..n - k + 1])?;
            sign = -sign;
            factorial *= k as f64;
        }
        out.push(kappa);
    }
    Ok(out)
}

impl Error {
    /// True when the error is the `nα = 2` geometry singularity.
    pub fn is_singular_exponent(&self) -> bool {
        matches!(self, Error::SingularExponent { .. })
    }
}
