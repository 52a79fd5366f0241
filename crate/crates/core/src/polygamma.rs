//! Digamma and polygamma functions for positive real arguments.
//!
//! The engine raises the argument with the recurrence
//! `psi^(n)(x + 1) = psi^(n)(x) + (-1)^n n! / x^(n+1)` until it clears
//! `shift_threshold + n`, then sums the Bernoulli asymptotic series
//!
//! ```text
//! psi(x)                ~ ln x - 1/(2x) - sum_k B_2k / (2k x^2k)
//! (-1)^(n+1) psi^(n)(x) ~ (n-1)!/x^n [1 + n/(2x) + sum_k B_2k C(2k+n-1, 2k) / x^2k]
//! ```
//!
//! An independent route through the Laplace integral representations is
//! provided by [`integral_representation_oracle`].

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error, Result};
use crate::quadrature::{integrate, integrate_tail, QuadratureSpec};

include!(concat!(env!("OUT_DIR"), "/bernoulli.rs"));

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest polygamma order any engine accepts.
pub const ORDER_LIMIT: u32 = 64;

/// Order of a polygamma function. Order `-1` and the c = 0 reading of order
/// `0` are conventions of the F-family and are resolved in [`crate::family`];
/// this module evaluates `n >= 0` with `psi^(0) = psi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PolygammaOrder(i32);

impl PolygammaOrder {
    pub fn new(n: i32) -> Result<Self> {
        if n < -1 {
            return Err(Error::Domain(format!("polygamma order must be >= -1, got {n}")));
        }
        Ok(PolygammaOrder(n))
    }

    pub fn get(self) -> i32 {
        self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EngineConfig {
    /// Arguments below `shift_threshold + n` are raised by the recurrence.
    pub shift_threshold: f64,
    /// Number of Bernoulli terms in the asymptotic series (4..=20).
    pub asymptotic_terms: usize,
    pub gamma_constant: f64,
    /// Highest order accepted by [`Polygamma::polygamma`].
    pub max_order: u32,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            shift_threshold: 10.0,
            asymptotic_terms: 20,
            gamma_constant: EULER_GAMMA,
            max_order: ORDER_LIMIT,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.shift_threshold >= 10.0 && self.shift_threshold.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "shift_threshold must be >= 10, got {}",
                self.shift_threshold
            )));
        }
        if self.asymptotic_terms < 4 || self.asymptotic_terms > BERNOULLI_EVEN.len() {
            return Err(Error::InvalidConfig(format!(
                "asymptotic_terms must lie in 4..={}, got {}",
                BERNOULLI_EVEN.len(),
                self.asymptotic_terms
            )));
        }
        if (self.gamma_constant * 1e5).floor() != 57721.0 {
            return Err(Error::InvalidConfig(format!(
                "gamma_constant {} disagrees with 0.57721",
                self.gamma_constant
            )));
        }
        if self.max_order > ORDER_LIMIT {
            return Err(Error::InvalidConfig(format!(
                "max_order must be <= {ORDER_LIMIT}, got {}",
                self.max_order
            )));
        }
        Ok(())
    }
}

fn factorial(n: u32) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// `n! / x^(n+1)` without spurious overflow or underflow in the power.
fn factorial_over_power(n: u32, x: f64) -> f64 {
    let e = (n + 1) as i32;
    if (e as f64) * x.ln().abs() < 600.0 {
        factorial(n) * x.recip().powi(e)
    } else {
        (ln_factorial(n) - e as f64 * x.ln()).exp()
    }
}

/// Polygamma evaluator bound to one [`EngineConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Polygamma {
    config: EngineConfig,
}

impl Polygamma {
    pub fn new(config: EngineConfig) -> Result<Self> {
        config.validate()?;
        Ok(Polygamma { config })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    pub fn max_order(&self) -> u32 {
        self.config.max_order
    }

    pub fn digamma(&self, x: f64) -> Result<f64> {
        check_positive("x", x)?;
        let threshold = self.config.shift_threshold;
        let mut y = x;
        let mut shift_sum = 0.0;
        while y < threshold {
            shift_sum += y.recip();
            y += 1.0;
        }
        let inv2 = (y * y).recip();
        let mut series = 0.0;
        let mut pow = inv2;
        for (k, b) in BERNOULLI_EVEN.iter().take(self.config.asymptotic_terms).enumerate() {
            let term = b / (2.0 * (k + 1) as f64) * pow;
            series += term;
            if term.abs() < 1e-18 * y.ln().abs().max(1.0) {
                break;
            }
            pow *= inv2;
        }
        Ok(y.ln() - 0.5 / y - series - shift_sum)
    }

    /// `psi^(n)(x)` for `n >= 1`.
    pub fn polygamma(&self, n: u32, x: f64) -> Result<f64> {
        check_positive("x", x)?;
        if n == 0 {
            return self.digamma(x);
        }
        if n > self.config.max_order {
            return Err(Error::UnsupportedOrder { order: n as i64, max: self.config.max_order });
        }
        let threshold = self.config.shift_threshold + n as f64;
        // magnitude = (-1)^(n+1) psi^(n)(x); every shift term is positive.
        let mut y = x;
        let mut shifted = 0.0;
        while y < threshold {
            shifted += factorial_over_power(n, y);
            y += 1.0;
        }
        let asymptotic = self.asymptotic_magnitude(n, y);
        let magnitude = asymptotic + shifted;
        if !magnitude.is_finite() {
            return Err(Error::Overflow(format!("psi^({n})({x}) exceeds binary64 range")));
        }
        Ok(if n % 2 == 1 { magnitude } else { -magnitude })
    }

    /// `psi^(n)` with `n = 0` meaning `psi`.
    pub fn eval(&self, n: u32, x: f64) -> Result<f64> {
        if n == 0 {
            self.digamma(x)
        } else {
            self.polygamma(n, x)
        }
    }

    fn asymptotic_magnitude(&self, n: u32, y: f64) -> f64 {
        let nf = n as f64;
        let inv2 = (y * y).recip();
        // C(2k+n-1, 2k), starting at k = 1: C(n+1, 2).
        let mut binom = nf * (nf + 1.0) / 2.0;
        let mut pow = inv2;
        let mut sum = 1.0 + nf / (2.0 * y);
        for (idx, b) in BERNOULLI_EVEN.iter().take(self.config.asymptotic_terms).enumerate() {
            let term = b * binom * pow;
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
            let k = (idx + 2) as f64;
            binom *= (2.0 * k + nf - 2.0) * (2.0 * k + nf - 1.0) / ((2.0 * k - 1.0) * (2.0 * k));
            pow *= inv2;
        }
        // (n-1)!/y^n = factorial_over_power(n-1, y)
        factorial_over_power(n - 1, y) * sum
    }
}

pub fn digamma(x: f64) -> Result<f64> {
    Polygamma::default().digamma(x)
}

pub fn polygamma(n: u32, x: f64) -> Result<f64> {
    Polygamma::default().polygamma(n, x)
}

/// Two leading terms of `|psi^(n)(x)|` for large `x`: `(n-1)!/x^n + n!/(2 x^(n+1))`.
pub fn polygamma_asymptotic_leading(n: u32, x: f64) -> Result<f64> {
    check_positive("x", x)?;
    if n == 0 {
        return Err(Error::Domain("asymptotic leading terms need n >= 1".into()));
    }
    let v = factorial_over_power(n - 1, x) + 0.5 * factorial_over_power(n, x);
    if !v.is_finite() {
        return Err(Error::Overflow(format!("leading terms of psi^({n})({x}) overflow")));
    }
    Ok(v)
}

/// `psi^(n)(x)` (or `psi(x)` for `n = 0`) by direct quadrature of
///
/// ```text
/// psi(x) = -gamma + int_0^inf (e^-t - e^-xt) / (1 - e^-t) dt
/// (-1)^(n+1) psi^(n)(x) = int_0^inf e^-xt t^n / (1 - e^-t) dt
/// ```
///
/// The range is split at `t = 1`; the tail is mapped onto `(0, 1]`.
pub fn integral_representation_oracle(n: u32, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    integral_representation_oracle_with(n, x, spec, EULER_GAMMA)
}

pub fn integral_representation_oracle_with(
    n: u32,
    x: f64,
    spec: &QuadratureSpec,
    gamma_constant: f64,
) -> Result<f64> {
    check_positive("x", x)?;
    spec.validate()?;
    if n == 0 {
        // (e^-t - e^-xt)/(1 - e^-t) = e^-t (1 - e^{-(x-1)t}) / (1 - e^-t); -> x - 1 at t = 0.
        let integrand = |t: f64| {
            if t < 1e-6 {
                (x - 1.0) * (1.0 - 0.5 * (x + 1.0) * t + 0.5 * t)
            } else {
                (-t).exp() * -(-(x - 1.0) * t).exp_m1() / -(-t).exp_m1()
            }
        };
        let head = integrate(integrand, 0.0, 1.0, spec)?;
        let tail = integrate_tail(integrand, 0.5 * x.min(1.0), spec)?;
        return Ok(-gamma_constant + head.value + tail.value);
    }
    let integrand = |t: f64| {
        let k = t.powi(n as i32) / -(-t).exp_m1();
        if k == 0.0 || !k.is_finite() {
            0.0
        } else {
            let decay = (-x * t).exp();
            if decay == 0.0 {
                0.0
            } else {
                decay * k
            }
        }
    };
    let head = integrate(integrand, 0.0, 1.0, spec)?;
    let tail = integrate_tail(integrand, 0.5 * x, spec)?;
    let magnitude = head.value + tail.value;
    Ok(if n % 2 == 1 { magnitude } else { -magnitude })
}
