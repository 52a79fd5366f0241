//! The forward-difference operator, the threshold constants and the family
//!
//! ```text
//! F_{p,m,n,q}(x; s; c) = (-1)^(m+n) D^(m-1)(x;c) D^(n-1)(x;c)
//!                        - s (-1)^(p+q) D^(p-1)(x;c) D^(q-1)(x;c)
//! ```
//!
//! where `D^(j)(x;c) = (psi^(j)(x+c) - psi^(j)(x)) / c`, `psi^(0) = psi` and
//! `psi^(-1)(x) = -x`. At `c = 0` the difference becomes `psi^(j+1)(x)` and
//! the `j = -1` factor is the constant `-1`.

use std::fmt;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error, Result};
use crate::polygamma::Polygamma;

/// Largest `p` accepted; keeps every factorial in the thresholds within 20!.
pub const MAX_FAMILY_ORDER: u32 = 20;

/// Below this ratio `c / x` the difference quotient is summed as a Taylor
/// series instead of subtracting two nearly equal polygamma values.
const SERIES_RATIO: f64 = 0.01;

/// Exact rational threshold value.
pub type Rational = Ratio<u128>;

/// Integer quadruple `(p, m, n, q)` with `p > m >= n > q >= 0` and `m + n = p + q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawIndex", into = "RawIndex")]
pub struct FamilyIndex {
    p: u32,
    m: u32,
    n: u32,
    q: u32,
}

#[derive(Serialize, Deserialize)]
struct RawIndex {
    p: u32,
    m: u32,
    n: u32,
    q: u32,
}

impl TryFrom<RawIndex> for FamilyIndex {
    type Error = Error;

    fn try_from(r: RawIndex) -> Result<Self> {
        FamilyIndex::new(r.p, r.m, r.n, r.q)
    }
}

impl From<FamilyIndex> for RawIndex {
    fn from(i: FamilyIndex) -> Self {
        RawIndex { p: i.p, m: i.m, n: i.n, q: i.q }
    }
}

impl FamilyIndex {
    pub fn new(p: u32, m: u32, n: u32, q: u32) -> Result<Self> {
        let fail = |reason: &str| Error::InvalidIndex { p, m, n, q, reason: reason.to_string() };
        if p <= m {
            return Err(fail("violates p > m"));
        }
        if m < n {
            return Err(fail("violates m >= n"));
        }
        if n <= q {
            return Err(fail("violates n > q"));
        }
        if m + n != p + q {
            return Err(fail("violates m + n = p + q"));
        }
        if p > MAX_FAMILY_ORDER {
            return Err(fail(&format!("p exceeds the supported maximum {MAX_FAMILY_ORDER}")));
        }
        Ok(FamilyIndex { p, m, n, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn m(&self) -> u32 {
        self.m
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Every valid index with `p <= max_p`, ordered by `(p, m, n)`.
    pub fn enumerate(max_p: u32) -> Vec<FamilyIndex> {
        let mut out = Vec::new();
        for p in 2..=max_p.min(MAX_FAMILY_ORDER) {
            for m in 1..p {
                for n in 1..=m {
                    if let Some(q) = (m + n).checked_sub(p) {
                        if let Ok(idx) = FamilyIndex::new(p, m, n, q) {
                            out.push(idx);
                        }
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for FamilyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.p, self.m, self.n, self.q)
    }
}

/// One member of the family: index, scalar `s` and step `c >= 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyParams {
    pub index: FamilyIndex,
    pub s: f64,
    pub c: f64,
}

impl FamilyParams {
    pub fn new(index: FamilyIndex, s: f64, c: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(Error::Domain(format!("s must be finite, got {s}")));
        }
        if !(c >= 0.0 && c.is_finite()) {
            return Err(Error::Domain(format!("c must be non-negative and finite, got {c}")));
        }
        Ok(FamilyParams { index, s, c })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdKind {
    Alpha,
    Beta,
    AlphaOverC,
}

impl ThresholdKind {
    /// Numeric threshold for `index` at step `c`.
    pub fn value(self, index: FamilyIndex, c: f64) -> Result<f64> {
        match self {
            ThresholdKind::Alpha => Ok(to_f64(alpha(index)?)),
            ThresholdKind::Beta => Ok(to_f64(beta(index)?)),
            ThresholdKind::AlphaOverC => {
                if index.q != 0 {
                    return Err(Error::Domain("alpha/c threshold requires q = 0".into()));
                }
                check_positive("c", c)?;
                Ok(to_f64(alpha(index)?) / c)
            }
        }
    }
}

impl fmt::Display for ThresholdKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ThresholdKind::Alpha => "alpha",
            ThresholdKind::Beta => "beta",
            ThresholdKind::AlphaOverC => "alpha_over_c",
        })
    }
}

fn factorial_u128(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// Correctly rounded whenever numerator and denominator are below 2^53.
pub fn to_f64(r: Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// `(m-1)!(n-1)! / ((p-1)!(q-1)!)`, or `(m-1)!(n-1)!/(p-1)!` when `q = 0`.
pub fn alpha(index: FamilyIndex) -> Result<Rational> {
    let FamilyIndex { p, m, n, q } = index;
    let numer = factorial_u128(m - 1) * factorial_u128(n - 1);
    let denom = if q == 0 {
        factorial_u128(p - 1)
    } else {
        factorial_u128(p - 1) * factorial_u128(q - 1)
    };
    Ok(Ratio::new(numer, denom))
}

/// `m! n! / (p! q!)`; defined only for `q >= 1`.
pub fn beta(index: FamilyIndex) -> Result<Rational> {
    let FamilyIndex { p, m, n, q } = index;
    if q == 0 {
        return Err(Error::InvalidIndex {
            p,
            m,
            n,
            q,
            reason: "beta requires q >= 1".into(),
        });
    }
    Ok(Ratio::new(
        factorial_u128(m) * factorial_u128(n),
        factorial_u128(p) * factorial_u128(q),
    ))
}

fn check_x_c(x: f64, c: f64) -> Result<()> {
    check_positive("x", x)?;
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("c must be non-negative and finite, got {c}")));
    }
    Ok(())
}

/// `D^(j)(x; c)` for `j >= -1`.
pub fn delta_psi(engine: &Polygamma, j: i32, x: f64, c: f64) -> Result<f64> {
    check_x_c(x, c)?;
    if j < -1 {
        return Err(Error::Domain(format!("difference order must be >= -1, got {j}")));
    }
    if j == -1 {
        return Ok(-1.0);
    }
    delta_nonneg(engine, j as u32, x, c)
}

fn delta_nonneg(engine: &Polygamma, j: u32, x: f64, c: f64) -> Result<f64> {
    let max = engine.max_order();
    if j + 1 > max {
        return Err(Error::UnsupportedOrder { order: j as i64 + 1, max });
    }
    if c == 0.0 {
        return engine.polygamma(j + 1, x);
    }
    if c < SERIES_RATIO * x {
        if let Some(v) = delta_series(engine, j, x, c)? {
            return Ok(v);
        }
    }
    delta_subtract(engine, j, x, c)
}

/// `sum_i psi^(j+1+i)(x) c^i / (i+1)!`; `None` if the engine's order limit
/// is reached before the terms become negligible.
fn delta_series(engine: &Polygamma, j: u32, x: f64, c: f64) -> Result<Option<f64>> {
    let mut sum = 0.0;
    let mut weight = 1.0;
    let mut last = f64::INFINITY;
    for order in (j + 1)..=engine.max_order() {
        let term = engine.polygamma(order, x)? * weight;
        sum += term;
        last = term.abs();
        if last <= 1e-17 * sum.abs() {
            return Ok(Some(sum));
        }
        weight *= c / (order - j + 1) as f64;
    }
    Ok((last <= 1e-15 * sum.abs()).then_some(sum))
}

fn delta_subtract(engine: &Polygamma, j: u32, x: f64, c: f64) -> Result<f64> {
    Ok((engine.eval(j, x + c)? - engine.eval(j, x)?) / c)
}

/// A family value together with the sign-test scale `|A| + |s B|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyValue {
    pub value: f64,
    pub scale: f64,
}

/// `D^(0..=j_max)(x; c)` at one point, shared by every derivative order.
#[derive(Debug, Clone)]
pub struct DeltaTable {
    x: f64,
    c: f64,
    values: Vec<f64>,
}

impl DeltaTable {
    pub fn new(engine: &Polygamma, x: f64, c: f64, j_max: u32) -> Result<Self> {
        check_x_c(x, c)?;
        let values = (0..=j_max)
            .map(|j| delta_nonneg(engine, j, x, c))
            .collect::<Result<Vec<_>>>()?;
        Ok(DeltaTable { x, c, values })
    }

    /// Table that covers derivatives up to `max_k` for `index`.
    pub fn for_index(engine: &Polygamma, index: FamilyIndex, x: f64, c: f64, max_k: u32) -> Result<Self> {
        Self::new(engine, x, c, index.p - 1 + max_k)
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    fn get(&self, j: u32) -> Result<f64> {
        self.values.get(j as usize).copied().ok_or(Error::UnsupportedOrder {
            order: j as i64,
            max: self.values.len() as u32 - 1,
        })
    }

    /// Leibniz expansion of `d^k/dx^k [(-1)^(a+b) D^(a-1) D^(b-1)]`, split into
    /// its value and the sum of absolute term values.
    fn product_derivative(&self, a: u32, b: u32, k: u32) -> Result<(f64, f64)> {
        let sign = if (a + b).is_multiple_of(2) { 1.0 } else { -1.0 };
        if b == 0 {
            // D^(-1) is the constant -1.
            let v = -sign * self.get(a - 1 + k)?;
            return Ok((v, v.abs()));
        }
        let mut value = 0.0;
        let mut abs = 0.0;
        let mut binom = 1.0;
        for i in 0..=k {
            let t = binom * self.get(a - 1 + i)? * self.get(b - 1 + k - i)?;
            value += t;
            abs += t.abs();
            binom = binom * (k - i) as f64 / (i + 1) as f64;
        }
        Ok((sign * value, abs))
    }

    /// Numerator and denominator products of the family at derivative order `k`.
    pub fn parts(&self, index: FamilyIndex, k: u32) -> Result<((f64, f64), (f64, f64))> {
        let first = self.product_derivative(index.m, index.n, k)?;
        let second = self.product_derivative(index.p, index.q, k)?;
        Ok((first, second))
    }

    pub fn derivative(&self, params: &FamilyParams, k: u32) -> Result<FamilyValue> {
        let ((a, a_abs), (b, b_abs)) = self.parts(params.index, k)?;
        let value = a - params.s * b;
        let scale = a_abs + params.s.abs() * b_abs;
        if !value.is_finite() || !scale.is_finite() {
            return Err(Error::Overflow(format!(
                "F^({k}) at x = {} overflows binary64",
                self.x
            )));
        }
        Ok(FamilyValue { value, scale })
    }
}

pub fn f_eval(engine: &Polygamma, params: &FamilyParams, x: f64) -> Result<f64> {
    Ok(f_derivative(engine, params, 0, x)?.value)
}

/// `d^k/dx^k F(x; s; c)` in closed form, with its sign-test scale.
pub fn f_derivative(engine: &Polygamma, params: &FamilyParams, k: u32, x: f64) -> Result<FamilyValue> {
    let top = params.index.p + k;
    if top > engine.max_order() {
        return Err(Error::UnsupportedOrder { order: top as i64, max: engine.max_order() });
    }
    DeltaTable::for_index(engine, params.index, x, params.c, k)?.derivative(params, k)
}

fn ratio(engine: &Polygamma, index: FamilyIndex, c: f64, x: f64) -> Result<f64> {
    check_positive("c", c)?;
    let table = DeltaTable::for_index(engine, index, x, c, 0)?;
    let ((a, _), (b, _)) = table.parts(index, 0)?;
    if b.abs() < 1e-300 {
        return Err(Error::NearZeroDenominator(b));
    }
    Ok(a / b)
}

/// `[(-1)^(m+n) D^(m-1) D^(n-1)] / [(-1)^(p+q) D^(p-1) D^(q-1)]`; tends to
/// alpha as `x -> inf`.
pub fn ratio_infinity(engine: &Polygamma, index: FamilyIndex, c: f64, x: f64) -> Result<f64> {
    ratio(engine, index, c, x)
}

/// Same ratio for `q = 0`; tends to `alpha / c` as `x -> 0+`.
pub fn ratio_zero(engine: &Polygamma, index: FamilyIndex, c: f64, x: f64) -> Result<f64> {
    if index.q != 0 {
        return Err(Error::InvalidIndex {
            p: index.p,
            m: index.m,
            n: index.n,
            q: index.q,
            reason: "the x -> 0+ ratio needs q = 0".into(),
        });
    }
    ratio(engine, index, c, x)
}
