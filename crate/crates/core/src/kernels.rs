//! Auxiliary functions behind the Laplace representation of the family, the
//! root finder for the kernel polynomial, and quadrature oracles that rebuild
//! `F` from `int_0^inf e^{-xt} g(t) dt / c^2`.

use serde::{Deserialize, Serialize};

use crate::error::{check_positive, Error, Result};
use crate::family::{alpha, to_f64, FamilyIndex, FamilyParams, Rational};
use crate::quadrature::{integrate, QuadratureSpec};

/// Arguments below this use the series form of the removable singularity.
const SERIES_CUTOFF: f64 = 1e-6;

/// `(1 - e^{-cs}) / (1 - e^{-s})`, extended by `h_c(0) = c`.
pub fn h(c: f64, s: f64) -> f64 {
    if s < SERIES_CUTOFF {
        c * (1.0 - 0.5 * c * s + c * c * s * s / 6.0) / (1.0 - 0.5 * s + s * s / 6.0)
    } else {
        (-c * s).exp_m1() / (-s).exp_m1()
    }
}

/// `coth(y) - 1/y`, smooth through `y = 0`.
fn coth_minus_inverse(y: f64) -> f64 {
    if y < 0.1 {
        let y2 = y * y;
        y * (1.0 / 3.0
            + y2 * (-1.0 / 45.0
                + y2 * (2.0 / 945.0
                    + y2 * (-1.0 / 4725.0 + y2 * (2.0 / 93555.0 - y2 * 1382.0 / 638_512_875.0)))))
    } else {
        y.tanh().recip() - y.recip()
    }
}

/// `1/(e^x - 1) - c/(e^{cx} - 1)`, extended by `v_c(0) = (c - 1)/2`.
///
/// Evaluated as `(L(x/2) - c L(cx/2) + c - 1) / 2` with `L(y) = coth y - 1/y`,
/// which has no cancellation near zero.
pub fn v(c: f64, x: f64) -> f64 {
    0.5 * (coth_minus_inverse(0.5 * x) - c * coth_minus_inverse(0.5 * c * x) + c - 1.0)
}

/// `c^2 e^{cx} / (e^{cx} - 1)^2`. Behaves like `1/x^2` as `x -> 0+`.
pub fn z(x: f64, c: f64) -> f64 {
    let y = c * x;
    let d = (-y).exp_m1();
    c * c * (-y).exp() / (d * d)
}

/// `(2 - t) e^t - (2 + t)`, non-positive for `t >= 0`. Saturates at
/// `f64::MIN` once `e^t` overflows.
pub fn f_aux(t: f64) -> f64 {
    if t < 1.0 {
        // sum_{k>=3} (2 - k) t^k / k!
        let mut term = t * t * t / 6.0;
        let mut sum = 0.0f64;
        let mut k = 3.0;
        while term.abs() > 1e-18 * sum.abs().max(f64::MIN_POSITIVE) {
            sum += (2.0 - k) * term;
            k += 1.0;
            term *= t / k;
        }
        sum
    } else {
        let v = (2.0 - t) * t.exp() - (2.0 + t);
        if v.is_finite() {
            v
        } else {
            f64::MIN
        }
    }
}

/// `h_c(a(1-s)) h_c(a(1+s))`; at `s -> 1-` this tends to `c h_c(2a)`.
pub fn u(s: f64, a: f64, c: f64) -> f64 {
    h(c, a * (1.0 - s)) * h(c, a * (1.0 + s))
}

/// `a^{-2} (1 - s^2)^{-1} u(s; a, c)`.
pub fn assertion3_kernel(s: f64, a: f64, c: f64) -> f64 {
    u(s, a, c) / (a * a * (1.0 - s * s))
}

/// Kernel polynomial `t^(mm-nn) + t^nn - cc (1 + t^mm)`.
pub fn a_poly(t: f64, mm: u32, nn: u32, cc: f64) -> Result<f64> {
    let v = t.powi((mm - nn) as i32) + t.powi(nn as i32) - cc * (1.0 + t.powi(mm as i32));
    if !v.is_finite() {
        return Err(Error::Overflow(format!("a({t}; {mm}, {nn}, {cc}) overflows")));
    }
    Ok(v)
}

/// The unique root `t0 >= 1` of [`a_poly`] with its bisection bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelRootResult {
    pub t0: f64,
    /// `(1 + s0)/(1 - s0) = t0`.
    pub s0: f64,
    pub bracket: (f64, f64),
    pub residual: f64,
    pub mm: u32,
    pub nn: u32,
    pub cc: f64,
}

/// Brackets the root of `a(t; mm, nn, cc)` on `[1, T]` by doubling `T` until
/// the sign changes, then bisects down to adjacent floating-point values.
pub fn find_root(mm: u32, nn: u32, cc: f64) -> Result<KernelRootResult> {
    if !(mm > nn && nn >= 1) {
        return Err(Error::Domain(format!("kernel root needs mm > nn >= 1, got ({mm}, {nn})")));
    }
    if !(cc > 0.0 && cc < 1.0) {
        return Err(Error::Domain(format!("kernel root needs 0 < cc < 1, got {cc}")));
    }
    let f = |t: f64| a_poly(t, mm, nn, cc);
    let mut lo = 1.0;
    let mut hi = 2.0;
    while f(hi)? > 0.0 {
        lo = hi;
        hi *= 2.0;
        if hi > 1e100 {
            return Err(Error::BracketFailure(hi));
        }
    }
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (flo, fhi) = (f(lo)?, f(hi)?);
    let t0 = if flo.abs() <= fhi.abs() { lo } else { hi };
    Ok(KernelRootResult {
        t0,
        s0: (t0 - 1.0) / (t0 + 1.0),
        bracket: (lo, hi),
        residual: f(t0)?,
        mm,
        nn,
        cc,
    })
}

/// `x / (e^x - 1)`, equal to 1 at `x = 0`.
pub fn x_over_expm1(x: f64) -> f64 {
    if x.abs() < SERIES_CUTOFF {
        1.0 - 0.5 * x + x * x / 12.0
    } else {
        x / x.exp_m1()
    }
}

/// `(1 - e^{-cs})(1 - e^{-c(t-s)}) / (1 - e^{-ct})` for `t > s > 0`.
pub fn r(s: f64, t: f64, c: f64) -> f64 {
    (-c * s).exp_m1() * (-c * (t - s)).exp_m1() / -(-c * t).exp_m1()
}

/// `c r'(c) / r(c)`, positive because `x/(e^x - 1)` decreases.
pub fn r_log_derivative(s: f64, t: f64, c: f64) -> f64 {
    x_over_expm1(c * s) + x_over_expm1(c * (t - s)) - x_over_expm1(c * t)
}

/// `ln h_c(s) + ln h_c(t - s) - ln h_c(t) - ln c`.
pub fn log_superadditivity_gap(c: f64, s: f64, t: f64) -> f64 {
    h(c, s).ln() + h(c, t - s).ln() - h(c, t).ln() - c.ln()
}

/// A kernel value and the integral of the absolute integrand terms.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub value: f64,
    pub scale: f64,
}

/// Integrates a signed integrand to an absolute accuracy tied to the
/// magnitude integrand, so near-cancelling kernels still converge.
fn signed_integral<F, G>(signed: F, magnitude: G, spec: &QuadratureSpec) -> Result<KernelValue>
where
    F: Fn(f64) -> f64,
    G: Fn(f64) -> f64,
{
    let scale = integrate(magnitude, 0.0, 1.0, spec)?.value;
    let local = QuadratureSpec { abs_tol: spec.abs_tol.max(spec.rel_tol * scale), ..*spec };
    let value = integrate(signed, 0.0, 1.0, &local)?.value;
    Ok(KernelValue { value, scale })
}

fn powu(x: f64, e: u32) -> f64 {
    x.powi(e as i32)
}

/// Convolution kernel for `q >= 1`:
///
/// ```text
/// g(t) = t^(m+n-1) int_0^1 [(1-r)^(m-1) r^(n-1) - s (1-r)^(p-1) r^(q-1)] h_c(t(1-r)) h_c(tr) dr
/// ```
pub fn g_kernel(index: FamilyIndex, s_thresh: f64, c: f64, t: f64, spec: &QuadratureSpec) -> Result<KernelValue> {
    if index.q() == 0 {
        return Err(Error::InvalidIndex {
            p: index.p(),
            m: index.m(),
            n: index.n(),
            q: 0,
            reason: "the convolution kernel needs q >= 1; use g_kernel_q0".into(),
        });
    }
    check_positive("c", c)?;
    check_positive("t", t)?;
    let (p, m, n, q) = (index.p(), index.m(), index.n(), index.q());
    let first = |r: f64| powu(1.0 - r, m - 1) * powu(r, n - 1);
    let second = |r: f64| powu(1.0 - r, p - 1) * powu(r, q - 1);
    let hh = |r: f64| h(c, t * (1.0 - r)) * h(c, t * r);
    let k = signed_integral(
        |r| (first(r) - s_thresh * second(r)) * hh(r),
        |r| (first(r) + s_thresh.abs() * second(r)) * hh(r),
        spec,
    )?;
    let pre = powu(t, m + n - 1);
    Ok(KernelValue { value: pre * k.value, scale: pre * k.scale })
}

/// The same kernel after folding `[0, 1]` about `1/2`:
///
/// ```text
/// g(t) = (t/2)^(m+n-1) int_0^1 a((1+s)/(1-s); p-q, n-q, s_thresh) (1-s^2)^(q-1) (1-s)^(p-q) u(s; t/2, c) ds
/// ```
pub fn g_kernel_recast(
    index: FamilyIndex,
    s_thresh: f64,
    c: f64,
    t: f64,
    spec: &QuadratureSpec,
) -> Result<KernelValue> {
    if index.q() == 0 {
        return Err(Error::Domain("the folded kernel needs q >= 1".into()));
    }
    check_positive("c", c)?;
    check_positive("t", t)?;
    let (p, m, n, q) = (index.p(), index.m(), index.n(), index.q());
    let (mm, nn) = (p - q, n - q);
    let half = 0.5 * t;
    // a(T) (1-s)^(p-q) expanded so that no power of T = (1+s)/(1-s) blows up at s -> 1.
    let weight = |s: f64, sign: f64| {
        let (lo, hi) = (1.0 - s, 1.0 + s);
        let poly = powu(hi, mm - nn) * powu(lo, nn) + powu(hi, nn) * powu(lo, mm - nn)
            + sign * s_thresh * (powu(lo, mm) + powu(hi, mm));
        poly * powu(lo * hi, q - 1)
    };
    let signed = |s: f64| {
        let (lo, hi) = (1.0 - s, 1.0 + s);
        let poly = powu(hi, mm - nn) * powu(lo, nn) + powu(hi, nn) * powu(lo, mm - nn)
            - s_thresh * (powu(lo, mm) + powu(hi, mm));
        poly * powu(lo * hi, q - 1) * u(s, half, c)
    };
    let k = signed_integral(signed, |s| weight(s, s_thresh.signum()) * u(s, half, c), spec)?;
    let pre = powu(half, m + n - 1);
    Ok(KernelValue { value: pre * k.value, scale: pre * k.scale })
}

/// Kernel of the `q = 0` representation:
///
/// ```text
/// g(t) = t^(m+n-1) int_0^1 r^(m-1) (1-r)^(n-1) [h_c(tr) h_c(t(1-r)) - (s c / alpha) h_c(t)] dr
/// ```
pub fn g_kernel_q0(index: FamilyIndex, s: f64, c: f64, t: f64, spec: &QuadratureSpec) -> Result<KernelValue> {
    if index.q() != 0 {
        return Err(Error::Domain("g_kernel_q0 needs q = 0".into()));
    }
    check_positive("c", c)?;
    check_positive("t", t)?;
    let (m, n) = (index.m(), index.n());
    let weight = s * c / to_f64(alpha(index)?);
    let ht = h(c, t);
    let base = |r: f64| powu(r, m - 1) * powu(1.0 - r, n - 1);
    let hh = |r: f64| h(c, t * r) * h(c, t * (1.0 - r));
    let k = signed_integral(
        |r| base(r) * (hh(r) - weight * ht),
        |r| base(r) * (hh(r) + weight.abs() * ht),
        spec,
    )?;
    let pre = powu(t, m + n - 1);
    Ok(KernelValue { value: pre * k.value, scale: pre * k.scale })
}

/// Dispatches to the convolution kernel (`q >= 1`) or the `q = 0` kernel.
pub fn family_kernel(params: &FamilyParams, t: f64, spec: &QuadratureSpec) -> Result<KernelValue> {
    if params.index.q() == 0 {
        g_kernel_q0(params.index, params.s, params.c, t, spec)
    } else {
        g_kernel(params.index, params.s, params.c, t, spec)
    }
}

/// Rebuilds `F(x; s; c)` as `c^{-2} int_0^T e^{-xt} g(t) dt`, with `T` taken
/// from `spec.outer_truncation` or else from the exponential tail bound.
pub fn laplace_oracle_f(params: &FamilyParams, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    check_positive("x", x)?;
    let c = params.c;
    check_positive("c", c)?;
    let index = params.index;
    let degree = (index.m() + index.n() - 1) as f64;
    // |g(t)| <= bound * t^degree
    let big = c.max(1.0);
    let bound = big * big * (1.0 + params.s.abs() * (1.0 + c));
    let moment = bound * gamma_integer(degree) / x.powf(degree + 1.0) / (c * c);
    let tail_target = spec.abs_tol.max(1e-3 * spec.rel_tol * moment);
    let truncation = if spec.outer_truncation > 0.0 {
        spec.outer_truncation
    } else {
        let mut t_end = (2.0 * degree / x).max(1.0);
        loop {
            let tail = bound / (c * c) * (-x * t_end).exp() * t_end.powf(degree) / (x - degree / t_end);
            if tail < tail_target {
                break t_end;
            }
            t_end *= 1.25;
        }
    };
    let outer = QuadratureSpec { abs_tol: tail_target, ..*spec };
    let failure = std::cell::RefCell::new(None);
    let integral = integrate(
        |t: f64| match family_kernel(params, t, spec) {
            Ok(k) => (-x * t).exp() * k.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        },
        0.0,
        truncation,
        &outer,
    )?;
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    Ok(integral.value / (c * c))
}

/// `Gamma(k + 1)` for integral `k >= 0` stored as `f64`.
fn gamma_integer(k: f64) -> f64 {
    (1..=k as u32).fold(1.0, |acc, j| acc * j as f64)
}

/// Exact `B(x, y) = (x-1)!(y-1)!/(x+y-1)!` for positive integers.
pub fn beta_exact(x: u32, y: u32) -> Rational {
    let f = |k: u32| (1..=k as u128).product::<u128>();
    Rational::new(f(x - 1) * f(y - 1), f(x + y - 1))
}

/// `int_0^1 r^(x-1) (1-r)^(y-1) dr` by quadrature.
pub fn beta_integral(x: u32, y: u32, spec: &QuadratureSpec) -> Result<f64> {
    if x == 0 || y == 0 {
        return Err(Error::Domain("beta integral needs positive integer arguments".into()));
    }
    Ok(integrate(|r: f64| powu(r, x - 1) * powu(1.0 - r, y - 1), 0.0, 1.0, spec)?.value)
}

/// Quadrature residual of the identity that makes the kernel integrate to zero:
/// `int_0^1 [(1-r)^(m-1) r^(n-1) - alpha (1-r)^(p-1) r^(q-1)] dr` for `q >= 1`,
/// and `int_0^1 r^(m-1) (1-r)^(n-1) dr - alpha` for `q = 0`.
pub fn zero_integral_residual(index: FamilyIndex, spec: &QuadratureSpec) -> Result<f64> {
    let a = to_f64(alpha(index)?);
    let (p, m, n, q) = (index.p(), index.m(), index.n(), index.q());
    if q == 0 {
        return Ok(beta_integral(m, n, spec)? - a);
    }
    let v = integrate(
        |r: f64| powu(1.0 - r, m - 1) * powu(r, n - 1) - a * powu(1.0 - r, p - 1) * powu(r, q - 1),
        0.0,
        1.0,
        &QuadratureSpec { abs_tol: spec.abs_tol.max(1e-15), ..*spec },
    )?;
    Ok(v.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// Result of checking that sampled values move in one direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonotoneScan {
    pub direction: Direction,
    /// Largest step against `direction`, relative to the local magnitude.
    pub max_violation: f64,
    pub pass: bool,
}

/// Checks `f` along `grid` against `direction`, allowing steps against it of
/// at most `tol` times the local magnitude.
pub fn scan_monotone<F: Fn(f64) -> f64>(f: F, grid: &[f64], direction: Direction, tol: f64) -> MonotoneScan {
    let values: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let mut max_violation = 0.0f64;
    let mut finite = true;
    for w in values.windows(2) {
        let step = match direction {
            Direction::Increasing => w[0] - w[1],
            Direction::Decreasing => w[1] - w[0],
        };
        let local = w[0].abs().max(w[1].abs()).max(f64::MIN_POSITIVE);
        if !step.is_finite() {
            finite = false;
        }
        max_violation = max_violation.max(step / local);
    }
    MonotoneScan { direction, max_violation, pass: finite && max_violation <= tol }
}

/// Open-interval grid of `points` values strictly inside `(lo, hi)`.
pub fn interior_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (1..=points).map(|i| lo + (hi - lo) * i as f64 / (points + 1) as f64).collect()
}

/// `u(.; a, c)` is decreasing for `c <= 1` and increasing for `c >= 1`.
pub fn u_monotonicity(a: f64, c: f64, points: usize, tol: f64) -> MonotoneScan {
    let direction = if c <= 1.0 { Direction::Decreasing } else { Direction::Increasing };
    scan_monotone(|s| u(s, a, c), &interior_grid(0.0, 1.0, points), direction, tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_limits_and_identity() {
        for s in [1e-9, 1e-3, 0.5, 3.0, 40.0] {
            assert!((h(1.0, s) - 1.0).abs() < 1e-15);
        }
        for c in [0.25, 0.5, 2.0, 4.0] {
            assert!((h(c, 1e-12) - c).abs() < 1e-11 * c);
            // series and direct forms meet at the cutoff
            let s = SERIES_CUTOFF;
            let series = h(c, 0.999_999_9 * s);
            let direct = (-c * s).exp_m1() / (-s).exp_m1();
            assert!((series - direct).abs() < 1e-10 * c);
        }
        let direct = (1.0 - (-0.5f64).exp()) / (1.0 - (-1.0f64).exp());
        assert!((h(0.5, 1.0) - direct).abs() < 1e-15);
        assert!((h(0.5, 1.0) - 0.62246).abs() < 5e-6);
    }

    #[test]
    fn v_limits() {
        for x in [1e-8, 0.3, 5.0, 30.0] {
            assert!(v(1.0, x).abs() < 1e-15);
        }
        assert!((v(0.5, 1e-12) + 0.25).abs() < 1e-12);
        for (c, x) in [(0.5f64, 0.05f64), (0.5, 2.0), (3.0, 0.7), (0.25, 12.0)] {
            let direct = 1.0 / x.exp_m1() - c / (c * x).exp_m1();
            assert!((v(c, x) - direct).abs() < 1e-12, "c={c} x={x}");
        }
    }

    #[test]
    fn v_derivative_is_z_difference() {
        for (c, x) in [(0.5f64, 0.3f64), (0.5, 4.0), (2.0, 1.0)] {
            let eps = 1e-5 * x;
            let fd = (v(c, x + eps) - v(c, x - eps)) / (2.0 * eps);
            let exact = z(x, c) - z(x, 1.0);
            assert!((fd - exact).abs() < 1e-7 * exact.abs().max(1e-3), "c={c} x={x}");
        }
    }

    #[test]
    fn z_values() {
        let e2 = 2.0f64.exp();
        assert!((z(2.0, 1.0) - e2 / ((e2 - 1.0) * (e2 - 1.0))).abs() < 1e-16);
        assert!((z(2.0, 1.0) - 0.181015).abs() < 1e-6);
        for c in [0.3, 1.0, 4.0] {
            let x = 1e-5;
            assert!((z(x, c) * x * x - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn f_aux_values() {
        assert_eq!(f_aux(0.0), 0.0);
        assert!((f_aux(1.0) - (1f64.exp() - 3.0)).abs() < 1e-15);
        assert!((f_aux(0.5) - (1.5 * 0.5f64.exp() - 2.5)).abs() < 1e-15);
        let t = 1e-3f64;
        let series = -t * t * t / 6.0 - t.powi(4) / 12.0 - t.powi(5) / 40.0;
        assert!((f_aux(t) - series).abs() < 1e-10 * t.powi(3));
        assert_eq!(f_aux(1000.0), f64::MIN);
    }

    #[test]
    fn u_edge_values() {
        for s in [0.1, 0.5, 0.99] {
            assert!((u(s, 2.0, 1.0) - 1.0).abs() < 1e-15);
        }
        let limit = 0.5 * h(0.5, 4.0);
        assert!((u(1.0 - 1e-12, 2.0, 0.5) - limit).abs() < 1e-10);
    }

    #[test]
    fn a_poly_values() {
        for (m, n, c) in [(2u32, 1u32, 0.5), (5, 2, 0.1), (7, 3, 0.9)] {
            assert!((a_poly(1.0, m, n, c).unwrap() - (2.0 - 2.0 * c)).abs() < 1e-15);
            assert!(a_poly(1e6, m, n, c).unwrap() < 0.0);
        }
        assert!(matches!(a_poly(1e200, 5, 2, 0.5), Err(Error::Overflow(_))));
    }

    #[test]
    fn root_of_quadratic_kernel() {
        let r = find_root(2, 1, 0.5).unwrap();
        assert!((r.t0 - (2.0 + 3f64.sqrt())).abs() < 1e-12);
        assert!(r.bracket.0 <= r.t0 && r.t0 <= r.bracket.1);
        let back = (1.0 + r.s0) / (1.0 - r.s0);
        assert!((back - r.t0).abs() < 1e-12 * r.t0);
    }

    #[test]
    fn root_errors() {
        assert!(find_root(2, 2, 0.5).is_err());
        assert!(find_root(2, 0, 0.5).is_err());
        assert!(find_root(3, 1, 1.0).is_err());
        assert!(find_root(3, 1, 0.0).is_err());
    }

    #[test]
    fn r_special_case_and_log_derivative() {
        for (s, c) in [(0.3f64, 0.5f64), (1.0, 2.0)] {
            let expect = (1.0 - (-c * s).exp()) / (1.0 + (-c * s).exp());
            assert!((r(s, 2.0 * s, c) - expect).abs() < 1e-15);
        }
        for (s, t, c) in [(0.3f64, 1.0f64, 0.7f64), (1.0, 3.0, 2.0), (0.1, 10.0, 0.2)] {
            let eps = 1e-6 * c;
            let fd = (r(s, t, c + eps).ln() - r(s, t, c - eps).ln()) / (2.0 * eps);
            let exact = r_log_derivative(s, t, c) / c;
            assert!((fd - exact).abs() < 1e-7 * exact.abs(), "s={s} t={t} c={c}");
            assert!(exact > 0.0);
        }
    }

    #[test]
    fn kernel_dispatch_rejects_wrong_q() {
        let spec = QuadratureSpec::default();
        let i = FamilyIndex::new(2, 1, 1, 0).unwrap();
        assert!(g_kernel(i, 1.0, 0.5, 1.0, &spec).is_err());
        assert!(g_kernel_recast(i, 1.0, 0.5, 1.0, &spec).is_err());
        let j = FamilyIndex::new(3, 2, 2, 1).unwrap();
        assert!(g_kernel_q0(j, 1.0, 0.5, 1.0, &spec).is_err());
    }

    #[test]
    fn gap_vanishes_at_unit_step_and_diagonal() {
        for (s, t) in [(0.2, 0.9), (1.0, 5.0)] {
            assert!(log_superadditivity_gap(1.0, s, t).abs() < 1e-15);
        }
        assert!(log_superadditivity_gap(0.5, 0.7, 2.1) > 0.0);
        let near = log_superadditivity_gap(0.5, 0.7, 0.7 + 1e-9);
        assert!(near.abs() < 1e-8);
    }

    #[test]
    fn scan_monotone_detects_wrong_direction() {
        let grid: Vec<f64> = (0..10).map(|i| i as f64).collect();
        assert!(scan_monotone(|x| x, &grid, Direction::Increasing, 0.0).pass);
        assert!(!scan_monotone(|x| x, &grid, Direction::Decreasing, 0.0).pass);
    }
}
