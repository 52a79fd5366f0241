//! Globally adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.
//!
//! Each panel is integrated with the 15-point Kronrod rule; the difference to
//! the embedded 7-point Gauss–Legendre rule serves as the panel error. The
//! panel with the largest error is bisected until the summed error drops
//! below `max(abs_tol, rel_tol * |I|)` or the evaluation budget is spent.

#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// Kronrod abscissae on [-1, 1]; the odd entries are the Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Tolerances and budget for the adaptive integrator and the Laplace oracles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Budget of integrand evaluations per integral.
    pub max_nodes: usize,
    /// Upper limit of the outer Laplace integral. Zero selects it from the
    /// exponential tail bound.
    pub outer_truncation: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-13,
            abs_tol: 1e-300,
            max_nodes: 400_000,
            outer_truncation: 0.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol >= 1e-14 && self.rel_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "rel_tol must be at least 1e-14, got {}",
                self.rel_tol
            )));
        }
        if !(self.abs_tol > 0.0 && self.abs_tol.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.max_nodes < 15 {
            return Err(Error::InvalidConfig("max_nodes must be at least 15".into()));
        }
        if !(self.outer_truncation >= 0.0 && self.outer_truncation.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "outer_truncation must be non-negative, got {}",
                self.outer_truncation
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn kronrod_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    let value = kronrod * half;
    let error = ((kronrod - gauss) * half).abs();
    Panel { a, b, value, error }
}

/// Integrates `f` over `[a, b]`. The integrand is never evaluated at the
/// endpoints.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Domain(format!("integration limits must be finite: [{a}, {b}]")));
    }
    if a == b {
        return Ok(Integral { value: 0.0, error: 0.0, evaluations: 0 });
    }
    if a > b {
        let r = integrate(f, b, a, spec)?;
        return Ok(Integral { value: -r.value, ..r });
    }

    let first = kronrod_panel(&f, a, b);
    let mut evaluations = 15;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    loop {
        if !value.is_finite() {
            return Err(Error::QuadratureNonConvergence { estimate: value, error, evaluations });
        }
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= target {
            break;
        }
        if evaluations + 30 > spec.max_nodes {
            return Err(Error::QuadratureNonConvergence { estimate: value, error, evaluations });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel no longer splittable in binary64; accept it as is.
            error -= worst.error;
            heap.push(Panel { error: 0.0, ..worst });
            if heap.iter().all(|p| p.error == 0.0) {
                break;
            }
            continue;
        }
        let left = kronrod_panel(&f, worst.a, mid);
        let right = kronrod_panel(&f, mid, worst.b);
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum to shed the drift of the running updates.
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(Integral { value, error, evaluations })
}

/// Maps `[1, inf)` onto `(0, 1]` by `t = 1 - ln(u) / rate`. Choosing `rate`
/// at most half the integrand's exponential decay makes the mapped integrand
/// vanish at `u = 0`.
pub fn integrate_tail<F: Fn(f64) -> f64>(f: F, rate: f64, spec: &QuadratureSpec) -> Result<Integral> {
    if !(rate > 0.0 && rate.is_finite()) {
        return Err(Error::Domain(format!("tail decay rate must be positive, got {rate}")));
    }
    integrate(
        |u: f64| {
            let t = 1.0 - u.ln() / rate;
            let ft = f(t);
            if ft == 0.0 {
                0.0
            } else {
                ft / (rate * u)
            }
        },
        0.0,
        1.0,
        spec,
    )
}
