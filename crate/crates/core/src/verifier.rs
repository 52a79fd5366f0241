//! Grid verification of complete monotonicity for the family, the clause
//! suite of the main theorem, limit tables behind the necessity argument and
//! a witness search for thresholds pushed past their sharp values.

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{DeltaTable, FamilyIndex, FamilyParams, ThresholdKind};
use crate::family::{ratio_infinity, ratio_zero};
use crate::polygamma::Polygamma;

/// Tolerance applied to sign checks, relative to the Leibniz term scale.
pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MAX_ORDER: u32 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Log,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { x_min: 0.05, x_max: 50.0, points: 60, spacing: Spacing::Log }
    }
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.x_min > 0.0 && self.x_min < self.x_max && self.x_max.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "grid needs 0 < x_min < x_max, got [{}, {}]",
                self.x_min, self.x_max
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidConfig("grid needs at least 2 points".into()));
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let n = self.points;
        let last = (n - 1) as f64;
        let mut xs: Vec<f64> = match self.spacing {
            Spacing::Log => {
                let (a, b) = (self.x_min.ln(), self.x_max.ln());
                (0..n).map(|i| (a + (b - a) * i as f64 / last).exp()).collect()
            }
            Spacing::Linear => (0..n)
                .map(|i| self.x_min + (self.x_max - self.x_min) * i as f64 / last)
                .collect(),
        };
        // pin the endpoints exactly
        xs[0] = self.x_min;
        xs[n - 1] = self.x_max;
        xs
    }
}

/// Whether `F` (plus) or `-F` (minus) is claimed completely monotonic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CmSign {
    Plus,
    Minus,
}

impl CmSign {
    fn factor(self) -> f64 {
        match self {
            CmSign::Plus => 1.0,
            CmSign::Minus => -1.0,
        }
    }
}

impl fmt::Display for CmSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CmSign::Plus => "plus",
            CmSign::Minus => "minus",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// An evaluation error occurred somewhere on the grid.
    Inconclusive,
}

/// One grid cell: `value = sign * (-1)^k F^(k)(x)`, required `>= -tol * scale`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub k: u32,
    pub x: f64,
    pub value: f64,
    pub scale: f64,
}

impl Cell {
    fn normalized(&self) -> f64 {
        if self.scale > 0.0 {
            self.value / self.scale
        } else if self.value == 0.0 {
            0.0
        } else {
            self.value.signum() * f64::INFINITY
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.value >= -tol * self.scale
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CMReport {
    pub params: FamilyParams,
    pub sign: CmSign,
    pub max_order: u32,
    pub tol: f64,
    pub verdict: Verdict,
    /// Cell with the most negative `value / scale`, recorded on pass as well.
    pub worst: Option<Cell>,
    /// First failing cell in (x, k) order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Cell>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip)]
    pub cells: Vec<Cell>,
}

impl CMReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

fn cells_at(engine: &Polygamma, params: &FamilyParams, sign: CmSign, x: f64, max_order: u32) -> Result<Vec<Cell>> {
    let table = DeltaTable::for_index(engine, params.index, x, params.c, max_order)?;
    (0..=max_order)
        .map(|k| {
            let fv = table.derivative(params, k)?;
            let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
            Ok(Cell { k, x, value: sign.factor() * parity * fv.value, scale: fv.scale })
        })
        .collect()
}

/// Checks `sign * (-1)^k F^(k)(x) >= -tol * scale(k, x)` for every `k <= max_order`
/// and every grid point. Evaluation errors make the report inconclusive.
pub fn check_cm(
    engine: &Polygamma,
    params: &FamilyParams,
    sign: CmSign,
    grid: &GridSpec,
    max_order: u32,
    tol: f64,
) -> Result<CMReport> {
    grid.validate()?;
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::InvalidConfig(format!("tol must be non-negative, got {tol}")));
    }
    let cap = engine.max_order().saturating_sub(params.index.p());
    if max_order > cap {
        return Err(Error::InvalidConfig(format!(
            "max_order {max_order} exceeds the derivative cap {cap} for index {}",
            params.index
        )));
    }

    let per_x: Vec<Result<Vec<Cell>>> = grid
        .points()
        .par_iter()
        .map(|&x| cells_at(engine, params, sign, x, max_order))
        .collect();

    let mut report = CMReport {
        params: *params,
        sign,
        max_order,
        tol,
        verdict: Verdict::Pass,
        worst: None,
        witness: None,
        error: None,
        cells: Vec::with_capacity(grid.points * (max_order as usize + 1)),
    };
    for row in per_x {
        match row {
            Ok(cells) => report.cells.extend(cells),
            Err(e) => {
                if report.error.is_none() {
                    report.error = Some(e.to_string());
                }
            }
        }
    }
    for cell in &report.cells {
        if report.worst.is_none_or(|w| cell.normalized() < w.normalized()) {
            report.worst = Some(*cell);
        }
        if report.witness.is_none() && !cell.passes(tol) {
            report.witness = Some(*cell);
        }
    }
    report.verdict = if report.error.is_some() {
        Verdict::Inconclusive
    } else if report.witness.is_some() {
        Verdict::Fail
    } else {
        Verdict::Pass
    };
    Ok(report)
}

/// Clauses of the main theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Clause {
    /// `0 < c <= 1`: `F(x; alpha; c)` is CM.
    #[serde(rename = "1a")]
    OneA,
    /// `0 < c <= 1`, `q = 0`: `-F(x; alpha/c; c)` is CM.
    #[serde(rename = "1b")]
    OneB,
    /// `c >= 1`: `-F(x; alpha; c)` is CM.
    #[serde(rename = "2a")]
    TwoA,
    /// `c >= 1`, `q = 0`: `F(x; alpha/c; c)` is CM.
    #[serde(rename = "2b")]
    TwoB,
    /// `q >= 1`, every `c > 0`: `-F(x; beta; c)` is CM.
    #[serde(rename = "3")]
    Three,
}

impl Clause {
    pub fn sign(self) -> CmSign {
        match self {
            Clause::OneA | Clause::TwoB => CmSign::Plus,
            Clause::OneB | Clause::TwoA | Clause::Three => CmSign::Minus,
        }
    }

    pub fn threshold(self) -> ThresholdKind {
        match self {
            Clause::OneA | Clause::TwoA => ThresholdKind::Alpha,
            Clause::OneB | Clause::TwoB => ThresholdKind::AlphaOverC,
            Clause::Three => ThresholdKind::Beta,
        }
    }

    /// Clauses whose hypotheses hold for `index` at step `c > 0`.
    pub fn applicable(index: FamilyIndex, c: f64) -> Vec<Clause> {
        let mut out = Vec::new();
        if c <= 1.0 {
            out.push(Clause::OneA);
            if index.q() == 0 {
                out.push(Clause::OneB);
            }
        }
        if c >= 1.0 {
            out.push(Clause::TwoA);
            if index.q() == 0 {
                out.push(Clause::TwoB);
            }
        }
        if index.q() >= 1 {
            out.push(Clause::Three);
        }
        out
    }

    pub fn label(self) -> &'static str {
        match self {
            Clause::OneA => "1a",
            Clause::OneB => "1b",
            Clause::TwoA => "2a",
            Clause::TwoB => "2b",
            Clause::Three => "3",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClauseReport {
    pub clause: Clause,
    pub threshold: ThresholdKind,
    #[serde(flatten)]
    pub report: CMReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub max_index: u32,
    pub c_list: Vec<f64>,
    pub grid: GridSpec,
    pub max_order: u32,
    pub tol: f64,
    /// Multiplies every threshold; 1 reproduces the theorem's values.
    pub s_scale: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_index: 4,
            c_list: vec![0.25, 0.5, 1.0, 2.0, 4.0],
            grid: GridSpec::default(),
            max_order: DEFAULT_MAX_ORDER,
            tol: DEFAULT_TOL,
            s_scale: 1.0,
        }
    }
}

/// Runs every applicable clause for every index with `p <= max_index` and
/// every `c` in the list. Reports come back in (index, c, clause) order.
pub fn theorem_suite(engine: &Polygamma, config: &SuiteConfig) -> Result<Vec<ClauseReport>> {
    if config.max_index > 8 || config.max_index < 2 {
        return Err(Error::InvalidConfig(format!(
            "max_index must lie in 2..=8, got {}",
            config.max_index
        )));
    }
    if config.c_list.is_empty() {
        return Err(Error::InvalidConfig("c list is empty".into()));
    }
    for &c in &config.c_list {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidConfig(format!("every c must be positive, got {c}")));
        }
    }
    if !config.s_scale.is_finite() {
        return Err(Error::InvalidConfig("s_scale must be finite".into()));
    }
    let mut cases = Vec::new();
    for index in FamilyIndex::enumerate(config.max_index) {
        for &c in &config.c_list {
            for clause in Clause::applicable(index, c) {
                let s = clause.threshold().value(index, c)? * config.s_scale;
                cases.push((clause, FamilyParams::new(index, s, c)?));
            }
        }
    }
    cases
        .iter()
        .map(|(clause, params)| {
            let report = check_cm(engine, params, clause.sign(), &config.grid, config.max_order, config.tol)?;
            Ok(ClauseReport { clause: *clause, threshold: clause.threshold(), report })
        })
        .collect()
}

/// Side of the threshold probed: `Above` tests the claim that `F` is CM with
/// `s = thr (1 + eps)`; `Below` tests `-F` with `s = thr (1 - eps)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProbeDirection {
    Above,
    Below,
}

impl ProbeDirection {
    pub fn sign(self) -> CmSign {
        match self {
            ProbeDirection::Above => CmSign::Plus,
            ProbeDirection::Below => CmSign::Minus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpnessResult {
    pub params: FamilyParams,
    pub direction: ProbeDirection,
    pub threshold: ThresholdKind,
    pub epsilon: f64,
    pub witness_x: f64,
    /// `sign * F(witness_x)`; negative, so the claimed CM property fails at k = 0.
    pub witness_value: f64,
    pub witness_scale: f64,
    pub searched_range: (f64, f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConfig {
    pub tol: f64,
    pub scan_points: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig { tol: DEFAULT_TOL, scan_points: 400 }
    }
}

/// Log-spaced scan of `[lo, hi]` for a point where the order-0 condition of
/// the perturbed claim fails, refined by golden-section search around the
/// most negative sample.
#[allow(clippy::too_many_arguments)]
pub fn sharpness_probe(
    engine: &Polygamma,
    index: FamilyIndex,
    c: f64,
    threshold: ThresholdKind,
    direction: ProbeDirection,
    epsilon: f64,
    x_search: (f64, f64),
    config: &ProbeConfig,
) -> Result<SharpnessResult> {
    if !(0.0..0.5).contains(&epsilon) {
        return Err(Error::InvalidConfig(format!("epsilon must lie in [0, 0.5), got {epsilon}")));
    }
    let (lo, hi) = x_search;
    GridSpec { x_min: lo, x_max: hi, points: config.scan_points.max(2), spacing: Spacing::Log }.validate()?;
    let thr = threshold.value(index, c)?;
    let s = match direction {
        ProbeDirection::Above => thr * (1.0 + epsilon),
        ProbeDirection::Below => thr * (1.0 - epsilon),
    };
    let params = FamilyParams::new(index, s, c)?;
    let sign = direction.sign().factor();
    let eval = |x: f64| -> Option<(f64, f64)> {
        let fv = DeltaTable::for_index(engine, index, x, c, 0).and_then(|t| t.derivative(&params, 0)).ok()?;
        Some((sign * fv.value, fv.scale))
    };
    let normalized = |(v, sc): (f64, f64)| if sc > 0.0 { v / sc } else { v };

    let grid = GridSpec { x_min: lo, x_max: hi, points: config.scan_points.max(2), spacing: Spacing::Log }.points();
    let samples: Vec<Option<(f64, f64)>> = grid.par_iter().map(|&x| eval(x)).collect();
    let best = samples
        .iter()
        .enumerate()
        .filter_map(|(i, s)| s.map(|vs| (i, vs)))
        .filter(|(_, (v, sc))| *v < -config.tol * sc)
        .min_by(|a, b| normalized(a.1).total_cmp(&normalized(b.1)));
    let Some((i, mut best_vs)) = best else {
        return Err(Error::NoWitness { lo, hi });
    };
    let mut best_x = grid[i];

    // golden section on ln x between the neighbouring samples
    let (mut a, mut b) = (grid[i.saturating_sub(1)].ln(), grid[(i + 1).min(grid.len() - 1)].ln());
    let ratio = 0.5 * (5f64.sqrt() - 1.0);
    let score = |lx: f64| eval(lx.exp()).map(normalized).unwrap_or(f64::INFINITY);
    let mut x1 = b - ratio * (b - a);
    let mut x2 = a + ratio * (b - a);
    let (mut f1, mut f2) = (score(x1), score(x2));
    for _ in 0..60 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - ratio * (b - a);
            f1 = score(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + ratio * (b - a);
            f2 = score(x2);
        }
    }
    let refined_x = (0.5 * (a + b)).exp();
    if let Some(vs) = eval(refined_x) {
        if normalized(vs) < normalized(best_vs) && vs.0 < -config.tol * vs.1 {
            best_vs = vs;
            best_x = refined_x;
        }
    }

    Ok(SharpnessResult {
        params,
        direction,
        threshold,
        epsilon,
        witness_x: best_x,
        witness_value: best_vs.0,
        witness_scale: best_vs.1,
        searched_range: (lo, hi),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LimitKind {
    /// `x -> inf`, target alpha.
    Infinity,
    /// `x -> 0+` for `q = 0`, target alpha / c.
    Zero,
}

impl LimitKind {
    pub fn abscissae(self) -> &'static [f64] {
        match self {
            LimitKind::Infinity => &[1e1, 1e2, 1e3, 1e4],
            LimitKind::Zero => &[1e-2, 1e-3, 1e-4, 1e-5, 1e-6],
        }
    }

    /// Final-gap tolerance relative to the target.
    pub fn default_tolerance(self) -> f64 {
        match self {
            LimitKind::Infinity => 5e-4,
            LimitKind::Zero => 1e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub x: f64,
    pub ratio: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitTable {
    pub index: FamilyIndex,
    pub c: f64,
    pub kind: LimitKind,
    pub target: f64,
    pub rows: Vec<LimitRow>,
}

impl LimitTable {
    pub fn final_gap(&self) -> f64 {
        self.rows.last().map_or(f64::INFINITY, |r| r.gap)
    }
}

/// Tabulates the necessity ratio along [`LimitKind::abscissae`] and checks
/// that the gap to the target never grows (beyond a rounding floor) and
/// ends below `rel_tol * target`.
pub fn limit_check(engine: &Polygamma, index: FamilyIndex, c: f64, kind: LimitKind, rel_tol: f64) -> Result<LimitTable> {
    let target = match kind {
        LimitKind::Infinity => ThresholdKind::Alpha.value(index, c)?,
        LimitKind::Zero => ThresholdKind::AlphaOverC.value(index, c)?,
    };
    let rows = kind
        .abscissae()
        .iter()
        .map(|&x| {
            let ratio = match kind {
                LimitKind::Infinity => ratio_infinity(engine, index, c, x)?,
                LimitKind::Zero => ratio_zero(engine, index, c, x)?,
            };
            Ok(LimitRow { x, ratio, gap: (ratio - target).abs() })
        })
        .collect::<Result<Vec<_>>>()?;
    let floor = 1e-12 * target.abs();
    for w in rows.windows(2) {
        if w[1].gap > w[0].gap + floor {
            return Err(Error::Divergence { from: w[0].gap, to: w[1].gap, x: w[1].x });
        }
    }
    let table = LimitTable { index, c, kind, target, rows };
    let last = *table.rows.last().expect("non-empty abscissae");
    if last.gap > rel_tol * target.abs() {
        return Err(Error::NotConverged { gap: last.gap, x: last.x, tol: rel_tol * target.abs() });
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_endpoints_and_validation() {
        let g = GridSpec::default();
        let xs = g.points();
        assert_eq!(xs.len(), 60);
        assert_eq!(xs[0], 0.05);
        assert_eq!(xs[59], 50.0);
        assert!(xs.windows(2).all(|w| w[0] < w[1]));
        let lin = GridSpec { spacing: Spacing::Linear, points: 3, x_min: 1.0, x_max: 3.0 }.points();
        assert_eq!(lin, vec![1.0, 2.0, 3.0]);
        assert!(GridSpec { x_min: 0.0, ..g }.validate().is_err());
        assert!(GridSpec { x_min: 5.0, x_max: 1.0, ..g }.validate().is_err());
        assert!(GridSpec { points: 1, ..g }.validate().is_err());
    }

    #[test]
    fn clause_selection() {
        let q1 = FamilyIndex::new(3, 2, 2, 1).unwrap();
        let q0 = FamilyIndex::new(2, 1, 1, 0).unwrap();
        assert_eq!(Clause::applicable(q1, 0.5), vec![Clause::OneA, Clause::Three]);
        assert_eq!(Clause::applicable(q1, 1.0), vec![Clause::OneA, Clause::TwoA, Clause::Three]);
        assert_eq!(Clause::applicable(q0, 2.0), vec![Clause::TwoA, Clause::TwoB]);
        assert_eq!(Clause::applicable(q0, 1.0).len(), 4);
    }

    #[test]
    fn derivative_cap_is_enforced() {
        let e = Polygamma::default();
        let p = FamilyParams::new(FamilyIndex::new(3, 2, 2, 1).unwrap(), 0.5, 0.5).unwrap();
        assert!(check_cm(&e, &p, CmSign::Plus, &GridSpec::default(), 62, 1e-9).is_err());
    }

    #[test]
    fn evaluation_errors_fail_closed() {
        // orders past the engine limit at one cell make the report inconclusive
        let e = Polygamma::new(crate::EngineConfig { max_order: 20, ..Default::default() }).unwrap();
        let p = FamilyParams::new(FamilyIndex::new(3, 2, 2, 1).unwrap(), 0.5, 0.5).unwrap();
        let grid = GridSpec { x_min: 1e-300, x_max: 1.0, points: 3, spacing: Spacing::Log };
        let r = check_cm(&e, &p, CmSign::Plus, &grid, 12, 1e-9).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.error.is_some());
    }

    #[test]
    fn suite_rejects_bad_config() {
        let e = Polygamma::default();
        let bad = [
            SuiteConfig { max_index: 9, ..Default::default() },
            SuiteConfig { c_list: vec![], ..Default::default() },
            SuiteConfig { c_list: vec![0.0], ..Default::default() },
        ];
        for cfg in bad {
            assert!(theorem_suite(&e, &cfg).is_err());
        }
    }
}
